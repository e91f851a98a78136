#include "tppg/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tppg {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open for writing");
  return f;
}

}  // namespace

void write_events(const std::filesystem::path& path, const EventData& data) {
  std::vector<std::pair<double, std::size_t>> rows;
  rows.reserve(data.total_events());
  for (std::size_t j = 0; j < data.streams.size(); ++j)
    for (double t : data.streams[j].times) rows.emplace_back(t, j);
  std::sort(rows.begin(), rows.end());

  auto f = open_out(path);
  f << "node_id,time\n";
  char buf[64];
  for (const auto& [t, j] : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9f\n", j, t);
    f << buf;
  }
  if (!f) fail(path, "write failed");
}

EventData read_events(const std::filesystem::path& path, std::size_t p,
                      double horizon) {
  std::ifstream f(path);
  if (!f) fail(path, "cannot open");
  std::string line;
  if (!std::getline(f, line) || line.rfind("node_id,time", 0) != 0)
    fail(path, "expected header 'node_id,time'");

  EventData data;
  data.horizon = horizon;
  data.streams.resize(p);
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      fail(path, "line " + std::to_string(lineno) + ": missing comma");
    std::size_t node = 0;
    double t = 0.0;
    try {
      node = std::stoul(line.substr(0, comma));
      t = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      fail(path, "line " + std::to_string(lineno) + ": parse error");
    }
    if (node >= p)
      fail(path, "line " + std::to_string(lineno) + ": node_id " +
                     std::to_string(node) + " >= p");
    data.streams[node].times.push_back(t);
  }
  data.validate();  // catches out-of-range and non-monotone times
  return data;
}

void write_matrix(const std::filesystem::path& path,
                  const std::vector<double>& values, std::size_t rows,
                  std::size_t cols) {
  if (values.size() != rows * cols)
    throw std::invalid_argument("write_matrix: size mismatch");
  auto f = open_out(path);
  char buf[48];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.12g", values[r * cols + c]);
      f << buf << (c + 1 < cols ? "," : "\n");
    }
  }
  if (!f) fail(path, "write failed");
}

std::vector<double> read_matrix(const std::filesystem::path& path,
                                std::size_t& rows, std::size_t& cols) {
  std::ifstream f(path);
  if (!f) fail(path, "cannot open");
  std::vector<double> values;
  rows = 0;
  cols = 0;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(path, "row " + std::to_string(rows + 1) + ": parse error");
      }
      ++c;
    }
    if (rows == 0)
      cols = c;
    else if (c != cols)
      fail(path, "ragged rows");
    ++rows;
  }
  return values;
}

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open for digest");
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
    const auto n = static_cast<std::size_t>(f.gcount());
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!f) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return {out, 16};
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      if (c == '\n') {
        out += "\\n";
        continue;
      }
      out += c;
    }
    return out;
  };
  auto f = open_out(path);
  char buf[64];
  f << "{\n";
  f << "  \"command\": \"" << escape(m.command) << "\",\n";
  f << "  \"config\": \"" << escape(m.config_snapshot) << "\",\n";
  f << "  \"seed\": " << m.seed << ",\n";
  f << "  \"version\": \"" << escape(m.version) << "\",\n";
  std::snprintf(buf, sizeof(buf), "%.3f", m.wall_time_s);
  f << "  \"wall_time_s\": " << buf << ",\n";
  f << "  \"outputs\": {";
  bool first = true;
  for (const auto& [name, digest] : m.output_digests) {
    f << (first ? "\n" : ",\n") << "    \"" << escape(name) << "\": \""
      << digest << "\"";
    first = false;
  }
  f << (first ? "" : "\n  ") << "}\n";
  f << "}\n";
  if (!f) fail(path, "write failed");
}

}  // namespace tppg
