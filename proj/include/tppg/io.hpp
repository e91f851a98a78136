#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tppg/events.hpp"

namespace tppg {

// Event CSV: header "node_id,time", 0-based ids, times with 9 decimals,
// rows sorted by time (ties by node id).
void write_events(const std::filesystem::path& path, const EventData& data);
EventData read_events(const std::filesystem::path& path, std::size_t p,
                      double horizon);

// Matrix CSV: one row per line, "%.12g" entries, no header.
void write_matrix(const std::filesystem::path& path,
                  const std::vector<double>& values, std::size_t rows,
                  std::size_t cols);
std::vector<double> read_matrix(const std::filesystem::path& path,
                                std::size_t& rows, std::size_t& cols);

std::string fnv1a64_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string config_snapshot;  // JSON text
  std::uint64_t seed = 0;
  std::string version;
  double wall_time_s = 0.0;
  std::map<std::string, std::string> output_digests;  // path -> digest
};

// Written next to the main output as <out>.manifest.json.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace tppg
