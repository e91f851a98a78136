// tppg: simulate, fit and evaluate temporal point process graphical models.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tppg/bootstrap.hpp"
#include "tppg/discretize.hpp"
#include "tppg/estimator.hpp"
#include "tppg/evaluation.hpp"
#include "tppg/io.hpp"
#include "tppg/model.hpp"
#include "tppg/repro.hpp"
#include "tppg/selection.hpp"
#include "tppg/simulate.hpp"
#include "tppg/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& field,
                               const std::string& what) {
  throw std::runtime_error("config: " + field + ": " + what);
}

template <class T>
T require(const json& j, const std::string& section, const std::string& key) {
  if (!j.contains(key)) config_error(section + "." + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(section + "." + key, "wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& section, const std::string& key,
         T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(section + "." + key, "wrong type");
  }
}

struct Config {
  json raw;
  std::size_t p = 0;
  std::vector<double> mu;
  std::string structure = "none";
  std::vector<double> B;  // empty unless structure/B given
  tppg::KernelSpec kernel = tppg::KernelSpec::restricted_linear();
  tppg::LinkSpec link = tppg::LinkSpec::arctan();
  double T = 0.0;
  double burn_in = 0.0;
  std::size_t M = 0;
};

tppg::KernelSpec parse_kernel(const json& k) {
  const auto kind = require<std::string>(k, "model.kernel", "kind");
  if (kind == "restricted_linear") return tppg::KernelSpec::restricted_linear();
  if (kind == "exponential") return tppg::KernelSpec::exponential();
  if (kind == "indicator")
    return tppg::KernelSpec::indicator(
        get_or<double>(k, "model.kernel", "support", 0.25));
  config_error("model.kernel.kind", "unknown kind '" + kind + "'");
}

tppg::LinkSpec parse_link(const json& l) {
  const auto kind = require<std::string>(l, "model.link", "kind");
  if (kind == "arctan") return tppg::LinkSpec::arctan();
  if (kind == "sigmoid") return tppg::LinkSpec::sigmoid();
  if (kind == "scaled_arctan")
    return tppg::LinkSpec::scaled_arctan(
        require<double>(l, "model.link", "rate"));
  config_error("model.link.kind", "unknown kind '" + kind + "'");
}

Config load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path.string());
  Config cfg;
  try {
    f >> cfg.raw;
  } catch (const json::exception& e) {
    throw std::runtime_error("config: invalid JSON: " + std::string(e.what()));
  }
  if (!cfg.raw.contains("model")) config_error("model", "missing");
  const json& model = cfg.raw.at("model");

  cfg.p = require<std::size_t>(model, "model", "p");
  if (cfg.p == 0) config_error("model.p", "must be >= 1");

  if (model.contains("mu") && model.at("mu").is_array())
    cfg.mu = require<std::vector<double>>(model, "model", "mu");
  else
    cfg.mu.assign(cfg.p, get_or<double>(model, "model", "mu", 0.5));
  if (cfg.mu.size() != cfg.p) config_error("model.mu", "array size != p");

  cfg.structure = get_or<std::string>(model, "model", "structure", "none");
  if (cfg.structure == "block")
    cfg.B = tppg::make_structure(tppg::StructureKind::Block, cfg.p);
  else if (cfg.structure == "chain")
    cfg.B = tppg::make_structure(tppg::StructureKind::Chain, cfg.p);
  else if (cfg.structure == "none")
    cfg.B.assign(cfg.p * cfg.p, 0.0);
  else
    config_error("model.structure", "must be block, chain or none");
  if (model.contains("B_path")) {
    std::size_t r = 0, c = 0;
    cfg.B = tppg::read_matrix(
        require<std::string>(model, "model", "B_path"), r, c);
    if (r != cfg.p || c != cfg.p) config_error("model.B_path", "not p x p");
  }

  if (model.contains("kernel")) cfg.kernel = parse_kernel(model.at("kernel"));
  if (model.contains("link")) cfg.link = parse_link(model.at("link"));

  const json sim = cfg.raw.value("simulate", json::object());
  cfg.T = get_or<double>(sim, "simulate", "T", 0.0);
  cfg.burn_in = get_or<double>(sim, "simulate", "burn_in", 0.0);

  const json disc = cfg.raw.value("discretize", json::object());
  if (disc.contains("M")) {
    cfg.M = require<std::size_t>(disc, "discretize", "M");
  } else if (cfg.T > 0.0) {
    cfg.M = tppg::choose_M(
        cfg.T, get_or<double>(disc, "discretize", "M_multiplier", 10.0));
  }
  return cfg;
}

tppg::ModelSpec to_model(const Config& cfg) {
  tppg::ModelSpec model{cfg.p, cfg.mu, cfg.B, tppg::KernelGrid(cfg.kernel),
                        {cfg.link}};
  model.validate();
  return model;
}

tppg::FitConfig parse_fit_config(const Config& cfg) {
  const json f = cfg.raw.value("fit", json::object());
  tppg::FitConfig fc;
  fc.lambda = get_or<double>(f, "fit", "lambda", 0.0);
  fc.weight_mode = tppg::weight_mode_from_name(
      get_or<std::string>(f, "fit", "weight_mode", "naive"));
  fc.max_outer = get_or<int>(f, "fit", "max_outer", fc.max_outer);
  fc.max_inner = get_or<int>(f, "fit", "max_inner", fc.max_inner);
  fc.tol = get_or<double>(f, "fit", "tol", fc.tol);
  fc.penalize_mu = get_or<bool>(f, "fit", "penalize_mu", fc.penalize_mu);
  fc.validate();
  return fc;
}

tppg::CVConfig parse_cv_config(const Config& cfg, std::uint64_t seed) {
  const json c = cfg.raw.value("cv", json::object());
  tppg::CVConfig cv;
  cv.K = get_or<int>(c, "cv", "K", cv.K);
  cv.n_lambdas = get_or<int>(c, "cv", "n_lambdas", cv.n_lambdas);
  cv.lambda_min_ratio =
      get_or<double>(c, "cv", "lambda_min_ratio", cv.lambda_min_ratio);
  cv.lambda_grid =
      get_or<std::vector<double>>(c, "cv", "lambda_grid", cv.lambda_grid);
  const auto scheme = get_or<std::string>(c, "cv", "fold_scheme", "random");
  if (scheme == "random")
    cv.fold_scheme = tppg::FoldScheme::RandomBins;
  else if (scheme == "blocks")
    cv.fold_scheme = tppg::FoldScheme::ContiguousBlocks;
  else
    config_error("cv.fold_scheme", "must be random or blocks");
  cv.one_se_rule = get_or<bool>(c, "cv", "one_se", cv.one_se_rule);
  cv.seed = seed;
  cv.validate();
  return cv;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void emit_manifest(const fs::path& out, const std::string& command,
                   const Config* cfg, std::uint64_t seed, const Timer& timer,
                   const std::vector<fs::path>& outputs) {
  tppg::RunManifest m;
  m.command = command;
  m.config_snapshot = cfg ? cfg->raw.dump() : "{}";
  m.seed = seed;
  m.version = tppg::kVersion;
  m.wall_time_s = timer.elapsed();
  for (const auto& p : outputs)
    m.output_digests[p.filename().string()] = tppg::fnv1a64_file(p);
  tppg::write_manifest(fs::path(out.string() + ".manifest.json"), m);
}

tppg::DesignMatrix load_design(const Config& cfg, const fs::path& events) {
  if (!(cfg.T > 0.0)) config_error("simulate.T", "must be > 0");
  if (cfg.M == 0) config_error("discretize.M", "must be >= 1");
  const tppg::EventData data = tppg::read_events(events, cfg.p, cfg.T);
  tppg::DesignMatrix d =
      tppg::discretize(data, cfg.M, tppg::KernelGrid(cfg.kernel));
  if (d.small_m_advisory)
    std::cerr << "note: M = " << cfg.M
              << " is small relative to the asymptotic discretization "
                 "guidance; estimates may carry extra approximation error\n";
  return d;
}

void write_fit_outputs(const fs::path& out, const tppg::FitResult& res,
                       std::size_t p, std::vector<fs::path>& outputs) {
  const fs::path mu_path(out.string() + ".mu.csv");
  const fs::path b_path(out.string() + ".B.csv");
  const fs::path diag_path(out.string() + ".json");
  tppg::write_matrix(mu_path, res.mu_hat, 1, p);
  tppg::write_matrix(b_path, res.B_hat, p, p);

  json diag;
  diag["lambda"] = res.lambda;
  diag["weight_mode"] = tppg::weight_mode_name(res.weight_mode);
  diag["objective"] = res.objective;
  diag["iterations"] = res.iterations;
  std::ofstream f(diag_path, std::ios::binary);
  f << diag.dump(2) << "\n";
  outputs.insert(outputs.end(), {mu_path, b_path, diag_path});
}

int run(int argc, char** argv) {
  CLI::App app{"temporal point process graphical models"};
  app.require_subcommand(1);

  std::string config_path, out_path, events_path, fit_path, truth_path;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string table = "t1", scale = "desk";

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "config JSON path");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--threads", threads, "worker cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_path, "output path")->required();
  };

  auto* c_sim = app.add_subcommand("simulate", "sample a realization");
  add_common(c_sim, true);

  auto* c_fit = app.add_subcommand("fit", "penalized fit");
  add_common(c_fit, true);
  c_fit->add_option("--events", events_path, "event CSV")->required();
  bool fit_use_cv = false;
  c_fit->add_flag("--cv", fit_use_cv, "select lambda by cross-validation");

  auto* c_cv = app.add_subcommand("cv", "cross-validate the penalty");
  add_common(c_cv, true);
  c_cv->add_option("--events", events_path, "event CSV")->required();

  auto* c_eval = app.add_subcommand("evaluate", "compare fit to truth");
  add_common(c_eval, false);
  c_eval->add_option("--fit", fit_path, "estimated B CSV")->required();
  c_eval->add_option("--truth", truth_path, "true B CSV")->required();

  auto* c_roc = app.add_subcommand("roc", "ROC over a lambda path");
  add_common(c_roc, true);
  c_roc->add_option("--events", events_path, "event CSV")->required();
  c_roc->add_option("--truth", truth_path, "true B CSV")->required();

  auto* c_boot = app.add_subcommand("bootstrap", "stability selection");
  add_common(c_boot, true);
  c_boot->add_option("--events", events_path, "event CSV")->required();

  auto* c_repro = app.add_subcommand("reproduce", "rebuild result tables");
  c_repro->add_option("--table", table, "t1, t2 or t3");
  c_repro->add_option("--scale", scale, "desk or full");
  c_repro->add_option("--seed", seed, "RNG seed");
  c_repro->add_option("--threads", threads, "worker cap")
      ->check(CLI::PositiveNumber);
  c_repro->add_option("--out", out_path, "output directory")->required();

  CLI11_PARSE(app, argc, argv);
  Timer timer;

  if (c_sim->parsed()) {
    const Config cfg = load_config(config_path);
    tppg::ModelSpec model = to_model(cfg);
    tppg::SimConfig sim;
    sim.horizon = cfg.T;
    sim.seed = seed;
    sim.burn_in = cfg.burn_in;
    sim.validate();
    const tppg::EventData data = tppg::simulate(model, sim);
    tppg::write_events(out_path, data);
    emit_manifest(out_path, "simulate", &cfg, seed, timer, {out_path});
    std::cout << "wrote " << out_path << " (" << data.total_events()
              << " events)\n";
    return 0;
  }

  if (c_fit->parsed()) {
    const Config cfg = load_config(config_path);
    tppg::FitConfig fc = parse_fit_config(cfg);
    const tppg::DesignMatrix design = load_design(cfg, events_path);
    const std::vector<tppg::LinkSpec> links{cfg.link};
    if (fit_use_cv) {
      const tppg::CVConfig cv = parse_cv_config(cfg, seed);
      fc.lambda = tppg::cross_validate(design, links, cv, fc).best_lambda;
    }
    const tppg::FitResult res = tppg::fit(design, links, fc);
    std::vector<fs::path> outputs;
    write_fit_outputs(out_path, res, cfg.p, outputs);
    emit_manifest(out_path, "fit", &cfg, seed, timer, outputs);
    std::cout << "lambda " << res.lambda << ", wrote " << out_path
              << ".{mu,B}.csv\n";
    return 0;
  }

  if (c_cv->parsed()) {
    const Config cfg = load_config(config_path);
    const tppg::FitConfig fc = parse_fit_config(cfg);
    const tppg::CVConfig cv = parse_cv_config(cfg, seed);
    const tppg::DesignMatrix design = load_design(cfg, events_path);
    const tppg::CVResult res =
        tppg::cross_validate(design, {cfg.link}, cv, fc);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << "lambda,mean,se\n";
    char buf[96];
    for (const auto& pt : res.curve) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", pt.lambda,
                    pt.mean, pt.se);
      f << buf;
    }
    std::snprintf(buf, sizeof(buf), "# best_lambda,%.12g\n", res.best_lambda);
    f << buf;
    f.close();
    emit_manifest(out_path, "cv", &cfg, seed, timer, {out_path});
    std::cout << "best lambda " << res.best_lambda << "\n";
    return 0;
  }

  if (c_eval->parsed()) {
    std::size_t r1, c1, r2, c2;
    const std::vector<double> B_hat = tppg::read_matrix(fit_path, r1, c1);
    const std::vector<double> B_true = tppg::read_matrix(truth_path, r2, c2);
    if (r1 != r2 || c1 != c2)
      throw std::runtime_error("evaluate: matrices are not conformable");
    const double l1 = tppg::rel_l1_error(B_hat, B_true);
    const double l2 = tppg::rel_fro_error(B_hat, B_true);
    const tppg::SupportRates sr = tppg::support_rates(B_hat, B_true);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    char buf[128];
    f << "rel_l1,rel_fro,tpr,fpr\n";
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", l1, l2,
                  sr.tpr, sr.fpr);
    f << buf;
    f.close();
    emit_manifest(out_path, "evaluate", nullptr, seed, timer, {out_path});
    std::cout << "rel_l1 " << l1 << ", rel_fro " << l2 << "\n";
    return 0;
  }

  if (c_roc->parsed()) {
    const Config cfg = load_config(config_path);
    const tppg::FitConfig fc = parse_fit_config(cfg);
    const tppg::DesignMatrix design = load_design(cfg, events_path);
    std::size_t r, c;
    const std::vector<double> B_true = tppg::read_matrix(truth_path, r, c);
    if (r != cfg.p || c != cfg.p)
      throw std::runtime_error("roc: truth matrix is not p x p");
    const std::vector<tppg::LinkSpec> links{cfg.link};
    const json roc_cfg = cfg.raw.value("roc", json::object());
    const int n_lambdas = get_or<int>(roc_cfg, "roc", "n_lambdas", 30);
    const double lmax = tppg::lambda_max(design, links);
    const auto grid = tppg::make_lambda_grid(lmax, n_lambdas, 1e-3);
    const tppg::ROCCurve curve =
        tppg::roc_over_path(design, links, grid, B_true, fc);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << "fpr,tpr,lambda\n";
    char buf[96];
    for (const auto& pt : curve.points) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", pt.fpr, pt.tpr,
                    pt.lambda);
      f << buf;
    }
    std::snprintf(buf, sizeof(buf), "# auc,%.12g\n", curve.auc);
    f << buf;
    f.close();
    emit_manifest(out_path, "roc", &cfg, seed, timer, {out_path});
    std::cout << "auc " << curve.auc << "\n";
    return 0;
  }

  if (c_boot->parsed()) {
    const Config cfg = load_config(config_path);
    const tppg::FitConfig fc = parse_fit_config(cfg);
    const tppg::DesignMatrix design = load_design(cfg, events_path);
    const json b = cfg.raw.value("bootstrap", json::object());
    tppg::BootstrapConfig bc;
    bc.n_replicates =
        get_or<int>(b, "bootstrap", "n_replicates", bc.n_replicates);
    bc.n_bins_sampled = get_or<std::size_t>(b, "bootstrap", "n_bins_sampled",
                                            bc.n_bins_sampled);
    bc.target_sparsity =
        get_or<double>(b, "bootstrap", "target_sparsity", bc.target_sparsity);
    bc.keep_fraction =
        get_or<double>(b, "bootstrap", "keep_fraction", bc.keep_fraction);
    bc.retune_lambda =
        get_or<bool>(b, "bootstrap", "retune_lambda", bc.retune_lambda);
    bc.seed = seed;
    bc.validate();
    const tppg::BootstrapResult res =
        tppg::bootstrap_graph(design, {cfg.link}, bc, fc);

    const fs::path freq_path(out_path + ".frequencies.csv");
    const fs::path graph_path(out_path + ".graph.csv");
    {
      std::ofstream f(freq_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + freq_path.string());
      f << "target,source,sign,frequency\n";
      char buf[96];
      for (std::size_t j = 0; j < cfg.p; ++j)
        for (std::size_t k = 0; k < cfg.p; ++k) {
          const std::size_t i = j * cfg.p + k;
          if (res.freq_pos[i] > 0.0) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,1,%.12g\n", j, k,
                          res.freq_pos[i]);
            f << buf;
          }
          if (res.freq_neg[i] > 0.0) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,-1,%.12g\n", j, k,
                          res.freq_neg[i]);
            f << buf;
          }
        }
    }
    {
      std::ofstream f(graph_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + graph_path.string());
      f << "target,source,sign\n";
      for (const auto& e : res.graph.edges)
        f << e.target << "," << e.source << "," << e.sign << "\n";
    }
    emit_manifest(out_path, "bootstrap", &cfg, seed, timer,
                  {freq_path, graph_path});
    std::cout << "kept " << res.graph.edges.size() << " edges\n";
    return 0;
  }

  if (c_repro->parsed()) {
    tppg::repro::reproduce(table, scale, out_path, seed == 0 ? 1 : seed);
    Config dummy;
    std::vector<fs::path> outputs;
    for (const char* name : {"table1.csv", "table2.csv", "table3.csv"}) {
      const fs::path p = fs::path(out_path) / name;
      if (fs::exists(p)) outputs.push_back(p);
    }
    emit_manifest(fs::path(out_path) / "reproduce", "reproduce", nullptr, seed,
                  timer, outputs);
    std::cout << "wrote tables under " << out_path << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
