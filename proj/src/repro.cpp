#include "tppg/repro.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "tppg/discretize.hpp"
#include "tppg/rng.hpp"
#include "tppg/selection.hpp"
#include "tppg/simulate.hpp"

namespace tppg::repro {

namespace {

struct MeanSE {
  double mean = 0.0, se = 0.0;
};

MeanSE summarize(const std::vector<double>& v) {
  MeanSE r;
  const auto n = static_cast<double>(v.size());
  for (double x : v) r.mean += x;
  r.mean /= n;
  if (v.size() > 1) {
    double var = 0.0;
    for (double x : v) var += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(var / (n - 1.0) / n);
  }
  return r;
}

DesignMatrix simulate_and_discretize(const ModelSpec& model, double T,
                                     std::uint64_t seed) {
  SimConfig sim;
  sim.horizon = T;
  sim.seed = seed;
  sim.burn_in = 5.0 * model.kernels.max_support();
  const EventData data = simulate(model, sim);
  return discretize(data, choose_M(T), model.kernels);
}

FitConfig base_fit_config(WeightMode mode) {
  FitConfig fc;
  fc.weight_mode = mode;
  return fc;
}

}  // namespace

ModelSpec make_sim_model(int setting, StructureKind structure, std::size_t p) {
  if (setting != 1 && setting != 2)
    throw std::invalid_argument("make_sim_model: setting must be 1 or 2");
  KernelSpec kernel = setting == 1 ? KernelSpec::restricted_linear()
                                   : KernelSpec::exponential();
  LinkSpec link = setting == 1 ? LinkSpec::arctan() : LinkSpec::sigmoid();
  ModelSpec model{p,
                  std::vector<double>(p, 0.5),
                  make_structure(structure, p),
                  KernelGrid(kernel),
                  {link}};
  model.validate();
  return model;
}

EstimationCellResult run_estimation_cell(const Cell& cell) {
  const ModelSpec model = make_sim_model(cell.setting, cell.structure, cell.p);
  std::vector<double> l1s, l2s;
  for (int rep = 0; rep < cell.replications; ++rep) {
    const std::uint64_t seed =
        derive_seed(cell.base_seed, static_cast<std::uint64_t>(rep));
    const DesignMatrix design = simulate_and_discretize(model, cell.T, seed);

    CVConfig cv;
    cv.seed = seed;
    const FitConfig fc = base_fit_config(cell.estimator);
    const CVResult cv_res = cross_validate(design, model.links, cv, fc);

    FitConfig refit = fc;
    refit.lambda = cv_res.best_lambda;
    const FitResult res = fit(design, model.links, refit);
    l1s.push_back(rel_l1_error(res.B_hat, model.B));
    l2s.push_back(rel_fro_error(res.B_hat, model.B));
  }
  const MeanSE l1 = summarize(l1s), l2 = summarize(l2s);
  return {l1.mean, l1.se, l2.mean, l2.se};
}

AUCCellResult run_auc_cell(const Cell& cell) {
  const ModelSpec model = make_sim_model(cell.setting, cell.structure, cell.p);
  std::vector<double> aucs;
  for (int rep = 0; rep < cell.replications; ++rep) {
    const std::uint64_t seed =
        derive_seed(cell.base_seed, static_cast<std::uint64_t>(rep));
    const DesignMatrix design = simulate_and_discretize(model, cell.T, seed);
    const double lmax = lambda_max(design, model.links);
    const std::vector<double> grid = make_lambda_grid(lmax, 30, 1e-3);
    // support-recovery path: leave the intercept unpenalized so the grid
    // starts exactly at the empty graph
    FitConfig fc = base_fit_config(cell.estimator);
    fc.penalize_mu = false;
    const ROCCurve curve = roc_over_path(design, model.links, grid, model.B, fc);
    aucs.push_back(curve.auc);
  }
  const MeanSE a = summarize(aucs);
  return {a.mean, a.se};
}

double rel_l2_at_lambda(const Cell& cell, double lambda, std::uint64_t seed) {
  const ModelSpec model = make_sim_model(cell.setting, cell.structure, cell.p);
  const DesignMatrix design = simulate_and_discretize(model, cell.T, seed);
  FitConfig fc = base_fit_config(cell.estimator);
  fc.lambda = lambda;
  const FitResult res = fit(design, model.links, fc);
  return rel_fro_error(res.B_hat, model.B);
}

std::string format_mean_se(double mean, double se) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f(%.3f)", mean, se);
  return buf;
}

namespace {

void write_estimation_tables(const std::filesystem::path& out_dir,
                             const std::vector<Cell>& cells,
                             const std::vector<EstimationCellResult>& results) {
  std::ofstream t1(out_dir / "table1.csv", std::ios::binary);
  std::ofstream t2(out_dir / "table2.csv", std::ios::binary);
  if (!t1 || !t2)
    throw std::runtime_error("reproduce: cannot write output tables");
  const char* header = "setting,structure,p,T,estimator,mean,se,formatted\n";
  t1 << header;
  t2 << header;
  char buf[160];
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const EstimationCellResult& r = results[i];
    const char* st = c.structure == StructureKind::Block ? "block" : "chain";
    const std::string est = weight_mode_name(c.estimator);
    std::snprintf(buf, sizeof(buf), "%d,%s,%zu,%.0f,%s,%.6f,%.6f,%s\n",
                  c.setting, st, c.p, c.T, est.c_str(), r.mean_l1, r.se_l1,
                  format_mean_se(r.mean_l1, r.se_l1).c_str());
    t1 << buf;
    std::snprintf(buf, sizeof(buf), "%d,%s,%zu,%.0f,%s,%.6f,%.6f,%s\n",
                  c.setting, st, c.p, c.T, est.c_str(), r.mean_l2, r.se_l2,
                  format_mean_se(r.mean_l2, r.se_l2).c_str());
    t2 << buf;
  }
}

}  // namespace

void reproduce(const std::string& table, const std::string& scale,
               const std::filesystem::path& out_dir, std::uint64_t seed) {
  if (table != "t1" && table != "t2" && table != "t3")
    throw std::invalid_argument("reproduce: table must be t1, t2 or t3");
  if (scale != "desk" && scale != "full")
    throw std::invalid_argument("reproduce: scale must be desk or full");
  std::filesystem::create_directories(out_dir);

  std::vector<Cell> cells;
  if (scale == "desk") {
    Cell c;
    c.setting = 1;
    c.structure = StructureKind::Block;
    c.p = 30;
    c.T = 200.0;
    c.replications = 5;
    c.base_seed = seed;
    c.estimator =
        table == "t3" ? WeightMode::IterativeMLE : WeightMode::Naive;
    cells.push_back(c);
  } else {
    for (int setting : {1, 2})
      for (StructureKind st : {StructureKind::Block, StructureKind::Chain})
        for (std::size_t p : {std::size_t{30}, std::size_t{60}})
          for (double T : {200.0, 400.0})
            for (WeightMode est :
                 {WeightMode::Naive, WeightMode::IterativeMLE}) {
              Cell c;
              c.setting = setting;
              c.structure = st;
              c.p = p;
              c.T = T;
              c.replications = 50;
              c.base_seed = seed;
              c.estimator = est;
              cells.push_back(c);
            }
  }

  if (table == "t3") {
    std::ofstream t3(out_dir / "table3.csv", std::ios::binary);
    if (!t3) throw std::runtime_error("reproduce: cannot write table3.csv");
    t3 << "setting,structure,p,T,estimator,mean_auc,se_auc,formatted\n";
    char buf[160];
    for (const Cell& c : cells) {
      const AUCCellResult r = run_auc_cell(c);
      const char* st = c.structure == StructureKind::Block ? "block" : "chain";
      std::snprintf(buf, sizeof(buf), "%d,%s,%zu,%.0f,%s,%.6f,%.6f,%s\n",
                    c.setting, st, c.p, c.T,
                    weight_mode_name(c.estimator).c_str(), r.mean_auc, r.se_auc,
                    format_mean_se(r.mean_auc, r.se_auc).c_str());
      t3 << buf;
    }
    return;
  }

  std::vector<EstimationCellResult> results;
  results.reserve(cells.size());
  for (const Cell& c : cells) results.push_back(run_estimation_cell(c));
  write_estimation_tables(out_dir, cells, results);
}

}  // namespace tppg::repro
