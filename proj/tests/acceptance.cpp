// Acceptance gate: runs every release criterion and prints one line per
// criterion. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tppg/bootstrap.hpp"
#include "tppg/discretize.hpp"
#include "tppg/estimator.hpp"
#include "tppg/evaluation.hpp"
#include "tppg/repro.hpp"
#include "tppg/rng.hpp"
#include "tppg/selection.hpp"
#include "tppg/simulate.hpp"
#include "tppg/solver.hpp"

namespace fs = std::filesystem;
using namespace tppg;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool pass = false;
  std::string detail;
};

void note(const std::string& msg) { std::cerr << "[acceptance] " << msg << "\n"; }

// ---------------------------------------------------------------- helpers

DesignMatrix random_design(Rng& rng, std::size_t p, std::size_t M) {
  DesignMatrix d = DesignMatrix::make_zero(p, M, 0.25 * static_cast<double>(M));
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t m = 0; m < M; ++m) {
      d.y[j][m] = static_cast<double>(rng.below(2));
      for (std::size_t k = 0; k < p; ++k)
        d.panel(j)[m * p + k] = 2.0 * rng.uniform();
    }
  return d;
}

NodeParams random_params(Rng& rng, std::size_t p, double scale) {
  NodeParams q;
  q.mu = scale * (2.0 * rng.uniform() - 1.0);
  q.beta.resize(p);
  for (auto& b : q.beta) b = scale * (2.0 * rng.uniform() - 1.0);
  return q;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// mean column of the desk-scale table (single data row, field index 5)
double table_mean(const fs::path& csv) {
  std::ifstream f(csv);
  std::string line;
  std::getline(f, line);  // header
  if (!std::getline(f, line)) throw std::runtime_error("empty table " + csv.string());
  std::stringstream ss(line);
  std::string field;
  for (int i = 0; i <= 5; ++i)
    if (!std::getline(ss, field, ','))
      throw std::runtime_error("short row in " + csv.string());
  return std::stod(field);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------- criteria

Criterion criterion_gradient() {
  Criterion c{4, "gradient matches finite differences"};
  Rng rng(41);
  const LinkSpec links[] = {LinkSpec::arctan(), LinkSpec::sigmoid()};
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t p = 2 + rng.below(4);   // <= 5
    const std::size_t M = 10 + rng.below(41);  // <= 50
    DesignMatrix d = random_design(rng, p, M);
    const LinkSpec& link = links[inst % 2];
    const NodeParams q = random_params(rng, p, 0.6);
    const std::size_t j = rng.below(p);
    double d_mu = 0.0;
    std::vector<double> d_beta;
    node_gradient(d, j, q, link, d_mu, d_beta);
    const double h = 1e-6;
    auto fd = [&](NodeParams up, NodeParams dn) {
      return (node_loss(d, j, up, link) - node_loss(d, j, dn, link)) / (2.0 * h);
    };
    NodeParams up = q, dn = q;
    up.mu += h;
    dn.mu -= h;
    worst = std::max(worst, std::abs(d_mu - fd(up, dn)) /
                                std::max(1.0, std::abs(d_mu)));
    for (std::size_t k = 0; k < p; ++k) {
      up = q;
      dn = q;
      up.beta[k] += h;
      dn.beta[k] -= h;
      worst = std::max(worst, std::abs(d_beta[k] - fd(up, dn)) /
                                  std::max(1.0, std::abs(d_beta[k])));
    }
  }
  c.pass = worst < 1e-5;
  c.detail = "worst relative error " + fmt(worst);
  return c;
}

Criterion criterion_convexity() {
  Criterion c{5, "loss is midpoint convex"};
  Rng rng(51);
  const LinkSpec links[] = {LinkSpec::arctan(), LinkSpec::sigmoid()};
  double worst = -1e300;
  for (const auto& link : links) {
    DesignMatrix d = random_design(rng, 4, 40);
    for (int seg = 0; seg < 1000; ++seg) {
      const NodeParams a = random_params(rng, 4, 1.5);
      const NodeParams b = random_params(rng, 4, 1.5);
      NodeParams mid;
      mid.mu = 0.5 * (a.mu + b.mu);
      mid.beta.resize(4);
      for (std::size_t k = 0; k < 4; ++k)
        mid.beta[k] = 0.5 * (a.beta[k] + b.beta[k]);
      const double gap =
          node_loss(d, 0, mid, link) -
          0.5 * (node_loss(d, 0, a, link) + node_loss(d, 0, b, link));
      worst = std::max(worst, gap);
    }
  }
  c.pass = worst <= 1e-9;
  c.detail = "worst midpoint gap " + fmt(worst);
  return c;
}

Criterion criterion_score_identity() {
  Criterion c{6, "reweighted gradients equal likelihood and least-squares scores"};
  Rng rng(61);
  const LinkSpec link = LinkSpec::sigmoid();
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t p = 3, M = 30;
    DesignMatrix d = random_design(rng, p, M);
    const NodeParams q = random_params(rng, p, 0.8);
    const std::size_t j = rng.below(p);

    // linear predictors and link values once
    std::vector<LinkValue> lv(M);
    for (std::size_t m = 0; m < M; ++m) {
      double u = q.mu;
      for (std::size_t k = 0; k < p; ++k) u += q.beta[k] * d.x_at(j, m, k);
      lv[m] = link_eval(link, u);
    }

    // analytic scores, assembled from their own formulas
    std::vector<double> mle(p + 1, 0.0), lsq(p + 1, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      const double gm = d.dt * lv[m].h_prime -
                        d.y[j][m] * lv[m].h_prime / lv[m].h;
      const double gl = lv[m].h_prime * (d.dt * lv[m].h - d.y[j][m]);
      mle[0] += gm;
      lsq[0] += gl;
      for (std::size_t k = 0; k < p; ++k) {
        mle[k + 1] += gm * d.x_at(j, m, k);
        lsq[k + 1] += gl * d.x_at(j, m, k);
      }
    }
    for (auto& v : mle) v /= d.horizon;
    for (auto& v : lsq) v /= d.horizon;

    auto compare = [&](const std::vector<double>& want) {
      double d_mu = 0.0;
      std::vector<double> d_beta;
      node_gradient(d, j, q, link, d_mu, d_beta);
      worst = std::max(worst, std::abs(d_mu - want[0]) /
                                  std::max(1.0, std::abs(want[0])));
      for (std::size_t k = 0; k < p; ++k)
        worst = std::max(worst, std::abs(d_beta[k] - want[k + 1]) /
                                    std::max(1.0, std::abs(want[k + 1])));
    };
    for (std::size_t m = 0; m < M; ++m)
      d.weights[j][m] = lv[m].h_prime / lv[m].h;
    compare(mle);
    for (std::size_t m = 0; m < M; ++m) d.weights[j][m] = lv[m].h_prime;
    compare(lsq);
  }
  c.pass = worst < 1e-8;
  c.detail = "worst relative difference " + fmt(worst);
  return c;
}

Criterion criterion_simulator() {
  Criterion c{7, "inter-event gaps pass the exponential KS check"};
  // arctan link at mu = 0 with no coupling: homogeneous rate 4
  ModelSpec model{1,
                  {0.0},
                  {0.0},
                  KernelGrid(KernelSpec::restricted_linear()),
                  {LinkSpec::arctan()}};
  const double rate = 4.0, T = 600.0;
  int ks_pass = 0;
  bool bands_ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const EventData data = simulate(model, SimConfig{T, seed, 0.0});
    const auto& t = data.streams[0].times;
    std::vector<double> gaps;
    gaps.reserve(t.size());
    if (!t.empty()) gaps.push_back(t[0]);
    for (std::size_t i = 1; i < t.size(); ++i) gaps.push_back(t[i] - t[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double dstat = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const double f = -std::expm1(-rate * gaps[i]);
      dstat = std::max(dstat, std::abs(f - static_cast<double>(i) / n));
      dstat = std::max(dstat, std::abs(f - static_cast<double>(i + 1) / n));
    }
    if (dstat < 1.9495 / std::sqrt(n)) ++ks_pass;  // 0.1% level
    for (double z : mean_count_check(data, rate))
      bands_ok = bands_ok && std::abs(z) <= 4.0;
  }
  c.pass = ks_pass >= 19 && bands_ok;
  c.detail = std::to_string(ks_pass) + "/20 seeds pass KS, count bands " +
             (bands_ok ? "ok" : "violated");
  return c;
}

Criterion criterion_solver() {
  Criterion c{8, "solver meets stationarity and closed forms"};
  Rng rng(81);
  double worst_kkt = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t p = 2 + rng.below(4);
    const std::size_t M = 20 + rng.below(41);
    DesignMatrix d = random_design(rng, p, M);
    const LinkSpec link = inst % 2 ? LinkSpec::sigmoid() : LinkSpec::arctan();
    FitConfig cfg;
    cfg.lambda = 0.01 + 0.1 * rng.uniform();
    cfg.tol = 1e-11;
    cfg.max_inner = 20000;
    const std::size_t j = rng.below(p);
    const NodeFit nf = fit_node(d, j, link, cfg);
    double d_mu = 0.0;
    std::vector<double> d_beta;
    node_gradient(d, j, nf.params, link, d_mu, d_beta);
    auto resid = [&](double g, double v) {
      if (v != 0.0) return std::abs(g + cfg.lambda * (v > 0.0 ? 1.0 : -1.0));
      return std::max(std::abs(g) - cfg.lambda, 0.0);
    };
    worst_kkt = std::max(worst_kkt, resid(d_mu, nf.params.mu));
    for (std::size_t k = 0; k < p; ++k)
      worst_kkt = std::max(worst_kkt, resid(d_beta[k], nf.params.beta[k]));
  }

  // diagonal quadratic with l1: coordinatewise soft threshold is exact
  Rng qrng(82);
  double worst_quad = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t n = 3 + qrng.below(5);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.5 + 4.0 * qrng.uniform();
      b[i] = 4.0 * qrng.uniform() - 2.0;
    }
    const double lambda = 0.05 + 0.5 * qrng.uniform();
    auto fgrad = [&](const std::vector<double>& x, std::vector<double>* g) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += 0.5 * a[i] * (x[i] - b[i]) * (x[i] - b[i]);
        if (g) (*g)[i] = a[i] * (x[i] - b[i]);
      }
      return acc;
    };
    ProxGradOptions opts;
    opts.max_iters = 50000;
    opts.tol = 1e-15;
    const ProxGradResult res = prox_gradient(
        fgrad, std::vector<double>(n, lambda), std::vector<double>(n, 0.0),
        opts);
    for (std::size_t i = 0; i < n; ++i)
      worst_quad = std::max(
          worst_quad, std::abs(res.x[i] - soft_threshold(b[i], lambda / a[i])));
  }
  c.pass = worst_kkt < 1e-5 && worst_quad < 1e-8;
  c.detail = "worst KKT residual " + fmt(worst_kkt) + ", worst closed-form gap " +
             fmt(worst_quad);
  return c;
}

void criterion_tables_and_determinism(Criterion& c1, Criterion& c9,
                                      const fs::path& work) {
  const fs::path dir_a = work / "desk_a", dir_b = work / "desk_b";
  note("running the desk-scale error-table reproduction (first pass)");
  repro::reproduce("t1", "desk", dir_a, 1);
  note("running the desk-scale error-table reproduction (second pass)");
  repro::reproduce("t1", "desk", dir_b, 1);

  const double l1 = table_mean(dir_a / "table1.csv");
  const double l2 = table_mean(dir_a / "table2.csv");
  c1.pass = l1 >= 0.5 && l1 <= 1.0 && l2 >= 0.12 && l2 <= 0.45;
  c1.detail = "mean rel-l1 " + fmt(l1) + " (band [0.5, 1.0]), mean rel-l2 " +
              fmt(l2) + " (band [0.12, 0.45])";

  const bool t1_same =
      slurp(dir_a / "table1.csv") == slurp(dir_b / "table1.csv");
  const bool t2_same =
      slurp(dir_a / "table2.csv") == slurp(dir_b / "table2.csv");
  c9.pass = t1_same && t2_same;
  c9.detail = std::string("tables byte-identical across reruns: ") +
              (c9.pass ? "yes" : "no");
}

Criterion criterion_auc() {
  Criterion c{2, "desk-scale AUC reproduction"};
  note("running the desk-scale ROC study");
  repro::Cell cell;
  cell.estimator = WeightMode::IterativeMLE;
  const repro::AUCCellResult r = repro::run_auc_cell(cell);
  c.pass = r.mean_auc >= 0.95;
  c.detail = "mean AUC " + fmt(r.mean_auc) + " (threshold 0.95)";
  return c;
}

Criterion criterion_scaling() {
  Criterion c{3, "error decreases with the horizon"};
  note("running the horizon scaling study");
  repro::Cell cell;  // setting 1, block, p = 30, naive

  // calibrate the penalty constant once at T = 200 by cross-validation
  const ModelSpec model =
      repro::make_sim_model(cell.setting, cell.structure, cell.p);
  SimConfig sim;
  sim.horizon = 200.0;
  sim.seed = derive_seed(99, 0);
  sim.burn_in = 5.0 * model.kernels.max_support();
  const EventData pilot = simulate(model, sim);
  const DesignMatrix pilot_design =
      discretize(pilot, choose_M(200.0), model.kernels);
  CVConfig cv;
  cv.n_lambdas = 10;
  cv.seed = 99;
  FitConfig fc;
  const double lambda200 =
      cross_validate(pilot_design, model.links, cv, fc).best_lambda;
  auto rate = [&](double T) {
    return std::sqrt(std::log(std::max<double>(cell.p, T)) / T);
  };
  const double scale = lambda200 / rate(200.0);

  std::vector<double> e200, e400;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    repro::Cell c200 = cell, c400 = cell;
    c400.T = 400.0;
    const std::uint64_t seed = derive_seed(7, rep);
    e200.push_back(repro::rel_l2_at_lambda(c200, scale * rate(200.0), seed));
    e400.push_back(repro::rel_l2_at_lambda(c400, scale * rate(400.0), seed));
  }
  const double m200 = median(e200), m400 = median(e400);
  c.pass = m400 < m200;
  c.detail = "median rel-l2 " + fmt(m400) + " at T=400 vs " + fmt(m200) +
             " at T=200";
  return c;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "tppg_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::vector<Criterion> results;
  auto run = [&](auto&& f, const char* what) {
    note(std::string("checking ") + what);
    try {
      results.push_back(f());
    } catch (const std::exception& e) {
      Criterion c{0, what};
      c.detail = std::string("exception: ") + e.what();
      results.push_back(c);
    }
  };

  // fast analytic criteria first
  run(criterion_gradient, "gradient correctness");
  run(criterion_convexity, "convexity");
  run(criterion_score_identity, "score identities");
  run(criterion_simulator, "simulator distribution");
  run(criterion_solver, "solver optimality");

  // heavy simulation studies
  Criterion c1{1, "desk-scale error-table reproduction"};
  Criterion c9{9, "pipeline determinism"};
  try {
    criterion_tables_and_determinism(c1, c9, work);
  } catch (const std::exception& e) {
    c1.detail = c9.detail = std::string("exception: ") + e.what();
  }
  results.push_back(c1);
  results.push_back(c9);
  run(criterion_auc, "AUC reproduction");
  run(criterion_scaling, "horizon scaling");

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  bool all = true;
  for (const auto& c : results) {
    std::printf("criterion %d (%s): %s — %s\n", c.id, c.title.c_str(),
                c.pass ? "PASS" : "FAIL", c.detail.c_str());
    all = all && c.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
