#include "tppg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tppg/rng.hpp"

namespace tppg {

void CVConfig::validate() const {
  if (K < 2) throw std::invalid_argument("CVConfig: K must be >= 2");
  if (!lambda_grid.empty()) {
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
      if (!(lambda_grid[i] > 0.0))
        throw std::invalid_argument("CVConfig: lambda_grid must be positive");
      if (i > 0 && lambda_grid[i] > lambda_grid[i - 1])
        throw std::invalid_argument("CVConfig: lambda_grid must be descending");
    }
  } else {
    if (n_lambdas < 1)
      throw std::invalid_argument("CVConfig: n_lambdas must be >= 1");
    if (!(lambda_min_ratio > 0.0) || !(lambda_min_ratio <= 1.0))
      throw std::invalid_argument("CVConfig: lambda_min_ratio in (0, 1]");
  }
}

double lambda_max(const DesignMatrix& design,
                  const std::vector<LinkSpec>& links, bool* degenerate) {
  design.validate();
  const std::size_t p = design.p;
  const std::size_t M = design.M;
  const double dt = design.dt;
  const double T = design.horizon;

  bool any_x = false;
  double best = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const LinkSpec& link = link_at(links, j);
    const auto& W = design.weights[j];
    const auto& yj = design.y[j];

    // unpenalized mu-only optimum: sum_m W dt h(mu) = sum_m W y,
    // h increasing so the weighted residual is monotone in mu
    auto residual = [&](double mu) {
      double r = 0.0;
      for (std::size_t m = 0; m < M; ++m)
        r += W[m] * (dt * link_h(link, mu) - yj[m]);
      return r / T;
    };
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (residual(lo) > 0.0 && guard++ < 60) lo *= 2.0;
    guard = 0;
    while (residual(hi) < 0.0 && guard++ < 60) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) <= 0.0 ? lo : hi) = mid;
    }
    const double mu_hat = 0.5 * (lo + hi);

    const double h_mu = link_h(link, mu_hat);
    std::vector<double> g(p, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
      const double r = W[m] * (dt * h_mu - yj[m]);
      const double* x = design.x_row(j, m);
      for (std::size_t k = 0; k < p; ++k) {
        if (x[k] != 0.0) any_x = true;
        g[k] += r * x[k];
      }
    }
    for (std::size_t k = 0; k < p; ++k)
      best = std::max(best, std::abs(g[k]) / T);
  }
  if (degenerate) *degenerate = !any_x;
  return any_x ? best : 0.0;
}

std::vector<double> make_lambda_grid(double lmax, int n, double min_ratio) {
  if (!(lmax > 0.0)) throw std::invalid_argument("make_lambda_grid: lmax <= 0");
  if (n < 1) throw std::invalid_argument("make_lambda_grid: n < 1");
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double step = std::log(min_ratio) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i)
    grid[i] = lmax * std::exp(step * static_cast<double>(i));
  return grid;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t M,
                                                 const CVConfig& cfg) {
  cfg.validate();
  const auto K = static_cast<std::size_t>(cfg.K);
  if (M < K) throw std::invalid_argument("make_folds: M < K");
  std::vector<std::vector<std::size_t>> folds(K);
  if (cfg.fold_scheme == FoldScheme::ContiguousBlocks) {
    for (std::size_t f = 0; f < K; ++f) {
      const std::size_t lo = f * M / K, hi = (f + 1) * M / K;
      for (std::size_t m = lo; m < hi; ++m) folds[f].push_back(m);
    }
  } else {
    std::vector<std::size_t> perm(M);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(derive_seed(cfg.seed, 0x0f01d5));
    for (std::size_t i = M - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(i + 1)]);
    for (std::size_t i = 0; i < M; ++i) folds[i % K].push_back(perm[i]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
  }
  for (const auto& f : folds)
    if (f.empty()) throw std::invalid_argument("make_folds: empty fold");
  return folds;
}

CVResult cross_validate(const DesignMatrix& design,
                        const std::vector<LinkSpec>& links,
                        const CVConfig& cfg, const FitConfig& fit_cfg) {
  cfg.validate();
  fit_cfg.validate();

  std::vector<double> grid = cfg.lambda_grid;
  if (grid.empty()) {
    const double lmax = lambda_max(design, links);
    if (!(lmax > 0.0))
      throw std::invalid_argument("cross_validate: degenerate design");
    grid = make_lambda_grid(lmax, cfg.n_lambdas, cfg.lambda_min_ratio);
  }

  const auto folds = make_folds(design.M, cfg);
  const std::size_t K = folds.size();
  const std::size_t L = grid.size();
  const std::size_t p = design.p;

  std::vector<std::vector<double>> score(L, std::vector<double>(K, 0.0));
  for (std::size_t f = 0; f < K; ++f) {
    std::vector<double> c_train(design.M, 1.0), c_test(design.M, 0.0);
    for (std::size_t m : folds[f]) {
      c_train[m] = 0.0;
      c_test[m] = 1.0;
    }
    FitResult prev;
    for (std::size_t l = 0; l < L; ++l) {
      FitConfig fc = fit_cfg;
      fc.lambda = grid[l];
      const FitResult res =
          fit(design, links, fc, c_train, l == 0 ? nullptr : &prev);
      double held_out = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        NodeParams params;
        params.mu = res.mu_hat[j];
        params.beta.assign(res.B_hat.begin() + j * p,
                           res.B_hat.begin() + (j + 1) * p);
        held_out += node_loss(design, j, params, link_at(links, j), c_test);
      }
      score[l][f] = held_out;
      prev = res;
    }
  }

  CVResult out;
  out.curve.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    double mean = 0.0;
    for (double s : score[l]) mean += s;
    mean /= static_cast<double>(K);
    double var = 0.0;
    for (double s : score[l]) var += (s - mean) * (s - mean);
    var /= static_cast<double>(K - 1);
    out.curve[l] = {grid[l], mean, std::sqrt(var / static_cast<double>(K))};
  }

  std::size_t best = 0;
  for (std::size_t l = 1; l < L; ++l)
    if (out.curve[l].mean < out.curve[best].mean) best = l;
  if (cfg.one_se_rule) {
    const double cap = out.curve[best].mean + out.curve[best].se;
    for (std::size_t l = 0; l <= best; ++l) {
      if (out.curve[l].mean <= cap) {
        best = l;
        break;
      }
    }
  }
  out.best_lambda = grid[best];
  return out;
}

}  // namespace tppg
