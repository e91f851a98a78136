#include "tppg/bootstrap.hpp"

#include <cmath>
#include <stdexcept>

#include "tppg/rng.hpp"
#include "tppg/selection.hpp"

namespace tppg {

void BootstrapConfig::validate() const {
  if (n_replicates < 1)
    throw std::invalid_argument("BootstrapConfig: n_replicates must be >= 1");
  if (!(target_sparsity > 0.0) || !(target_sparsity <= 1.0))
    throw std::invalid_argument("BootstrapConfig: target_sparsity in (0, 1]");
  if (!(keep_fraction > 0.0))
    throw std::invalid_argument("BootstrapConfig: keep_fraction must be > 0");
}

namespace {

double support_fraction(const FitResult& res, std::size_t p) {
  std::size_t nz = 0;
  for (double b : res.B_hat)
    if (b != 0.0) ++nz;
  return static_cast<double>(nz) / static_cast<double>(p * p);
}

}  // namespace

double lambda_for_sparsity(const DesignMatrix& design,
                           const std::vector<LinkSpec>& links, double target,
                           const FitConfig& fit_cfg,
                           std::span<const double> bin_weights,
                           bool* unreachable) {
  if (!(target > 0.0) || !(target <= 1.0))
    throw std::invalid_argument("lambda_for_sparsity: target in (0, 1]");
  if (unreachable) *unreachable = false;

  const double lmax = lambda_max(design, links);
  if (!(lmax > 0.0))
    throw std::invalid_argument("lambda_for_sparsity: degenerate design");

  auto sparsity_at = [&](double lambda, const FitResult* warm,
                         FitResult& out) {
    FitConfig fc = fit_cfg;
    fc.lambda = lambda;
    out = fit(design, links, fc, bin_weights, warm);
    return support_fraction(out, design.p);
  };

  double lo = lmax * 1e-6, hi = lmax;
  FitResult scratch;
  const double s_lo = sparsity_at(lo, nullptr, scratch);
  double best_lambda = lo, best_gap = std::abs(s_lo - target);
  if (s_lo < target) {
    // even a near-zero penalty stays sparser than requested
    if (unreachable) *unreachable = true;
    return lo;
  }
  FitResult warm = scratch;
  for (int it = 0; it < 30; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double s = sparsity_at(mid, &warm, scratch);
    warm = scratch;
    const double gap = std::abs(s - target);
    if (gap < best_gap) {
      best_gap = gap;
      best_lambda = mid;
    }
    if (gap <= 0.1 * target) break;
    (s >= target ? lo : hi) = mid;
  }
  return best_lambda;
}

BootstrapResult bootstrap_graph(const DesignMatrix& design,
                                const std::vector<LinkSpec>& links,
                                const BootstrapConfig& cfg,
                                const FitConfig& fit_cfg) {
  cfg.validate();
  const std::size_t p = design.p;
  const std::size_t M = design.M;
  const std::size_t n_bins = cfg.n_bins_sampled ? cfg.n_bins_sampled : M;

  double frozen_lambda = 0.0;
  if (!cfg.retune_lambda)
    frozen_lambda =
        lambda_for_sparsity(design, links, cfg.target_sparsity, fit_cfg);

  BootstrapResult out;
  out.freq_pos.assign(p * p, 0.0);
  out.freq_neg.assign(p * p, 0.0);

  for (int r = 0; r < cfg.n_replicates; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    std::vector<double> c(M, 0.0);
    for (std::size_t i = 0; i < n_bins; ++i) c[rng.below(M)] += 1.0;

    try {
      const double lambda =
          cfg.retune_lambda
              ? lambda_for_sparsity(design, links, cfg.target_sparsity,
                                    fit_cfg, c)
              : frozen_lambda;
      FitConfig fc = fit_cfg;
      fc.lambda = lambda;
      const FitResult res = fit(design, links, fc, c);
      for (std::size_t i = 0; i < p * p; ++i) {
        if (res.B_hat[i] > 0.0) out.freq_pos[i] += 1.0;
        if (res.B_hat[i] < 0.0) out.freq_neg[i] += 1.0;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("bootstrap replicate " + std::to_string(r) +
                               ": " + e.what());
    }
  }
  const auto n = static_cast<double>(cfg.n_replicates);
  for (std::size_t i = 0; i < p * p; ++i) {
    out.freq_pos[i] /= n;
    out.freq_neg[i] /= n;
  }

  out.graph.p = p;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k) {
      const double fp = out.freq_pos[j * p + k];
      const double fn = out.freq_neg[j * p + k];
      if (fp >= cfg.keep_fraction && fp > fn)
        out.graph.edges.push_back({j, k, 1});
      else if (fn >= cfg.keep_fraction && fn > fp)
        out.graph.edges.push_back({j, k, -1});
      // a tie at the threshold has no majority sign and is dropped
    }
  return out;
}

}  // namespace tppg
