#pragma once

#include <cstdint>
#include <vector>

#include "tppg/estimator.hpp"
#include "tppg/evaluation.hpp"

namespace tppg {

struct BootstrapConfig {
  int n_replicates = 50;
  std::size_t n_bins_sampled = 0;  // 0 -> M
  double target_sparsity = 0.05;   // fraction of p^2 entries
  double keep_fraction = 0.5;
  std::uint64_t seed = 0;
  bool retune_lambda = true;  // false: reuse the full-data lambda

  void validate() const;
};

// Bisection over (0, lambda_max] for the penalty whose fitted support
// fraction is closest to target (within 10% relative, at most 30 steps).
// When even the smallest lambda tried stays sparser, *unreachable is set.
double lambda_for_sparsity(const DesignMatrix& design,
                           const std::vector<LinkSpec>& links, double target,
                           const FitConfig& fit_cfg,
                           std::span<const double> bin_weights = {},
                           bool* unreachable = nullptr);

struct BootstrapResult {
  SignedGraph graph;
  std::vector<double> freq_pos;  // p*p, fraction of replicates with +edge
  std::vector<double> freq_neg;
};

// Stability selection: each replicate resamples bins with replacement
// (integer multiplicities in the loss), tunes lambda to the target sparsity,
// fits, and records the signed support. Edges whose per-sign frequency
// reaches keep_fraction survive; an edge whose two signs only pass combined
// does not.
BootstrapResult bootstrap_graph(const DesignMatrix& design,
                                const std::vector<LinkSpec>& links,
                                const BootstrapConfig& cfg,
                                const FitConfig& fit_cfg);

}  // namespace tppg
