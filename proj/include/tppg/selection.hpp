#pragma once

#include <cstdint>
#include <vector>

#include "tppg/estimator.hpp"

namespace tppg {

enum class FoldScheme { RandomBins, ContiguousBlocks };

struct CVConfig {
  int K = 5;
  std::vector<double> lambda_grid;  // descending; empty -> auto grid
  int n_lambdas = 30;
  double lambda_min_ratio = 1e-3;
  FoldScheme fold_scheme = FoldScheme::RandomBins;
  std::uint64_t seed = 0;
  bool one_se_rule = false;

  void validate() const;
};

struct CVCurvePoint {
  double lambda = 0.0;
  double mean = 0.0;  // mean held-out loss over folds
  double se = 0.0;
};

struct CVResult {
  double best_lambda = 0.0;
  std::vector<CVCurvePoint> curve;
};

// Smallest penalty whose fit has an all-zero B: the largest beta-gradient
// coordinate at the per-node unpenalized mu-only optimum. Degenerate designs
// (x identically zero) yield 0 and set *degenerate.
double lambda_max(const DesignMatrix& design,
                  const std::vector<LinkSpec>& links,
                  bool* degenerate = nullptr);

// Log-spaced descending grid from lmax down to lmax * min_ratio.
std::vector<double> make_lambda_grid(double lmax, int n, double min_ratio);

// Bin indices per fold; disjoint, exhaustive, sizes differ by at most 1
// for RandomBins.
std::vector<std::vector<std::size_t>> make_folds(std::size_t M,
                                                 const CVConfig& cfg);

// Fit on K-1 folds per lambda (warm-started down the path), score the
// unpenalized loss on held-out bins. best_lambda is the argmin of the mean
// curve (or the one-SE choice). Deterministic given cfg.seed.
CVResult cross_validate(const DesignMatrix& design,
                        const std::vector<LinkSpec>& links,
                        const CVConfig& cfg, const FitConfig& fit_cfg);

}  // namespace tppg
