#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tppg/estimator.hpp"

namespace tppg {

struct SignedEdge {
  std::size_t target = 0;  // j: whose intensity is influenced
  std::size_t source = 0;  // k: whose history influences
  int sign = 0;            // +1 excitatory, -1 inhibitory
};

struct SignedGraph {
  std::size_t p = 0;
  std::vector<SignedEdge> edges;
};

struct ROCPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double lambda = 0.0;
};

struct ROCCurve {
  std::vector<ROCPoint> points;  // sorted by fpr, (0,0) and (1,1) included
  double auc = 0.0;
};

// sum |Bhat - Btrue| / sum |Btrue|; throws when Btrue is all zero.
double rel_l1_error(std::span<const double> B_hat,
                    std::span<const double> B_true);

// ||Bhat - Btrue||_F^2 / ||Btrue||_F^2.
double rel_fro_error(std::span<const double> B_hat,
                     std::span<const double> B_true);

struct SupportRates {
  double tpr = 0.0;
  double fpr = 0.0;
};

// Support agreement over all p^2 ordered pairs, diagonal included.
SupportRates support_rates(std::span<const double> B_hat,
                           std::span<const double> B_true,
                           double threshold = 0.0);

// Sort by (fpr, tpr), prepend (0,0), append (1,1), trapezoidal area.
ROCCurve roc_assemble(std::vector<ROCPoint> raw);

// One fit per lambda (descending, warm-started); each fit's support against
// supp(B_true) contributes one curve point.
ROCCurve roc_over_path(const DesignMatrix& design,
                       const std::vector<LinkSpec>& links,
                       const std::vector<double>& lambda_grid,
                       std::span<const double> B_true,
                       const FitConfig& fit_cfg);

SignedGraph extract_graph(std::span<const double> B_hat, std::size_t p,
                          double threshold = 0.0);

enum class StructureKind { Block, Chain };

// Block: p/5 diagonal 5x5 symmetric Toeplitz blocks, first row
// (0, 0.3, -0.3, 0.3, -0.3). Chain: p x p symmetric Toeplitz, first row
// (0, 0.3, -0.3, 0, ..., 0).
std::vector<double> make_structure(StructureKind kind, std::size_t p);

}  // namespace tppg
