#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tppg/discretize.hpp"
#include "tppg/links.hpp"
#include "tppg/solver.hpp"

namespace tppg {

struct NodeParams {
  double mu = 0.0;
  std::vector<double> beta;  // size p
};

enum class WeightMode { Naive, IterativeMLE, IterativeLS };

std::string weight_mode_name(WeightMode m);
WeightMode weight_mode_from_name(const std::string& name);

struct FitConfig {
  double lambda = 0.0;
  WeightMode weight_mode = WeightMode::Naive;
  int max_outer = 5;     // reweighting rounds
  int max_inner = 2000;  // prox-gradient iterations per node fit
  double tol = 1e-8;
  double step_init = 1.0;
  double step_shrink = 0.5;
  bool penalize_mu = true;

  void validate() const;
};

struct FitResult {
  std::vector<double> mu_hat;    // size p
  std::vector<double> B_hat;     // row-major p*p
  std::vector<double> objective; // final penalized loss per node
  std::vector<int> iterations;   // inner iterations per node, summed over rounds
  double lambda = 0.0;
  WeightMode weight_mode = WeightMode::Naive;
};

// Discretized per-node loss
//   (1/T_eff) sum_m c_m W_j(m) [ dt H(u_m) - y_{j,m} u_m ],
//   u_m = mu + <beta, x_{j,m}>,  T_eff = dt sum_m c_m.
// bin_weights c are resampling/fold multiplicities; empty means all ones.
double node_loss(const DesignMatrix& design, std::size_t j,
                 const NodeParams& params, const LinkSpec& link,
                 std::span<const double> bin_weights = {});

void node_gradient(const DesignMatrix& design, std::size_t j,
                   const NodeParams& params, const LinkSpec& link,
                   double& d_mu, std::vector<double>& d_beta,
                   std::span<const double> bin_weights = {});

struct NodeFit {
  NodeParams params;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // accepted objective values (diagnostic)
};

NodeFit fit_node(const DesignMatrix& design, std::size_t j,
                 const LinkSpec& link, const FitConfig& cfg,
                 std::span<const double> bin_weights = {},
                 const NodeParams* warm_start = nullptr,
                 bool keep_trace = false);

// links has size 1 (shared) or p. Nodes are fit independently; Iterative
// modes alternate full refits with weight updates W = h'/h (MLE) or W = h'
// (LS), clamped to [1e-6, 1e6], until parameters move less than tol or
// max_outer rounds elapse.
FitResult fit(const DesignMatrix& design, const std::vector<LinkSpec>& links,
              const FitConfig& cfg, std::span<const double> bin_weights = {},
              const FitResult* warm_start = nullptr);

const LinkSpec& link_at(const std::vector<LinkSpec>& links, std::size_t j);

}  // namespace tppg
