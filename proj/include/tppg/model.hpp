#pragma once

#include <cstddef>
#include <vector>

#include "tppg/events.hpp"
#include "tppg/kernels.hpp"
#include "tppg/links.hpp"

namespace tppg {

// Generative description: per-node intensity is
//   lambda_j(t) = h_j(mu_j + sum_k beta_{j,k} x_{j,k}(t)),
// with x_{j,k}(t) the kernel sum over the strict past of node k.
struct ModelSpec {
  std::size_t p = 0;
  std::vector<double> mu;       // size p
  std::vector<double> B;        // row-major p*p, B[j*p + k] = beta_{j,k}
  KernelGrid kernels;
  std::vector<LinkSpec> links;  // size 1 (shared) or p

  const LinkSpec& link(std::size_t j) const;
  double beta(std::size_t j, std::size_t k) const { return B[j * p + k]; }
  void validate() const;
};

// Conditional intensity of node j at time t; events at exactly t do not
// contribute (left-continuous influence).
double intensity(const ModelSpec& model, const EventData& data, std::size_t j,
                 double t);

// The linear predictor mu_j + <beta_j, x_j(t)> before the link is applied.
double linear_predictor(const ModelSpec& model, const EventData& data,
                        std::size_t j, double t);

}  // namespace tppg
