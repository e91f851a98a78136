#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "tppg/events.hpp"
#include "tppg/kernels.hpp"

namespace tppg {

// Binned design on M equal subintervals of [0, T]:
//   y[j][m]   = events of node j in [m dt, (m+1) dt)   (last bin closed)
//   x panel j = row-major M x p with entry (m, k) = x_{j,k}(m dt),
//               the kernel sum over events of node k strictly before m dt
//   weights   = W_j(m dt), initialized to 1
// When the kernel grid is shared all panels alias one buffer.
struct DesignMatrix {
  std::size_t p = 0;
  std::size_t M = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<std::vector<double>> y;        // p x M, integer-valued counts
  std::vector<std::vector<double>> weights;  // p x M
  std::vector<std::shared_ptr<std::vector<double>>> panels;  // p entries
  bool small_m_advisory = false;  // M below the asymptotic guidance

  static DesignMatrix make_zero(std::size_t p, std::size_t M, double horizon);

  const double* x_row(std::size_t j, std::size_t m) const {
    return panels[j]->data() + m * p;
  }
  double x_at(std::size_t j, std::size_t m, std::size_t k) const {
    return (*panels[j])[m * p + k];
  }
  std::vector<double>& panel(std::size_t j) { return *panels[j]; }
  void validate() const;
};

DesignMatrix discretize(const EventData& data, std::size_t M,
                        const KernelGrid& kernels);

// Number of subintervals; the standing choice is multiplier 10.
std::size_t choose_M(double horizon, double multiplier = 10.0);

}  // namespace tppg
