#pragma once

#include <cstdint>
#include <vector>

#include "tppg/events.hpp"
#include "tppg/model.hpp"

namespace tppg {

struct SimConfig {
  double horizon = 0.0;
  std::uint64_t seed = 0;
  double burn_in = 0.0;  // recommended >= 5 * kappa_supp for stationarity

  void validate() const;
};

// Exact sampling by thinning against the constant bound sum_j h_max,j.
// Events in [-burn_in, 0) are discarded; deterministic given seed.
EventData simulate(const ModelSpec& model, const SimConfig& cfg);

// Per-node (N(T) - rate T) / sqrt(rate T).
std::vector<double> mean_count_check(const EventData& data,
                                     double expected_rate);

}  // namespace tppg
