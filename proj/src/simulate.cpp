#include "tppg/simulate.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "tppg/rng.hpp"

namespace tppg {

void SimConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: T must be > 0");
  if (burn_in < 0.0)
    throw std::invalid_argument("SimConfig: burn_in must be >= 0");
}

EventData simulate(const ModelSpec& model, const SimConfig& cfg) {
  model.validate();
  cfg.validate();

  const std::size_t p = model.p;
  const double t_end = cfg.burn_in + cfg.horizon;
  const double max_supp = model.kernels.max_support();
  const bool shared_kernel = model.kernels.shared();

  double bound = 0.0;
  for (std::size_t j = 0; j < p; ++j) bound += model.link(j).h_max();
  if (!std::isfinite(bound) || !(bound > 0.0))
    throw std::runtime_error("simulate: intensity bound is not finite");

  std::vector<std::vector<double>> times(p);   // internal clock, from 0
  std::vector<std::size_t> window(p, 0);       // first event within max_supp
  std::vector<double> influence(p), lambda(p);

  Rng rng(cfg.seed);
  double t = 0.0;
  for (;;) {
    t += rng.exponential(bound);
    if (t > t_end) break;

    for (std::size_t k = 0; k < p; ++k) {
      while (window[k] < times[k].size() && times[k][window[k]] < t - max_supp)
        ++window[k];
    }

    double total = 0.0;
    if (shared_kernel) {
      const KernelSpec& kappa = model.kernels.at(0, 0);
      for (std::size_t k = 0; k < p; ++k) {
        double acc = 0.0;
        for (std::size_t i = window[k]; i < times[k].size(); ++i)
          acc += kernel_eval(kappa, t - times[k][i]);
        influence[k] = acc;
      }
      for (std::size_t j = 0; j < p; ++j) {
        double u = model.mu[j];
        const double* row = model.B.data() + j * p;
        for (std::size_t k = 0; k < p; ++k) u += row[k] * influence[k];
        lambda[j] = link_h(model.link(j), u);
        total += lambda[j];
      }
    } else {
      for (std::size_t j = 0; j < p; ++j) {
        double u = model.mu[j];
        for (std::size_t k = 0; k < p; ++k) {
          const double b = model.beta(j, k);
          if (b == 0.0) continue;
          const KernelSpec& kappa = model.kernels.at(j, k);
          double acc = 0.0;
          for (std::size_t i = window[k]; i < times[k].size(); ++i)
            acc += kernel_eval(kappa, t - times[k][i]);
          u += b * acc;
        }
        lambda[j] = link_h(model.link(j), u);
        total += lambda[j];
      }
    }
    if (!std::isfinite(total))
      throw std::runtime_error("simulate: non-finite intensity");
    assert(total <= bound * (1.0 + 1e-12));

    if (rng.uniform() * bound >= total) continue;  // thinned

    double pick = rng.uniform() * total;
    std::size_t node = p - 1;
    for (std::size_t j = 0; j < p; ++j) {
      pick -= lambda[j];
      if (pick <= 0.0) {
        node = j;
        break;
      }
    }
    times[node].push_back(t);
  }

  EventData out;
  out.horizon = cfg.horizon;
  out.streams.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (double s : times[j])
      if (s >= cfg.burn_in) out.streams[j].times.push_back(s - cfg.burn_in);
  }
  return out;
}

std::vector<double> mean_count_check(const EventData& data,
                                     double expected_rate) {
  if (!(expected_rate > 0.0))
    throw std::invalid_argument("mean_count_check: rate must be positive");
  if (!(data.horizon > 0.0))
    throw std::invalid_argument("mean_count_check: empty horizon");
  const double mean = expected_rate * data.horizon;
  std::vector<double> z;
  z.reserve(data.streams.size());
  for (const auto& s : data.streams)
    z.push_back((static_cast<double>(s.times.size()) - mean) / std::sqrt(mean));
  return z;
}

}  // namespace tppg
