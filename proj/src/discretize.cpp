#include "tppg/discretize.hpp"

#include <cmath>
#include <stdexcept>

namespace tppg {

DesignMatrix DesignMatrix::make_zero(std::size_t p, std::size_t M,
                                     double horizon) {
  DesignMatrix d;
  d.p = p;
  d.M = M;
  d.horizon = horizon;
  d.dt = horizon / static_cast<double>(M);
  d.y.assign(p, std::vector<double>(M, 0.0));
  d.weights.assign(p, std::vector<double>(M, 1.0));
  d.panels.reserve(p);
  for (std::size_t j = 0; j < p; ++j)
    d.panels.push_back(std::make_shared<std::vector<double>>(M * p, 0.0));
  return d;
}

void DesignMatrix::validate() const {
  if (p == 0 || M == 0) throw std::invalid_argument("DesignMatrix: empty");
  if (y.size() != p || weights.size() != p || panels.size() != p)
    throw std::invalid_argument("DesignMatrix: inconsistent dimensions");
  for (std::size_t j = 0; j < p; ++j) {
    if (y[j].size() != M || weights[j].size() != M ||
        panels[j]->size() != M * p)
      throw std::invalid_argument("DesignMatrix: inconsistent dimensions");
    for (double w : weights[j])
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("DesignMatrix: weights must be positive");
  }
}

namespace {

// Fill the M x p panel for target node j: entry (m, k) is the kernel sum
// over events of node k strictly before the grid point m dt.
void fill_panel(std::vector<double>& panel, const EventData& data,
                const KernelGrid& kernels, std::size_t j, std::size_t p,
                std::size_t M, double dt) {
  for (std::size_t k = 0; k < p; ++k) {
    const KernelSpec& kappa = kernels.at(j, k);
    const auto& times = data.streams[k].times;
    std::size_t lo = 0, hi = 0;
    for (std::size_t m = 0; m < M; ++m) {
      const double g = static_cast<double>(m) * dt;
      while (hi < times.size() && times[hi] < g) ++hi;
      while (lo < hi && times[lo] < g - kappa.support) ++lo;
      double acc = 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        acc += kernel_eval(kappa, g - times[i]);
      panel[m * p + k] = acc;
    }
  }
}

}  // namespace

DesignMatrix discretize(const EventData& data, std::size_t M,
                        const KernelGrid& kernels) {
  if (M == 0) throw std::invalid_argument("discretize: M must be >= 1");
  data.validate();
  kernels.validate();

  const std::size_t p = data.node_count();
  const double T = data.horizon;
  DesignMatrix d;
  d.p = p;
  d.M = M;
  d.horizon = T;
  d.dt = T / static_cast<double>(M);

  // bins are [m dt, (m+1) dt), last one closed on the right
  d.y.assign(p, std::vector<double>(M, 0.0));
  for (std::size_t j = 0; j < p; ++j) {
    for (double t : data.streams[j].times) {
      auto m = static_cast<std::size_t>(t / T * static_cast<double>(M));
      if (m >= M) m = M - 1;
      while (m + 1 < M && (static_cast<double>(m) + 1.0) * d.dt <= t) ++m;
      while (m > 0 && static_cast<double>(m) * d.dt > t) --m;
      d.y[j][m] += 1.0;
    }
  }

  d.weights.assign(p, std::vector<double>(M, 1.0));

  d.panels.resize(p);
  if (kernels.shared()) {
    auto panel = std::make_shared<std::vector<double>>(M * p, 0.0);
    fill_panel(*panel, data, kernels, 0, p, M, d.dt);
    for (std::size_t j = 0; j < p; ++j) d.panels[j] = panel;
  } else {
    for (std::size_t j = 0; j < p; ++j) {
      d.panels[j] = std::make_shared<std::vector<double>>(M * p, 0.0);
      fill_panel(*d.panels[j], data, kernels, j, p, M, d.dt);
    }
  }

  // advisory only: the discretization guidance asks for M large relative to
  // sqrt(s) T^{5/4} log^2(p v T), with s taken as p
  const double pm = std::max(static_cast<double>(p), T);
  const double guide =
      std::sqrt(static_cast<double>(p)) * std::pow(T, 1.25) *
      std::pow(std::log(pm), 2.0);
  d.small_m_advisory = static_cast<double>(M) < guide;

  return d;
}

std::size_t choose_M(double horizon, double multiplier) {
  if (!(horizon > 0.0)) throw std::invalid_argument("choose_M: T must be > 0");
  const double v = std::round(multiplier * horizon);
  if (!(v >= 1.0)) throw std::invalid_argument("choose_M: nonpositive result");
  return static_cast<std::size_t>(v);
}

}  // namespace tppg
