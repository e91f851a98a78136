#include "tppg/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tppg {

const LinkSpec& ModelSpec::link(std::size_t j) const {
  return links.size() == 1 ? links[0] : links[j];
}

void ModelSpec::validate() const {
  if (p == 0) throw std::invalid_argument("ModelSpec: p must be >= 1");
  if (mu.size() != p) throw std::invalid_argument("ModelSpec: mu size != p");
  if (B.size() != p * p) throw std::invalid_argument("ModelSpec: B size != p*p");
  for (double b : B)
    if (!std::isfinite(b))
      throw std::invalid_argument("ModelSpec: B has a non-finite entry");
  for (double m : mu)
    if (!std::isfinite(m))
      throw std::invalid_argument("ModelSpec: mu has a non-finite entry");
  if (links.size() != 1 && links.size() != p)
    throw std::invalid_argument("ModelSpec: links size must be 1 or p");
  for (const auto& l : links) l.validate();
  kernels.validate();
  if (!kernels.shared() && kernels.dim() != p)
    throw std::invalid_argument("ModelSpec: kernel grid dim != p");
}

double linear_predictor(const ModelSpec& model, const EventData& data,
                        std::size_t j, double t) {
  if (j >= model.p) throw std::out_of_range("linear_predictor: node index");
  double u = model.mu[j];
  for (std::size_t k = 0; k < model.p; ++k) {
    const double b = model.beta(j, k);
    if (b == 0.0) continue;
    const KernelSpec& kappa = model.kernels.at(j, k);
    const auto& times = data.streams[k].times;
    // strict past within the kernel support
    auto hi = std::lower_bound(times.begin(), times.end(), t);
    double acc = 0.0;
    for (auto it = hi; it != times.begin();) {
      --it;
      const double lag = t - *it;
      if (lag > kappa.support) break;
      acc += kernel_eval(kappa, lag);
    }
    u += b * acc;
  }
  return u;
}

double intensity(const ModelSpec& model, const EventData& data, std::size_t j,
                 double t) {
  return link_h(model.link(j), linear_predictor(model, data, j, t));
}

}  // namespace tppg
