#include "tppg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tppg {

KernelSpec KernelSpec::restricted_linear() {
  return {KernelKind::RestrictedLinear, 1.0};
}

KernelSpec KernelSpec::exponential() { return {KernelKind::Exponential, 5.0}; }

KernelSpec KernelSpec::indicator(double c) {
  return {KernelKind::Indicator, c};
}

void KernelSpec::validate() const {
  if (!(support > 0.0) || !std::isfinite(support))
    throw std::invalid_argument("KernelSpec: support must be positive finite");
}

double kernel_eval(const KernelSpec& spec, double t) {
  if (t < 0.0 || t > spec.support) return 0.0;
  switch (spec.kind) {
    case KernelKind::RestrictedLinear:
      return 1.0 - t;
    case KernelKind::Exponential:
      return std::exp(-t);
    case KernelKind::Indicator:
      return 1.0;
  }
  return 0.0;
}

KernelGrid::KernelGrid(KernelSpec shared)
    : shared_(true), p_(0), specs_{shared} {}

KernelGrid::KernelGrid(std::size_t p, std::vector<KernelSpec> per_pair)
    : shared_(false), p_(p), specs_(std::move(per_pair)) {
  if (specs_.size() != p * p)
    throw std::invalid_argument("KernelGrid: expected p*p specs");
}

const KernelSpec& KernelGrid::at(std::size_t j, std::size_t k) const {
  return shared_ ? specs_[0] : specs_[j * p_ + k];
}

double KernelGrid::max_support() const {
  double s = 0.0;
  for (const auto& spec : specs_) s = std::max(s, spec.support);
  return s;
}

void KernelGrid::validate() const {
  for (const auto& spec : specs_) spec.validate();
}

}  // namespace tppg
