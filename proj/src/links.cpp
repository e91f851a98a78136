#include "tppg/links.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tppg {

namespace {

constexpr double kPi = std::numbers::pi;

inline double sigmoid(double u) {
  return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u))
                  : std::exp(u) / (1.0 + std::exp(u));
}

inline double softplus(double u) {
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// x atan x - ln(1 + x^2)/2, the primitive of atan with value 0 at 0.
inline double atan_primitive(double u) {
  return u * std::atan(u) - 0.5 * std::log1p(u * u);
}

}  // namespace

LinkSpec LinkSpec::arctan() { return {LinkKind::Arctan, 1.0}; }

LinkSpec LinkSpec::sigmoid() { return {LinkKind::Sigmoid, 1.0}; }

LinkSpec LinkSpec::scaled_arctan(double rate) {
  return {LinkKind::ScaledArctan, rate};
}

double LinkSpec::h_max() const {
  switch (kind) {
    case LinkKind::Arctan:
      return 8.0;
    case LinkKind::Sigmoid:
      return 5.0;
    case LinkKind::ScaledArctan:
      return 2.0 * rate;
  }
  return 0.0;
}

void LinkSpec::validate() const {
  if (kind == LinkKind::ScaledArctan && !(rate > 0.0))
    throw std::invalid_argument("LinkSpec: ScaledArctan rate must be positive");
}

LinkValue link_eval(const LinkSpec& spec, double u) {
  LinkValue v{};
  switch (spec.kind) {
    case LinkKind::Arctan:
      v.h = 4.0 + (8.0 / kPi) * std::atan(u);
      v.h_prime = (8.0 / kPi) / (1.0 + u * u);
      v.primitive = 4.0 * u + (8.0 / kPi) * atan_primitive(u);
      break;
    case LinkKind::Sigmoid: {
      const double s = sigmoid(u);
      v.h = 1.0 + 4.0 * s;
      v.h_prime = 4.0 * s * (1.0 - s);
      v.primitive = u + 4.0 * (softplus(u) - std::log(2.0));
      break;
    }
    case LinkKind::ScaledArctan:
      v.h = spec.rate * (1.0 + (2.0 / kPi) * std::atan(u));
      v.h_prime = spec.rate * (2.0 / kPi) / (1.0 + u * u);
      v.primitive = spec.rate * (u + (2.0 / kPi) * atan_primitive(u));
      break;
  }
  return v;
}

double link_h(const LinkSpec& spec, double u) {
  switch (spec.kind) {
    case LinkKind::Arctan:
      return 4.0 + (8.0 / kPi) * std::atan(u);
    case LinkKind::Sigmoid:
      return 1.0 + 4.0 * sigmoid(u);
    case LinkKind::ScaledArctan:
      return spec.rate * (1.0 + (2.0 / kPi) * std::atan(u));
  }
  return 0.0;
}

void link_h_hprime(const LinkSpec& spec, double u, double& h, double& h_prime) {
  const LinkValue v = link_eval(spec, u);
  h = v.h;
  h_prime = v.h_prime;
}

void link_h_primitive(const LinkSpec& spec, double u, double& h,
                      double& primitive) {
  const LinkValue v = link_eval(spec, u);
  h = v.h;
  primitive = v.primitive;
}

}  // namespace tppg
