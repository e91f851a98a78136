#pragma once

#include <cstddef>
#include <vector>

namespace tppg {

enum class KernelKind { RestrictedLinear, Exponential, Indicator };

// Compactly supported transfer kernel: kappa(t) = 0 outside [0, support].
struct KernelSpec {
  KernelKind kind = KernelKind::RestrictedLinear;
  double support = 1.0;

  static KernelSpec restricted_linear();     // (1 - x) on [0, 1]
  static KernelSpec exponential();           // e^{-x} on [0, 5]
  static KernelSpec indicator(double c = 0.25);  // 1 on [0, c]

  void validate() const;
};

double kernel_eval(const KernelSpec& spec, double t);

// p x p grid of kernels; the common case is one spec shared by every pair.
class KernelGrid {
 public:
  explicit KernelGrid(KernelSpec shared);
  KernelGrid(std::size_t p, std::vector<KernelSpec> per_pair);  // row-major p*p

  bool shared() const { return shared_; }
  std::size_t dim() const { return p_; }  // 0 when shared (any p)
  const KernelSpec& at(std::size_t j, std::size_t k) const;
  double max_support() const;
  void validate() const;

 private:
  bool shared_;
  std::size_t p_;
  std::vector<KernelSpec> specs_;
};

}  // namespace tppg
