#pragma once

namespace tppg {

enum class LinkKind { Arctan, Sigmoid, ScaledArctan };

// Bounded, strictly increasing link with a closed-form primitive.
// Arctan:       h(x) = 4 + (8/pi) atan(x)            sup = 8
// Sigmoid:      h(x) = 1 + 4 e^x / (1 + e^x)         sup = 5
// ScaledArctan: h(x) = rate (1 + 2 atan(x) / pi)     sup = 2 rate
struct LinkSpec {
  LinkKind kind = LinkKind::Arctan;
  double rate = 1.0;  // ScaledArctan only

  static LinkSpec arctan();
  static LinkSpec sigmoid();
  static LinkSpec scaled_arctan(double rate);

  double h_max() const;
  void validate() const;
};

struct LinkValue {
  double h;
  double h_prime;
  double primitive;  // H with H(0) = 0
};

LinkValue link_eval(const LinkSpec& spec, double u);

// Inner-loop variants that skip unused pieces.
double link_h(const LinkSpec& spec, double u);
void link_h_hprime(const LinkSpec& spec, double u, double& h, double& h_prime);
void link_h_primitive(const LinkSpec& spec, double u, double& h, double& primitive);

}  // namespace tppg
