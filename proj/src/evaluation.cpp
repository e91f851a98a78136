#include "tppg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tppg {

namespace {

void check_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("matrix dimensions do not match");
}

}  // namespace

double rel_l1_error(std::span<const double> B_hat,
                    std::span<const double> B_true) {
  check_same_size(B_hat, B_true);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < B_hat.size(); ++i) {
    num += std::abs(B_hat[i] - B_true[i]);
    den += std::abs(B_true[i]);
  }
  if (den == 0.0) throw std::invalid_argument("rel_l1_error: B_true is zero");
  return num / den;
}

double rel_fro_error(std::span<const double> B_hat,
                     std::span<const double> B_true) {
  check_same_size(B_hat, B_true);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < B_hat.size(); ++i) {
    const double d = B_hat[i] - B_true[i];
    num += d * d;
    den += B_true[i] * B_true[i];
  }
  if (den == 0.0) throw std::invalid_argument("rel_fro_error: B_true is zero");
  return num / den;
}

SupportRates support_rates(std::span<const double> B_hat,
                           std::span<const double> B_true, double threshold) {
  check_same_size(B_hat, B_true);
  std::size_t tp = 0, fp = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < B_hat.size(); ++i) {
    const bool est = std::abs(B_hat[i]) > threshold;
    const bool truth = B_true[i] != 0.0;
    if (truth) {
      ++pos;
      if (est) ++tp;
    } else {
      ++neg;
      if (est) ++fp;
    }
  }
  SupportRates r;
  r.tpr = pos ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0;
  r.fpr = neg ? static_cast<double>(fp) / static_cast<double>(neg) : 0.0;
  return r;
}

ROCCurve roc_assemble(std::vector<ROCPoint> raw) {
  for (const auto& pt : raw)
    if (pt.fpr < 0.0 || pt.fpr > 1.0 || pt.tpr < 0.0 || pt.tpr > 1.0)
      throw std::invalid_argument("roc_assemble: rate outside [0, 1]");
  std::sort(raw.begin(), raw.end(), [](const ROCPoint& a, const ROCPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  ROCCurve curve;
  curve.points.reserve(raw.size() + 2);
  curve.points.push_back({0.0, 0.0, 0.0});
  for (auto& pt : raw) curve.points.push_back(pt);
  curve.points.push_back({1.0, 1.0, 0.0});
  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  curve.auc = auc;
  return curve;
}

ROCCurve roc_over_path(const DesignMatrix& design,
                       const std::vector<LinkSpec>& links,
                       const std::vector<double>& lambda_grid,
                       std::span<const double> B_true,
                       const FitConfig& fit_cfg) {
  if (B_true.size() != design.p * design.p)
    throw std::invalid_argument("roc_over_path: B_true size");
  bool any = false;
  for (double b : B_true) any = any || b != 0.0;
  if (!any) throw std::invalid_argument("roc_over_path: B_true has no support");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (lambda_grid[i] > lambda_grid[i - 1])
      throw std::invalid_argument("roc_over_path: grid must be descending");

  std::vector<ROCPoint> pts;
  pts.reserve(lambda_grid.size());
  FitResult prev;
  for (std::size_t l = 0; l < lambda_grid.size(); ++l) {
    FitConfig fc = fit_cfg;
    fc.lambda = lambda_grid[l];
    const FitResult res = fit(design, links, fc, {}, l == 0 ? nullptr : &prev);
    const SupportRates r = support_rates(res.B_hat, B_true);
    pts.push_back({r.fpr, r.tpr, lambda_grid[l]});
    prev = res;
  }
  return roc_assemble(std::move(pts));
}

SignedGraph extract_graph(std::span<const double> B_hat, std::size_t p,
                          double threshold) {
  if (B_hat.size() != p * p)
    throw std::invalid_argument("extract_graph: B size != p*p");
  if (threshold < 0.0)
    throw std::invalid_argument("extract_graph: threshold < 0");
  SignedGraph g;
  g.p = p;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k) {
      const double b = B_hat[j * p + k];
      if (std::abs(b) > threshold)
        g.edges.push_back({j, k, b > 0.0 ? 1 : -1});
    }
  return g;
}

std::vector<double> make_structure(StructureKind kind, std::size_t p) {
  if (p == 0) throw std::invalid_argument("make_structure: p must be >= 1");
  std::vector<double> B(p * p, 0.0);
  auto toeplitz_entry = [](std::size_t lag) {
    switch (lag) {
      case 1:
      case 3:
        return 0.3;
      case 2:
      case 4:
        return -0.3;
      default:
        return 0.0;
    }
  };
  if (kind == StructureKind::Block) {
    if (p % 5 != 0)
      throw std::invalid_argument("make_structure: Block needs p % 5 == 0");
    for (std::size_t b = 0; b < p / 5; ++b)
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t k = 0; k < 5; ++k) {
          const std::size_t lag = i > k ? i - k : k - i;
          B[(b * 5 + i) * p + (b * 5 + k)] = toeplitz_entry(lag);
        }
  } else {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < p; ++k) {
        const std::size_t lag = i > k ? i - k : k - i;
        if (lag == 1) B[i * p + k] = 0.3;
        if (lag == 2) B[i * p + k] = -0.3;
      }
  }
  return B;
}

}  // namespace tppg
