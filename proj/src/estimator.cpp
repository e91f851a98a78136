#include "tppg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tppg {

std::string weight_mode_name(WeightMode m) {
  switch (m) {
    case WeightMode::Naive:
      return "naive";
    case WeightMode::IterativeMLE:
      return "mle";
    case WeightMode::IterativeLS:
      return "ls";
  }
  return "naive";
}

WeightMode weight_mode_from_name(const std::string& name) {
  if (name == "naive") return WeightMode::Naive;
  if (name == "mle") return WeightMode::IterativeMLE;
  if (name == "ls") return WeightMode::IterativeLS;
  throw std::invalid_argument("unknown weight mode: " + name);
}

void FitConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("FitConfig: lambda < 0");
  if (!(tol > 0.0)) throw std::invalid_argument("FitConfig: tol must be > 0");
  if (max_outer < 1 || max_inner < 1)
    throw std::invalid_argument("FitConfig: iteration counts must be >= 1");
  if (!(step_init > 0.0) || !(step_shrink > 0.0) || !(step_shrink < 1.0))
    throw std::invalid_argument("FitConfig: bad step rule");
}

const LinkSpec& link_at(const std::vector<LinkSpec>& links, std::size_t j) {
  return links.size() == 1 ? links[0] : links[j];
}

namespace {

constexpr double kWeightFloor = 1e-6;
constexpr double kWeightCeil = 1e6;

// effective per-bin weight c_m W_j(m); empty bin_weights means c == 1
std::vector<double> effective_weights(const DesignMatrix& design,
                                      std::size_t j,
                                      std::span<const double> bin_weights,
                                      std::span<const double> W,
                                      double& t_eff) {
  const std::size_t M = design.M;
  if (!bin_weights.empty() && bin_weights.size() != M)
    throw std::invalid_argument("bin_weights size != M");
  std::vector<double> ew(M);
  double csum = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double c = bin_weights.empty() ? 1.0 : bin_weights[m];
    if (c < 0.0) throw std::invalid_argument("bin_weights must be >= 0");
    csum += c;
    ew[m] = c * W[m];
  }
  if (!(csum > 0.0)) throw std::invalid_argument("bin_weights sum to zero");
  t_eff = design.dt * csum;
  return ew;
}

// theta = (mu, beta_1..beta_p); returns the loss, fills grad when asked
double objective_theta(const DesignMatrix& design, std::size_t j,
                       const LinkSpec& link, std::span<const double> ew,
                       double t_eff, const std::vector<double>& theta,
                       std::vector<double>* grad) {
  const std::size_t p = design.p;
  const std::size_t M = design.M;
  const double dt = design.dt;
  const auto& yj = design.y[j];

  double value = 0.0;
  if (grad) std::fill(grad->begin(), grad->end(), 0.0);

  for (std::size_t m = 0; m < M; ++m) {
    const double w = ew[m];
    if (w == 0.0) continue;
    const double* x = design.x_row(j, m);
    // four independent accumulators keep the reduction off the FP latency chain
    double u0 = theta[0], u1 = 0.0, u2 = 0.0, u3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= p; k += 4) {
      u0 += theta[k + 1] * x[k];
      u1 += theta[k + 2] * x[k + 1];
      u2 += theta[k + 3] * x[k + 2];
      u3 += theta[k + 4] * x[k + 3];
    }
    for (; k < p; ++k) u0 += theta[k + 1] * x[k];
    const double u = (u0 + u1) + (u2 + u3);

    double h, big_h;
    link_h_primitive(link, u, h, big_h);
    value += w * (dt * big_h - yj[m] * u);
    if (grad) {
      const double r = w * (dt * h - yj[m]);
      (*grad)[0] += r;
      for (std::size_t k = 0; k < p; ++k) (*grad)[k + 1] += r * x[k];
    }
  }
  value /= t_eff;
  if (grad)
    for (double& g : *grad) g /= t_eff;
  if (!std::isfinite(value))
    throw std::runtime_error("node loss: non-finite value");
  return value;
}

NodeFit fit_node_weighted(const DesignMatrix& design, std::size_t j,
                          const LinkSpec& link, const FitConfig& cfg,
                          std::span<const double> bin_weights,
                          std::span<const double> W,
                          const NodeParams* warm_start, bool keep_trace) {
  const std::size_t p = design.p;
  double t_eff = 0.0;
  const std::vector<double> ew =
      effective_weights(design, j, bin_weights, W, t_eff);

  std::vector<double> x0(p + 1, 0.0);
  if (warm_start) {
    if (warm_start->beta.size() != p)
      throw std::invalid_argument("fit_node: warm start dimension");
    x0[0] = warm_start->mu;
    std::copy(warm_start->beta.begin(), warm_start->beta.end(), x0.begin() + 1);
  }

  std::vector<double> l1(p + 1, cfg.lambda);
  if (!cfg.penalize_mu) l1[0] = 0.0;

  ProxGradOptions opt;
  opt.max_iters = cfg.max_inner;
  opt.tol = cfg.tol;
  opt.step_init = cfg.step_init;
  opt.step_shrink = cfg.step_shrink;
  opt.keep_trace = keep_trace;

  auto fgrad = [&](const std::vector<double>& theta,
                   std::vector<double>* grad) {
    return objective_theta(design, j, link, ew, t_eff, theta, grad);
  };
  ProxGradResult r = prox_gradient(fgrad, l1, std::move(x0), opt);

  NodeFit out;
  out.params.mu = r.x[0];
  out.params.beta.assign(r.x.begin() + 1, r.x.end());
  out.objective = r.objective;
  out.iterations = r.iterations;
  out.trace = std::move(r.trace);
  return out;
}

std::vector<double> reweight(const DesignMatrix& design, std::size_t j,
                             const LinkSpec& link, const NodeParams& params,
                             WeightMode mode) {
  const std::size_t p = design.p;
  std::vector<double> W(design.M);
  for (std::size_t m = 0; m < design.M; ++m) {
    const double* x = design.x_row(j, m);
    double u = params.mu;
    for (std::size_t k = 0; k < p; ++k) u += params.beta[k] * x[k];
    double h, hp;
    link_h_hprime(link, u, h, hp);
    const double w = mode == WeightMode::IterativeMLE ? hp / h : hp;
    W[m] = std::clamp(w, kWeightFloor, kWeightCeil);
  }
  return W;
}

}  // namespace

double node_loss(const DesignMatrix& design, std::size_t j,
                 const NodeParams& params, const LinkSpec& link,
                 std::span<const double> bin_weights) {
  if (j >= design.p) throw std::out_of_range("node_loss: node index");
  if (params.beta.size() != design.p)
    throw std::invalid_argument("node_loss: beta size != p");
  double t_eff = 0.0;
  const std::vector<double> ew =
      effective_weights(design, j, bin_weights, design.weights[j], t_eff);
  std::vector<double> theta(design.p + 1);
  theta[0] = params.mu;
  std::copy(params.beta.begin(), params.beta.end(), theta.begin() + 1);
  return objective_theta(design, j, link, ew, t_eff, theta, nullptr);
}

void node_gradient(const DesignMatrix& design, std::size_t j,
                   const NodeParams& params, const LinkSpec& link,
                   double& d_mu, std::vector<double>& d_beta,
                   std::span<const double> bin_weights) {
  if (j >= design.p) throw std::out_of_range("node_gradient: node index");
  if (params.beta.size() != design.p)
    throw std::invalid_argument("node_gradient: beta size != p");
  double t_eff = 0.0;
  const std::vector<double> ew =
      effective_weights(design, j, bin_weights, design.weights[j], t_eff);
  std::vector<double> theta(design.p + 1);
  theta[0] = params.mu;
  std::copy(params.beta.begin(), params.beta.end(), theta.begin() + 1);
  std::vector<double> grad(design.p + 1);
  objective_theta(design, j, link, ew, t_eff, theta, &grad);
  d_mu = grad[0];
  d_beta.assign(grad.begin() + 1, grad.end());
}

NodeFit fit_node(const DesignMatrix& design, std::size_t j,
                 const LinkSpec& link, const FitConfig& cfg,
                 std::span<const double> bin_weights,
                 const NodeParams* warm_start, bool keep_trace) {
  if (j >= design.p) throw std::out_of_range("fit_node: node index");
  cfg.validate();
  return fit_node_weighted(design, j, link, cfg, bin_weights,
                           design.weights[j], warm_start, keep_trace);
}

FitResult fit(const DesignMatrix& design, const std::vector<LinkSpec>& links,
              const FitConfig& cfg, std::span<const double> bin_weights,
              const FitResult* warm_start) {
  cfg.validate();
  if (links.size() != 1 && links.size() != design.p)
    throw std::invalid_argument("fit: links size must be 1 or p");

  const std::size_t p = design.p;
  FitResult res;
  res.lambda = cfg.lambda;
  res.weight_mode = cfg.weight_mode;
  res.mu_hat.assign(p, 0.0);
  res.B_hat.assign(p * p, 0.0);
  res.objective.assign(p, 0.0);
  res.iterations.assign(p, 0);
  if (warm_start) {
    if (warm_start->mu_hat.size() != p || warm_start->B_hat.size() != p * p)
      throw std::invalid_argument("fit: warm start dimension");
    res.mu_hat = warm_start->mu_hat;
    res.B_hat = warm_start->B_hat;
  }

  const int rounds = cfg.weight_mode == WeightMode::Naive ? 1 : cfg.max_outer;
  std::vector<std::vector<double>> W = design.weights;

  for (int r = 0; r < rounds; ++r) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      NodeParams warm;
      warm.mu = res.mu_hat[j];
      warm.beta.assign(res.B_hat.begin() + j * p,
                       res.B_hat.begin() + (j + 1) * p);
      NodeFit nf;
      try {
        nf = fit_node_weighted(design, j, link_at(links, j), cfg, bin_weights,
                               W[j], (warm_start || r > 0) ? &warm : nullptr,
                               false);
      } catch (const std::exception& e) {
        throw std::runtime_error("fit: node " + std::to_string(j) + ": " +
                                 e.what());
      }
      max_change = std::max(max_change, std::abs(nf.params.mu - warm.mu));
      for (std::size_t k = 0; k < p; ++k)
        max_change =
            std::max(max_change, std::abs(nf.params.beta[k] - warm.beta[k]));
      res.mu_hat[j] = nf.params.mu;
      std::copy(nf.params.beta.begin(), nf.params.beta.end(),
                res.B_hat.begin() + j * p);
      res.objective[j] = nf.objective;
      res.iterations[j] += nf.iterations;
    }
    if (cfg.weight_mode == WeightMode::Naive) break;
    if (r > 0 && max_change < cfg.tol) break;
    if (r + 1 < rounds) {
      for (std::size_t j = 0; j < p; ++j) {
        NodeParams cur;
        cur.mu = res.mu_hat[j];
        cur.beta.assign(res.B_hat.begin() + j * p,
                        res.B_hat.begin() + (j + 1) * p);
        W[j] = reweight(design, j, link_at(links, j), cur, cfg.weight_mode);
      }
    }
  }
  return res;
}

}  // namespace tppg
