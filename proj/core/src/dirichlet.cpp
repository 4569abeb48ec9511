#include "probcon/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "probcon/errors.hpp"
#include "probcon/special.hpp"

namespace probcon {

namespace {

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

DirichletHyper::DirichletHyper(Eigen::VectorXd concentration)
    : alpha(std::move(concentration)) {
  if (alpha.size() == 0) {
    throw std::invalid_argument("DirichletHyper: empty concentration vector");
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw std::invalid_argument("DirichletHyper: entries must be positive and finite");
    }
  }
}

GroupedCoefficients group_coefficients(const Eigen::VectorXd& a, double b,
                                       const DirichletHyper& hyper) {
  if (a.size() != hyper.alpha.size()) {
    throw std::invalid_argument("group_coefficients: dimension mismatch");
  }
  GroupedCoefficients g;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    double d = a[j] - b;
    if (d == 0.0) continue;
    auto it = std::find(g.lambdas.begin(), g.lambdas.end(), d);
    if (it == g.lambdas.end()) {
      g.lambdas.push_back(d);
      g.dofs.push_back(2.0 * hyper.alpha[j]);
    } else {
      g.dofs[static_cast<std::size_t>(it - g.lambdas.begin())] += 2.0 * hyper.alpha[j];
    }
  }
  return g;
}

CumulantVector cumulants(const GroupedCoefficients& g) {
  if (g.empty()) {
    throw std::domain_error("cumulants: degenerate distribution (empty grouping)");
  }
  CumulantVector k;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double l = g.lambdas[i], r = g.dofs[i];
    double l2 = l * l;
    k.kappa1 += l * r;
    k.kappa2 += 2.0 * l2 * r;
    k.kappa3 += 8.0 * l2 * l * r;
    k.kappa4 += 48.0 * l2 * l2 * r;
  }
  return k;
}

double prob_leq_edgeworth(const DirichletHyper& hyper, const LinearConstraint& c,
                          EdgeworthOrder order) {
  GroupedCoefficients g = group_coefficients(c.a, c.b, hyper);
  if (g.empty()) {
    // a'theta equals b exactly on the simplex, and the closed inequality holds.
    return 1.0;
  }
  CumulantVector k = cumulants(g);
  if (!(k.kappa2 > 0.0)) {
    throw std::domain_error("prob_leq_edgeworth: zero variance");
  }
  double sd = std::sqrt(k.kappa2);
  double s = -k.kappa1 / sd;
  double skew = k.kappa3 / (k.kappa2 * sd);
  double phi = std_normal_pdf(s);
  double p = std_normal_cdf(s) - (skew / 6.0) * hermite(2, s) * phi;
  if (order == EdgeworthOrder::second) {
    double kurt = k.kappa4 / (k.kappa2 * k.kappa2);
    p -= phi * ((kurt / 24.0) * hermite(3, s) + (skew * skew / 72.0) * hermite(5, s));
  }
  return clamp01(p);
}

double prob_leq_exact(const DirichletHyper& hyper, const LinearConstraint& c,
                      const QuadratureConfig& cfg) {
  cfg.validate();
  GroupedCoefficients g = group_coefficients(c.a, c.b, hyper);
  if (g.empty()) return 1.0;

  // A combination with all weights of one sign never crosses zero.
  bool any_pos = false, any_neg = false;
  for (double l : g.lambdas) (l > 0.0 ? any_pos : any_neg) = true;
  if (!any_neg) return 0.0;
  if (!any_pos) return 1.0;

  const std::size_t u = g.size();
  double half_slope = 0.0;  // integrand limit at t -> 0
  double log_c = 0.0;       // log of prod |lambda_k|^(-r_k/2)
  double rho = 0.0;         // sum r_k / 2, the tail decay exponent
  for (std::size_t i = 0; i < u; ++i) {
    half_slope += 0.5 * g.dofs[i] * g.lambdas[i];
    log_c -= 0.5 * g.dofs[i] * std::log(std::abs(g.lambdas[i]));
    rho += 0.5 * g.dofs[i];
  }

  // Truncation point: beyond T the integrand is bounded by C t^-(1+rho),
  // whose remaining mass C T^-rho / (rho pi) must stay under abs_tol/10.
  const double pi = 3.141592653589793;
  double log_T = (log_c - std::log(rho * pi * cfg.abs_tol / 10.0)) / rho;
  if (log_T > 69.0) { // T beyond ~1e30; the envelope bound is unattainable
    throw NumericalError("prob_leq_exact: truncation bound unattainable for this grouping");
  }
  double T = std::exp(std::max(log_T, 0.0));

  auto integrand = [&](double t) {
    if (t < 1e-8) return half_slope;
    double phase = 0.0, log_den = 0.0;
    for (std::size_t i = 0; i < u; ++i) {
      double lt = g.lambdas[i] * t;
      phase += 0.5 * g.dofs[i] * std::atan(lt);
      log_den += 0.25 * g.dofs[i] * std::log1p(lt * lt);
    }
    // log_den can exceed 700 for large dofs; the value underflows to 0.
    if (log_den > 700.0) return 0.0;
    return std::sin(phase) * std::exp(-log_den) / t;
  };

  QuadratureConfig inner = cfg;
  inner.abs_tol = 0.9 * cfg.abs_tol * pi;
  QuadratureOutcome out = adaptive_quadrature(integrand, 0.0, T, inner);
  if (!out.converged) {
    throw NumericalError("prob_leq_exact: quadrature did not reach the requested accuracy");
  }
  return clamp01(0.5 - out.value / pi);
}

MonteCarloEstimate prob_leq_montecarlo(const DirichletHyper& hyper,
                                       const LinearConstraint& c,
                                       std::int64_t n_samples, RngHandle rng) {
  if (c.a.size() != hyper.alpha.size()) {
    throw std::invalid_argument("prob_leq_montecarlo: dimension mismatch");
  }
  if (n_samples < 1) {
    throw std::domain_error("prob_leq_montecarlo: n_samples must be >= 1");
  }
  // Evaluate the event as sum (a_j - b) theta_j <= 0, which is exact where
  // a_j - b vanishes and is invariant under rescaling of (a, b).
  Eigen::VectorXd shifted = c.a.array() - c.b;
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    Eigen::VectorXd theta = rng.dirichlet(hyper.alpha);
    if (shifted.dot(theta) <= 0.0) ++hits;
  }
  double p = static_cast<double>(hits) / static_cast<double>(n_samples);
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return {p, se};
}

bool in_feasible_set(const DirichletHyper& hyper, const ProbabilisticConstraint& pc,
                     InversionMethod method) {
  double p = 0.0;
  switch (method) {
    case InversionMethod::edgeworth1:
      p = prob_leq_edgeworth(hyper, pc.linear, EdgeworthOrder::first);
      break;
    case InversionMethod::edgeworth2:
      p = prob_leq_edgeworth(hyper, pc.linear, EdgeworthOrder::second);
      break;
    case InversionMethod::exact:
      p = prob_leq_exact(hyper, pc.linear);
      break;
    case InversionMethod::montecarlo:
      throw std::invalid_argument(
          "in_feasible_set: montecarlo is not a membership method; "
          "use prob_leq_montecarlo");
  }
  return p >= pc.eta;
}

}  // namespace probcon
