#include "probcon/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "probcon/errors.hpp"
#include "probcon/special.hpp"

namespace probcon {

GaussianHyper::GaussianHyper(Eigen::VectorXd mu, Eigen::MatrixXd sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != mu.size()) {
    throw std::invalid_argument("GaussianHyper: dimension mismatch");
  }
  double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::domain_error("GaussianHyper: sigma is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DecompositionError("GaussianHyper: sigma is not positive definite");
  }
  mu_ = std::move(mu);
  cov_ = std::move(sigma);
  chol_ = llt.matrixL();
  diagonal_ = false;
}

GaussianHyper GaussianHyper::diagonal(Eigen::VectorXd mu, Eigen::VectorXd variances) {
  if (mu.size() != variances.size()) {
    throw std::invalid_argument("GaussianHyper: dimension mismatch");
  }
  for (Eigen::Index i = 0; i < variances.size(); ++i) {
    if (!(variances[i] > 0.0)) {
      throw DecompositionError("GaussianHyper: variances must be positive");
    }
  }
  GaussianHyper h;
  h.mu_ = std::move(mu);
  h.var_ = std::move(variances);
  h.diagonal_ = true;
  return h;
}

Eigen::MatrixXd GaussianHyper::covariance() const {
  if (diagonal_) return var_.asDiagonal();
  return cov_;
}

const Eigen::VectorXd& GaussianHyper::variances() const {
  if (!diagonal_) {
    throw std::logic_error("GaussianHyper: variances() requires the diagonal variant");
  }
  return var_;
}

double GaussianHyper::quad_form(const Eigen::VectorXd& a) const {
  if (a.size() != mu_.size()) {
    throw std::invalid_argument("GaussianHyper: dimension mismatch");
  }
  if (diagonal_) return (a.array().square() * var_.array()).sum();
  Eigen::VectorXd la = chol_.transpose() * a;
  return la.squaredNorm();
}

Eigen::VectorXd GaussianHyper::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != mu_.size()) {
    throw std::invalid_argument("GaussianHyper: dimension mismatch");
  }
  if (diagonal_) return rhs.array() / var_.array();
  Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(rhs);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd GaussianHyper::precision() const {
  if (diagonal_) return var_.cwiseInverse().asDiagonal();
  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(mu_.size(), mu_.size());
  Eigen::MatrixXd y = chol_.triangularView<Eigen::Lower>().solve(identity);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

double GaussianHyper::log_det() const {
  if (diagonal_) return var_.array().log().sum();
  return 2.0 * chol_.diagonal().array().log().sum();
}

double soc_margin(const GaussianHyper& h, const ProbabilisticConstraint& pc) {
  const LinearConstraint& c = pc.linear;
  if (c.is_degenerate()) {
    throw std::domain_error("soc_margin: degenerate (all-zero) constraint");
  }
  double sd = std::sqrt(h.quad_form(c.a));
  return c.b - c.a.dot(h.mu()) - std_normal_quantile(pc.eta) * sd;
}

double prob_leq(const GaussianHyper& h, const LinearConstraint& c) {
  if (c.is_degenerate()) {
    throw std::domain_error("prob_leq: degenerate (all-zero) constraint");
  }
  double sd = std::sqrt(h.quad_form(c.a));
  return std_normal_cdf((c.b - c.a.dot(h.mu())) / sd);
}

MonteCarloEstimate prob_leq_montecarlo(const GaussianHyper& h, const LinearConstraint& c,
                                       std::int64_t n_samples, RngHandle rng) {
  if (c.a.size() != h.dimension()) {
    throw std::invalid_argument("prob_leq_montecarlo: dimension mismatch");
  }
  if (n_samples < 1) {
    throw std::domain_error("prob_leq_montecarlo: n_samples must be >= 1");
  }
  std::int64_t hits = 0;
  if (h.is_diagonal()) {
    for (std::int64_t s = 0; s < n_samples; ++s) {
      if (c.is_satisfied(rng.mvn_diagonal(h.mu(), h.variances()))) ++hits;
    }
  } else {
    Eigen::MatrixXd cov = h.covariance();
    for (std::int64_t s = 0; s < n_samples; ++s) {
      if (c.is_satisfied(rng.mvn(h.mu(), cov))) ++hits;
    }
  }
  double p = static_cast<double>(hits) / static_cast<double>(n_samples);
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return {p, se};
}

FeasibilityReport in_feasible_set(const GaussianHyper& h, const ConstraintSet& cs) {
  FeasibilityReport report;
  report.margins.reserve(cs.size());
  for (const auto& pc : cs) {
    double m = soc_margin(h, pc);
    report.margins.push_back(m);
    if (m < 0.0) report.feasible = false;
  }
  return report;
}

}  // namespace probcon
