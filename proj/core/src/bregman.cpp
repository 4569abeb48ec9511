#include "probcon/bregman.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "probcon/errors.hpp"
#include "probcon/special.hpp"

namespace probcon {

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DecompositionError(std::string(who) + ": matrix is not positive definite");
  }
  return llt;
}

void symmetrize(Eigen::MatrixXd& m) {
  m = 0.5 * (m + m.transpose()).eval();
}

double trace_violation(const Eigen::MatrixXd& sigma, const TraceConstraint& tc) {
  return tc.a.dot(sigma * tc.a) - tc.z;
}

}  // namespace

WishartHyperprior::WishartHyperprior(Eigen::MatrixXd scale) : lambda(std::move(scale)) {
  checked_llt(lambda, "WishartHyperprior");
  symmetrize(lambda);
}

WishartHyperprior WishartHyperprior::scaled_identity(double tau, int n) {
  if (!(tau > 0.0)) throw std::domain_error("WishartHyperprior: tau must be > 0");
  return WishartHyperprior(tau * Eigen::MatrixXd::Identity(n, n));
}

TraceConstraint::TraceConstraint(Eigen::VectorXd direction, double bound)
    : a(std::move(direction)), z(bound) {
  if (a.size() == 0 || (a.array() == 0.0).all()) {
    throw std::invalid_argument("TraceConstraint: direction must be nonzero");
  }
  if (!(z > 0.0)) {
    throw std::domain_error("TraceConstraint: bound must be positive");
  }
}

double logdet_divergence(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw std::invalid_argument("logdet_divergence: dimension mismatch");
  }
  auto llt_x = checked_llt(X, "logdet_divergence");
  auto llt_y = checked_llt(Y, "logdet_divergence");
  const Eigen::Index n = X.rows();
  double trace = llt_y.solve(X).trace();
  double logdet_x = 2.0 * Eigen::MatrixXd(llt_x.matrixL()).diagonal().array().log().sum();
  double logdet_y = 2.0 * Eigen::MatrixXd(llt_y.matrixL()).diagonal().array().log().sum();
  return trace - (logdet_x - logdet_y) - static_cast<double>(n);
}

TraceConstraint trace_bound_from_constraint(const ProbabilisticConstraint& pc,
                                            const Eigen::VectorXd& mu) {
  if (!(pc.eta > 0.5)) {
    throw std::domain_error("trace_bound_from_constraint: requires eta > 0.5");
  }
  double margin = pc.linear.b - pc.linear.a.dot(mu);
  if (!(margin > 0.0)) {
    throw InfeasibleError(
        "trace_bound_from_constraint: b - a'mu <= 0, no SPD covariance is "
        "feasible at this mean");
  }
  double q = margin / std_normal_quantile(pc.eta);
  return TraceConstraint(pc.linear.a, q * q);
}

Eigen::MatrixXd project_single(const Eigen::MatrixXd& base, const TraceConstraint& tc) {
  checked_llt(base, "project_single");
  if (base.rows() != tc.a.size()) {
    throw std::invalid_argument("project_single: dimension mismatch");
  }
  double q = tc.a.dot(base * tc.a);
  double nu = std::max(0.0, (q - tc.z) / (tc.z * q));
  if (nu == 0.0) return base;
  // Sherman-Morrison form of (base^{-1} + nu a a')^{-1}.
  Eigen::VectorXd sa = base * tc.a;
  Eigen::MatrixXd sigma = base - (nu / (1.0 + nu * q)) * (sa * sa.transpose());
  symmetrize(sigma);
  return sigma;
}

Eigen::VectorXd project_single_diagonal(const Eigen::VectorXd& base_diag,
                                        const TraceConstraint& tc) {
  if (base_diag.size() != tc.a.size()) {
    throw std::invalid_argument("project_single_diagonal: dimension mismatch");
  }
  for (Eigen::Index i = 0; i < base_diag.size(); ++i) {
    if (!(base_diag[i] > 0.0)) {
      throw DecompositionError("project_single_diagonal: variances must be positive");
    }
  }
  Eigen::ArrayXd a2s = tc.a.array().square() * base_diag.array();
  double q = a2s.sum();
  if (q <= tc.z) return base_diag;

  // f(nu) = sum a_i^2 s_i / (1 + nu a_i^2 s_i) decreases from q to 0.
  auto f = [&](double nu) { return (a2s / (1.0 + nu * a2s)).sum(); };
  double lo = 0.0, hi = 1.0;
  while (f(hi) > tc.z) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > tc.z ? lo : hi) = mid;
  }
  double nu = 0.5 * (lo + hi);
  return (base_diag.array() / (1.0 + nu * tc.a.array().square() * base_diag.array())).matrix();
}

CyclicProjectionResult cyclic_project(const Eigen::MatrixXd& base,
                                      const std::vector<TraceConstraint>& tcs,
                                      int max_sweeps, double tol) {
  checked_llt(base, "cyclic_project");
  CyclicProjectionResult result;
  result.sigma = base;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (const auto& tc : tcs) {
      result.sigma = project_single(result.sigma, tc);
    }
    ++result.sweeps;
    double worst = 0.0;
    for (const auto& tc : tcs) {
      worst = std::max(worst, trace_violation(result.sigma, tc));
    }
    result.violation_trace.push_back(worst);
    result.max_violation = worst;
    if (worst <= tol) {
      result.converged = true;
      break;
    }
    if (result.sweeps % 50 == 0) {
      // Numerical refresh: resymmetrize and verify positive definiteness.
      symmetrize(result.sigma);
      checked_llt(result.sigma, "cyclic_project");
    }
  }
  return result;
}

CyclicDiagonalResult cyclic_project_diagonal(const Eigen::VectorXd& base_diag,
                                             const std::vector<TraceConstraint>& tcs,
                                             int max_sweeps, double tol) {
  CyclicDiagonalResult result;
  result.diag = base_diag;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (const auto& tc : tcs) {
      result.diag = project_single_diagonal(result.diag, tc);
    }
    ++result.sweeps;
    double worst = 0.0;
    for (const auto& tc : tcs) {
      worst = std::max(worst, (tc.a.array().square() * result.diag.array()).sum() - tc.z);
    }
    result.max_violation = worst;
    if (worst <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace probcon
