#ifndef PROBCON_GAUSSIAN_HPP
#define PROBCON_GAUSSIAN_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "probcon/constraints.hpp"
#include "probcon/dirichlet.hpp" // MonteCarloEstimate
#include "probcon/rng.hpp"

namespace probcon {

/// Gaussian prior hyperparameters (mu, Sigma). Sigma is held either as a
/// dense SPD matrix or as a diagonal variance vector; both forms answer the
/// quadratic-form / solve queries the estimators need without ever forming
/// an explicit elementwise inverse of a dense matrix.
class GaussianHyper {
 public:
  GaussianHyper(Eigen::VectorXd mu, Eigen::MatrixXd sigma);
  static GaussianHyper diagonal(Eigen::VectorXd mu, Eigen::VectorXd variances);

  int dimension() const { return static_cast<int>(mu_.size()); }
  const Eigen::VectorXd& mu() const { return mu_; }
  bool is_diagonal() const { return diagonal_; }

  /// Dense covariance (materialized from the diagonal form if needed).
  Eigen::MatrixXd covariance() const;
  /// Diagonal variances; only valid for the diagonal variant.
  const Eigen::VectorXd& variances() const;

  /// a' Sigma a.
  double quad_form(const Eigen::VectorXd& a) const;
  /// Sigma^{-1} rhs via the stored Cholesky factor (or 1/variance).
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Dense precision matrix Sigma^{-1}.
  Eigen::MatrixXd precision() const;
  double log_det() const;

 private:
  GaussianHyper() = default;

  Eigen::VectorXd mu_;
  bool diagonal_ = false;
  Eigen::VectorXd var_;     // diagonal variant
  Eigen::MatrixXd cov_;     // dense variant
  Eigen::MatrixXd chol_;    // lower Cholesky factor of cov_
};

/// Slack of the second-order-cone form of P(a'theta <= b) >= eta:
///   b - a'mu - Phi^{-1}(eta) sqrt(a' Sigma a).
/// Nonnegative exactly when (mu, Sigma) lies in the constraint's feasible set.
double soc_margin(const GaussianHyper& h, const ProbabilisticConstraint& pc);

/// P(a'theta <= b) = Phi((b - a'mu) / sqrt(a' Sigma a)), exact for the
/// Gaussian prior.
double prob_leq(const GaussianHyper& h, const LinearConstraint& c);

MonteCarloEstimate prob_leq_montecarlo(const GaussianHyper& h, const LinearConstraint& c,
                                       std::int64_t n_samples, RngHandle rng);

struct FeasibilityReport {
  std::vector<double> margins; // soc_margin per constraint
  bool feasible = true;        // conjunction of margins >= 0
};

/// Membership in the intersection of all constraint feasible sets. The empty
/// set is vacuously feasible; zero margins count as members (closed sets).
FeasibilityReport in_feasible_set(const GaussianHyper& h, const ConstraintSet& cs);

}  // namespace probcon

#endif  // PROBCON_GAUSSIAN_HPP
