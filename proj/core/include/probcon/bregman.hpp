#ifndef PROBCON_BREGMAN_HPP
#define PROBCON_BREGMAN_HPP

#include <vector>

#include <Eigen/Core>

#include "probcon/constraints.hpp"

namespace probcon {

/// Scale matrix of the precision hyperprior h(mu, Sigma^{-1}) proportional
/// to exp(-tr(Sigma^{-1} Lambda)/2); must be symmetric positive definite.
struct WishartHyperprior {
  Eigen::MatrixXd lambda;

  explicit WishartHyperprior(Eigen::MatrixXd scale);
  static WishartHyperprior scaled_identity(double tau, int n);
  int dimension() const { return static_cast<int>(lambda.rows()); }
};

/// Linear constraint on a covariance matrix: tr(Sigma a a') <= z, z > 0.
struct TraceConstraint {
  Eigen::VectorXd a;
  double z = 0.0;

  TraceConstraint() = default;
  TraceConstraint(Eigen::VectorXd direction, double bound);
};

/// LogDet Bregman divergence tr(X Y^{-1}) - log det(X Y^{-1}) - n between
/// SPD matrices; zero iff X == Y.
double logdet_divergence(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

/// Convert a probabilistic constraint into its covariance trace bound at a
/// fixed mean: z = ((b - a'mu) / Phi^{-1}(eta))^2. Requires eta > 0.5 and a
/// strictly positive margin b - a'mu; otherwise no SPD Sigma is feasible at
/// this mu and InfeasibleError (margin) or std::domain_error (eta) is thrown.
TraceConstraint trace_bound_from_constraint(const ProbabilisticConstraint& pc,
                                            const Eigen::VectorXd& mu);

/// Bregman projection of an SPD base matrix onto {Sigma : tr(Sigma a a') <= z}
/// under the LogDet divergence with the base as second argument. The update is
/// the rank-one precision shift Sigma^{-1} = base^{-1} + nu a a' with
/// nu = max{0, (a' base a - z) / (z a' base a)}, applied on the covariance
/// side through the Sherman-Morrison identity. Feasible bases are fixed
/// points; active projections satisfy a' Sigma a = z exactly.
Eigen::MatrixXd project_single(const Eigen::MatrixXd& base, const TraceConstraint& tc);

/// Diagonal-covariance analogue: projects a variance vector onto
/// {d : sum_i d_i a_i^2 <= z} under the separable divergence
/// sum_i (d_i/s_i - log(d_i/s_i) - 1); the multiplier solves
/// sum_i a_i^2 s_i / (1 + nu a_i^2 s_i) = z. Reduces to clipping
/// d_i = min(s_i, z) for axis directions.
Eigen::VectorXd project_single_diagonal(const Eigen::VectorXd& base_diag,
                                        const TraceConstraint& tc);

struct CyclicProjectionResult {
  Eigen::MatrixXd sigma;
  int sweeps = 0;
  double max_violation = 0.0;
  bool converged = false;
  std::vector<double> violation_trace; // max violation after each sweep
};

/// Sequential (cyclic) projection onto each trace constraint in turn until a
/// full sweep keeps the worst violation below tol, or max_sweeps runs out
/// (converged = false; caller decides how to proceed). Iterates stay SPD.
CyclicProjectionResult cyclic_project(const Eigen::MatrixXd& base,
                                      const std::vector<TraceConstraint>& tcs,
                                      int max_sweeps = 500, double tol = 1e-10);

struct CyclicDiagonalResult {
  Eigen::VectorXd diag;
  int sweeps = 0;
  double max_violation = 0.0;
  bool converged = false;
};

CyclicDiagonalResult cyclic_project_diagonal(const Eigen::VectorXd& base_diag,
                                             const std::vector<TraceConstraint>& tcs,
                                             int max_sweeps = 500, double tol = 1e-10);

}  // namespace probcon

#endif  // PROBCON_BREGMAN_HPP
