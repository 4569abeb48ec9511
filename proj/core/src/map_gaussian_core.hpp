// Internal coordinate-ascent driver shared by the Gaussian-means and
// regression MAP estimators. Not installed.
#ifndef PROBCON_MAP_GAUSSIAN_CORE_HPP
#define PROBCON_MAP_GAUSSIAN_CORE_HPP

#include <functional>

#include <Eigen/Core>

#include "probcon/bregman.hpp"
#include "probcon/constraints.hpp"
#include "probcon/estimation.hpp"

namespace probcon::detail {

struct GaussianMapProblem {
  int dim = 0;
  Eigen::VectorXd theta0;
  /// log f(D|theta) up to an additive constant.
  std::function<double(const Eigen::VectorXd&)> loglik;
  /// argmax of loglik(theta) - (theta-mu)' W (theta-mu)/2 for precision W.
  std::function<Eigen::VectorXd(const Eigen::MatrixXd& W, const Eigen::VectorXd& mu)> theta_step;
};

/// Runs the accept-filtered coordinate ascent over (theta, mu, Sigma).
/// Throws InfeasibleError when no feasible mu exists even after shrinking
/// the initial covariance.
EstimationResult run_gaussian_map(const GaussianMapProblem& problem, const ConstraintSet& cs,
                                  const WishartHyperprior& prior, CovarianceMode mode,
                                  const GaussianMapOptions& opts);

}  // namespace probcon::detail

#endif  // PROBCON_MAP_GAUSSIAN_CORE_HPP
