#ifndef PROBCON_REGRESSION_HPP
#define PROBCON_REGRESSION_HPP

#include <vector>

#include <Eigen/Core>

#include "probcon/bregman.hpp"
#include "probcon/constraints.hpp"
#include "probcon/estimation.hpp"

namespace probcon {

/// Linear regression observations y ~ N(X theta, sigma2 I).
struct RegressionData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double sigma2 = 1.0;

  RegressionData() = default;
  RegressionData(Eigen::MatrixXd design, Eigen::VectorXd targets, double noise_var);
  int n_rows() const { return static_cast<int>(X.rows()); }
  int dimension() const { return static_cast<int>(X.cols()); }
};

/// theta = (X'X + ridge sigma2 I)^{-1} X'y. ridge may be zero only for a
/// full-column-rank design; otherwise NumericalError.
Eigen::VectorXd ridge_regression(const RegressionData& d, double ridge);

/// Minimizer of |y - X theta|^2 / (2 sigma2) + ridge |theta|^2 / 2 over the
/// hard constraint polytope, by accelerated projected gradient, driven to a
/// unit-step gradient-mapping (KKT) residual below 1e-8.
Eigen::VectorXd constrained_ridge(const RegressionData& d, double ridge,
                                  const std::vector<LinearConstraint>& hard);

/// MAP over (theta, mu, Sigma) for the regression likelihood with a
/// N(mu, Sigma) prior on the coefficients; same coordinate ascent as
/// map_gaussian_means with the regression theta step.
EstimationResult map_regression(const RegressionData& d, const ConstraintSet& cs,
                                const WishartHyperprior& prior, CovarianceMode mode,
                                const GaussianMapOptions& opts = {});

/// Hyperparameter grids for held-out model selection. The holdout is the
/// trailing fraction of the (already shuffled) training rows; the winner is
/// refit on the full training set. Ascending grid order breaks score ties
/// toward the smallest values.
struct RegressionGrids {
  std::vector<double> sigma2{0.5, 1.0, 2.0};
  std::vector<double> tau{0.01, 0.05, 0.1, 0.2, 0.3};
  double holdout_fraction = 0.2;
};

struct RidgeSelection {
  double ridge = 0.0;
  double holdout_mse = 0.0;
  Eigen::VectorXd theta;
};

/// Held-out selection of the ridge parameter (optionally under hard
/// constraints), refit on the full data with the winner.
RidgeSelection select_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            double sigma2, const std::vector<double>& grid,
                            double holdout_fraction,
                            const std::vector<LinearConstraint>* hard = nullptr);

struct RegressionMapSelection {
  double sigma2 = 1.0;
  double tau = 0.1;
  double holdout_mse = 0.0;
  EstimationResult result;
};

/// Held-out selection over (sigma2, tau) grids for the regression MAP with
/// Lambda = tau I; infeasible grid cells are skipped, and InfeasibleError is
/// rethrown only when every cell fails.
RegressionMapSelection map_regression_selected(const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& y,
                                               const ConstraintSet& cs, CovarianceMode mode,
                                               const RegressionGrids& grids = {},
                                               const GaussianMapOptions& opts = {});

}  // namespace probcon

#endif  // PROBCON_REGRESSION_HPP
