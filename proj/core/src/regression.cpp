#include "probcon/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "map_gaussian_core.hpp"
#include "probcon/errors.hpp"
#include "probcon/projection.hpp"

namespace probcon {

RegressionData::RegressionData(Eigen::MatrixXd design, Eigen::VectorXd targets, double noise_var)
    : X(std::move(design)), y(std::move(targets)), sigma2(noise_var) {
  if (X.rows() != y.size()) {
    throw std::invalid_argument("RegressionData: row count mismatch");
  }
  if (X.rows() < 1) {
    throw std::invalid_argument("RegressionData: at least one observation required");
  }
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("RegressionData: sigma2 must be positive");
  }
}

Eigen::VectorXd ridge_regression(const RegressionData& d, double ridge) {
  if (ridge < 0.0) throw std::domain_error("ridge_regression: ridge must be >= 0");
  const Eigen::Index p = d.X.cols();
  Eigen::MatrixXd gram = d.X.transpose() * d.X;
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    if (qr.rank() < p) {
      throw NumericalError("ridge_regression: rank-deficient design with zero ridge");
    }
    return qr.solve(d.y);
  }
  gram.diagonal().array() += ridge * d.sigma2;
  return Eigen::LLT<Eigen::MatrixXd>(gram).solve(d.X.transpose() * d.y);
}

Eigen::VectorXd constrained_ridge(const RegressionData& d, double ridge,
                                  const std::vector<LinearConstraint>& hard) {
  if (ridge < 0.0) throw std::domain_error("constrained_ridge: ridge must be >= 0");
  const Eigen::Index p = d.X.cols();
  const Eigen::MatrixXd gram = d.X.transpose() * d.X;
  const Eigen::VectorXd xty = d.X.transpose() * d.y;
  const double inv_s2 = 1.0 / d.sigma2;

  auto grad = [&](const Eigen::VectorXd& t) -> Eigen::VectorXd {
    return inv_s2 * (gram * t - xty) + ridge * t;
  };
  auto value = [&](const Eigen::VectorXd& t) {
    return 0.5 * inv_s2 * (d.y - d.X * t).squaredNorm() + 0.5 * ridge * t.squaredNorm();
  };
  auto project = [&](const Eigen::VectorXd& t) {
    return project_onto_halfspaces(t, hard, 4000, 1e-13).point;
  };

  double lip = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff() * inv_s2 + ridge;
  double step = 1.0 / std::max(lip, 1e-12);

  Eigen::VectorXd theta = project(Eigen::VectorXd::Zero(p));
  if (max_halfspace_violation(theta, hard) > 1e-9) {
    throw InfeasibleError("constrained_ridge: empty feasible region");
  }

  // FISTA with function-value restart.
  Eigen::VectorXd z = theta;
  double momentum = 1.0;
  double best = value(theta);
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd theta_next = project(z - step * grad(z));
    double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    Eigen::VectorXd z_next =
        theta_next + ((momentum - 1.0) / momentum_next) * (theta_next - theta);

    double v = value(theta_next);
    if (v > best) { // restart the momentum sequence
      z_next = theta_next;
      momentum_next = 1.0;
    } else {
      best = v;
    }
    theta = std::move(theta_next);
    z = std::move(z_next);
    momentum = momentum_next;

    if (it % 10 == 0) {
      double kkt = (theta - project(theta - grad(theta))).lpNorm<Eigen::Infinity>();
      if (kkt <= 1e-8) break;
    }
  }
  return theta;
}

EstimationResult map_regression(const RegressionData& d, const ConstraintSet& cs,
                                const WishartHyperprior& prior, CovarianceMode mode,
                                const GaussianMapOptions& opts) {
  const Eigen::Index p = d.X.cols();
  if (!cs.empty() && cs.dimension() != p) {
    throw std::invalid_argument("map_regression: constraint dimension mismatch");
  }
  const Eigen::MatrixXd gram_s2 = d.X.transpose() * d.X / d.sigma2;
  const Eigen::VectorXd xty_s2 = d.X.transpose() * d.y / d.sigma2;

  detail::GaussianMapProblem problem;
  problem.dim = static_cast<int>(p);
  // Start from a gently ridged solve so rank-deficient designs still work.
  {
    Eigen::MatrixXd lhs = gram_s2;
    lhs.diagonal().array() += 1e-6;
    problem.theta0 = Eigen::LLT<Eigen::MatrixXd>(lhs).solve(xty_s2);
  }
  problem.loglik = [&d](const Eigen::VectorXd& theta) {
    return -0.5 * (d.y - d.X * theta).squaredNorm() / d.sigma2;
  };
  problem.theta_step = [&gram_s2, &xty_s2](const Eigen::MatrixXd& W, const Eigen::VectorXd& mu) {
    Eigen::MatrixXd lhs = gram_s2 + W;
    Eigen::VectorXd rhs = xty_s2 + W * mu;
    return Eigen::LLT<Eigen::MatrixXd>(lhs).solve(rhs).eval();
  };
  return detail::run_gaussian_map(problem, cs, prior, mode, opts);
}

namespace {

struct HoldoutSplit {
  Eigen::MatrixXd x_fit, x_val;
  Eigen::VectorXd y_fit, y_val;
};

HoldoutSplit split_trailing(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            double holdout_fraction) {
  const Eigen::Index m = X.rows();
  Eigen::Index n_val = static_cast<Eigen::Index>(std::floor(holdout_fraction * static_cast<double>(m)));
  n_val = std::max<Eigen::Index>(1, std::min(n_val, m - 1));
  Eigen::Index n_fit = m - n_val;
  return {X.topRows(n_fit), X.bottomRows(n_val), y.head(n_fit), y.tail(n_val)};
}

double mse(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& theta) {
  return (y - X * theta).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

RidgeSelection select_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            double sigma2, const std::vector<double>& grid,
                            double holdout_fraction,
                            const std::vector<LinearConstraint>* hard) {
  if (grid.empty()) throw std::invalid_argument("select_ridge: empty grid");
  HoldoutSplit split = split_trailing(X, y, holdout_fraction);

  std::vector<double> ordered = grid;
  std::sort(ordered.begin(), ordered.end());

  RidgeSelection best;
  bool have = false;
  for (double ridge : ordered) {
    RegressionData fit_data(split.x_fit, split.y_fit, sigma2);
    Eigen::VectorXd theta = hard ? constrained_ridge(fit_data, ridge, *hard)
                                 : ridge_regression(fit_data, ridge);
    double score = mse(split.x_val, split.y_val, theta);
    if (!have || score < best.holdout_mse) {
      best.ridge = ridge;
      best.holdout_mse = score;
      have = true;
    }
  }
  RegressionData full(X, y, sigma2);
  best.theta = hard ? constrained_ridge(full, best.ridge, *hard)
                    : ridge_regression(full, best.ridge);
  return best;
}

RegressionMapSelection map_regression_selected(const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& y,
                                               const ConstraintSet& cs, CovarianceMode mode,
                                               const RegressionGrids& grids,
                                               const GaussianMapOptions& opts) {
  if (grids.sigma2.empty() || grids.tau.empty()) {
    throw std::invalid_argument("map_regression_selected: empty grid");
  }
  HoldoutSplit split = split_trailing(X, y, grids.holdout_fraction);
  const int p = static_cast<int>(X.cols());

  std::vector<double> sigma2_grid = grids.sigma2;
  std::vector<double> tau_grid = grids.tau;
  std::sort(sigma2_grid.begin(), sigma2_grid.end());
  std::sort(tau_grid.begin(), tau_grid.end());

  RegressionMapSelection best;
  bool have = false;
  std::string last_error;
  for (double s2 : sigma2_grid) {
    for (double tau : tau_grid) {
      try {
        RegressionData fit_data(split.x_fit, split.y_fit, s2);
        EstimationResult r = map_regression(fit_data, cs,
                                            WishartHyperprior::scaled_identity(tau, p),
                                            mode, opts);
        double score = mse(split.x_val, split.y_val, r.theta);
        if (!have || score < best.holdout_mse) {
          best.sigma2 = s2;
          best.tau = tau;
          best.holdout_mse = score;
          have = true;
        }
      } catch (const InfeasibleError& e) {
        last_error = e.what();
      }
    }
  }
  if (!have) {
    throw InfeasibleError("map_regression_selected: every grid cell infeasible (" +
                          last_error + ")");
  }
  RegressionData full(X, y, best.sigma2);
  best.result = map_regression(full, cs, WishartHyperprior::scaled_identity(best.tau, p),
                               mode, opts);
  return best;
}

}  // namespace probcon
