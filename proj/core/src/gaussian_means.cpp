#include "probcon/gaussian_means.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "map_gaussian_core.hpp"
#include "probcon/errors.hpp"
#include "probcon/gaussian.hpp"
#include "probcon/projection.hpp"
#include "probcon/special.hpp"

namespace probcon {

namespace detail {

namespace {

Eigen::MatrixXd dense_covariance(CovarianceMode mode, const Eigen::MatrixXd& cov,
                                 const Eigen::VectorXd& var) {
  if (mode == CovarianceMode::diagonal) return var.asDiagonal();
  return cov;
}

GaussianHyper make_hyper(CovarianceMode mode, Eigen::VectorXd mu, const Eigen::MatrixXd& cov,
                         const Eigen::VectorXd& var) {
  if (mode == CovarianceMode::diagonal) return GaussianHyper::diagonal(std::move(mu), var);
  return GaussianHyper(std::move(mu), cov);
}

}  // namespace

EstimationResult run_gaussian_map(const GaussianMapProblem& problem, const ConstraintSet& cs,
                                  const WishartHyperprior& prior, CovarianceMode mode,
                                  const GaussianMapOptions& opts) {
  const int n = problem.dim;
  if (prior.dimension() != n) {
    throw std::invalid_argument("run_gaussian_map: hyperprior dimension mismatch");
  }
  std::vector<double> quantiles;
  for (const auto& pc : cs) {
    if (!(pc.eta > 0.5)) {
      throw std::invalid_argument(
          "run_gaussian_map: constrained optimization requires eta > 0.5");
    }
    quantiles.push_back(std_normal_quantile(pc.eta));
  }

  // State: mu plus either a dense covariance or a variance vector.
  Eigen::VectorXd theta = problem.theta0;
  Eigen::MatrixXd cov = prior.lambda;
  Eigen::VectorXd var = prior.lambda.diagonal();

  // Tightened linear bounds on mu at the current covariance.
  auto mu_bounds = [&](void) {
    std::vector<LinearConstraint> bounds;
    bounds.reserve(cs.size());
    GaussianHyper h = make_hyper(mode, Eigen::VectorXd::Zero(n), cov, var);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& c = cs[i].linear;
      double shrink = quantiles[i] * std::sqrt(h.quad_form(c.a));
      bounds.emplace_back(c.a, c.b - shrink);
    }
    return bounds;
  };

  // Initial feasible mu; shrink the starting covariance when the tightened
  // polytope comes up empty (a smaller prior covariance always loosens it).
  Eigen::VectorXd mu;
  {
    bool found = cs.empty();
    if (found) mu = theta;
    for (int attempt = 0; attempt < 7 && !found; ++attempt) {
      DykstraResult proj = project_onto_halfspaces(theta, mu_bounds(), 4000, 1e-12);
      if (proj.feasible) {
        mu = proj.point;
        found = true;
      } else {
        cov /= 4.0;
        var /= 4.0;
      }
    }
    if (!found) {
      throw InfeasibleError("run_gaussian_map: no mean satisfies the cone-feasible "
                            "set for any tried covariance");
    }
  }

  auto objective = [&](const Eigen::VectorXd& th, const Eigen::VectorXd& m) {
    GaussianHyper h = make_hyper(mode, m, cov, var);
    Eigen::VectorXd diff = th - m;
    double quad = diff.dot(h.solve(diff));
    double tr_term;
    if (mode == CovarianceMode::diagonal) {
      tr_term = (prior.lambda.diagonal().array() / var.array()).sum();
    } else {
      tr_term = (h.precision().array() * prior.lambda.array()).sum();
    }
    return problem.loglik(th) - 0.5 * h.log_det() - 0.5 * quad - 0.5 * tr_term;
  };

  EstimationResult result;
  double obj = objective(theta, mu);
  result.objective_trace.push_back(obj);

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double sweep_start = obj;

    // theta step (closed form, filtered for numerical safety).
    {
      GaussianHyper h = make_hyper(mode, mu, cov, var);
      Eigen::VectorXd cand = problem.theta_step(h.precision(), mu);
      double cand_obj = objective(cand, mu);
      if (cand_obj >= obj) {
        theta = std::move(cand);
        obj = cand_obj;
      }
      result.objective_trace.push_back(obj);
    }

    // mu step: projected gradient on (mu-theta)' W (mu-theta)/2 over the
    // tightened polytope; every accepted inner move lowers the quadratic.
    if (!cs.empty()) {
      GaussianHyper h = make_hyper(mode, mu, cov, var);
      Eigen::MatrixXd W = h.precision();
      std::vector<LinearConstraint> bounds = mu_bounds();
      double lip = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(W).eigenvalues().maxCoeff();
      double step = 1.0 / std::max(lip, 1e-12);
      Eigen::VectorXd m = mu;
      double q = (m - theta).dot(W * (m - theta));
      for (int it = 0; it < opts.mu_max_iters; ++it) {
        Eigen::VectorXd grad = W * (m - theta);
        Eigen::VectorXd cand = project_onto_halfspaces(m - step * grad, bounds, 2000, 1e-13).point;
        double q_cand = (cand - theta).dot(W * (cand - theta));
        if (q_cand < q - 1e-15) {
          double moved = (cand - m).norm();
          m = std::move(cand);
          q = q_cand;
          if (moved < 1e-12) break;
        } else {
          break;
        }
      }
      double cand_obj = objective(theta, m);
      if (cand_obj >= obj && max_halfspace_violation(m, bounds) <= 1e-9) {
        mu = std::move(m);
        obj = cand_obj;
      }
      result.objective_trace.push_back(obj);
    } else {
      // Unconstrained prior mean sits at theta.
      double cand_obj = objective(theta, theta);
      if (cand_obj >= obj) {
        mu = theta;
        obj = cand_obj;
      }
      result.objective_trace.push_back(obj);
    }

    // sigma step: Bregman projection of Lambda + (theta-mu)(theta-mu)' onto
    // the trace bounds at the current mu; accepted only if the true
    // objective does not drop.
    {
      std::vector<TraceConstraint> tcs;
      tcs.reserve(cs.size());
      bool bounds_ok = true;
      for (const auto& pc : cs) {
        double margin = pc.linear.b - pc.linear.a.dot(mu);
        if (!(margin > 0.0)) {
          bounds_ok = false;
          break;
        }
        tcs.push_back(trace_bound_from_constraint(pc, mu));
      }
      if (bounds_ok) {
        Eigen::VectorXd diff = theta - mu;
        bool ok = false;
        Eigen::MatrixXd cov_cand;
        Eigen::VectorXd var_cand;
        if (mode == CovarianceMode::diagonal) {
          Eigen::VectorXd s = prior.lambda.diagonal() + diff.cwiseProduct(diff);
          auto res = cyclic_project_diagonal(s, tcs, opts.sigma_max_sweeps, opts.sigma_tol);
          ok = res.converged || tcs.empty();
          var_cand = res.diag;
        } else {
          Eigen::MatrixXd s = prior.lambda + diff * diff.transpose();
          auto res = cyclic_project(s, tcs, opts.sigma_max_sweeps, opts.sigma_tol);
          ok = res.converged || tcs.empty();
          cov_cand = res.sigma;
        }
        if (ok) {
          Eigen::MatrixXd cov_old = cov;
          Eigen::VectorXd var_old = var;
          if (mode == CovarianceMode::diagonal) var = var_cand; else cov = cov_cand;
          double cand_obj = objective(theta, mu);
          if (cand_obj >= obj) {
            obj = cand_obj;
          } else {
            cov = cov_old;
            var = var_old;
          }
        }
      }
      result.objective_trace.push_back(obj);
    }

    ++result.iterations;
    if (obj - sweep_start < opts.objective_tol * (1.0 + std::abs(sweep_start))) {
      result.converged = true;
      break;
    }
  }

  GaussianHyper hyper = make_hyper(mode, mu, cov, var);
  result.theta = theta;
  FeasibilityReport report = in_feasible_set(hyper, cs);
  result.feasibility_margins = report.margins;
  result.gaussian_hyper = std::move(hyper);
  return result;
}

}  // namespace detail

GaussianMeansData::GaussianMeansData(std::vector<Eigen::VectorXd> g) : groups(std::move(g)) {
  if (groups.empty()) {
    throw std::invalid_argument("GaussianMeansData: at least one group required");
  }
  for (const auto& samples : groups) {
    if (samples.size() == 0) {
      throw std::invalid_argument("GaussianMeansData: every group must be nonempty");
    }
  }
}

Eigen::VectorXd GaussianMeansData::group_means() const {
  Eigen::VectorXd m(groups.size());
  for (std::size_t j = 0; j < groups.size(); ++j) m[static_cast<Eigen::Index>(j)] = groups[j].mean();
  return m;
}

Eigen::VectorXd GaussianMeansData::group_sizes() const {
  Eigen::VectorXd s(groups.size());
  for (std::size_t j = 0; j < groups.size(); ++j) {
    s[static_cast<Eigen::Index>(j)] = static_cast<double>(groups[j].size());
  }
  return s;
}

Eigen::VectorXd mle_gaussian_means(const GaussianMeansData& d) {
  return d.group_means();
}

Eigen::VectorXd constrained_mle_gaussian_means(const GaussianMeansData& d,
                                               const std::vector<LinearConstraint>& hard) {
  Eigen::VectorXd means = d.group_means();
  if (hard.empty()) return means;
  Eigen::VectorXd sizes = d.group_sizes();

  // Dykstra in the diag(sizes) metric: each half-space projection minimizes
  // the size-weighted quadratic, which is exactly the constrained MLE.
  std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> projectors;
  projectors.reserve(hard.size());
  for (const auto& c : hard) {
    Eigen::VectorXd minv_a = c.a.array() / sizes.array();
    projectors.push_back([&c, minv_a](const Eigen::VectorXd& x) {
      return project_halfspace_metric(x, c.a, c.b, minv_a);
    });
  }
  DykstraResult res = dykstra_project(
      means, projectors,
      [&hard](const Eigen::VectorXd& x) { return max_halfspace_violation(x, hard); },
      5000, 1e-12);
  if (!res.feasible) {
    throw InfeasibleError("constrained_mle_gaussian_means: empty feasible region");
  }
  return res.point;
}

EstimationResult map_gaussian_means(const GaussianMeansData& d, const ConstraintSet& cs,
                                    const WishartHyperprior& prior, CovarianceMode mode,
                                    const GaussianMapOptions& opts) {
  const int n = d.n_groups();
  if (!cs.empty() && cs.dimension() != n) {
    throw std::invalid_argument("map_gaussian_means: constraint dimension mismatch");
  }
  Eigen::VectorXd means = d.group_means();
  Eigen::VectorXd sizes = d.group_sizes();

  detail::GaussianMapProblem problem;
  problem.dim = n;
  problem.theta0 = means;
  problem.loglik = [means, sizes](const Eigen::VectorXd& theta) {
    return -0.5 * (sizes.array() * (theta - means).array().square()).sum();
  };
  problem.theta_step = [means, sizes](const Eigen::MatrixXd& W, const Eigen::VectorXd& mu) {
    Eigen::MatrixXd lhs = W;
    lhs.diagonal() += sizes;
    Eigen::VectorXd rhs = sizes.cwiseProduct(means) + W * mu;
    return Eigen::LLT<Eigen::MatrixXd>(lhs).solve(rhs).eval();
  };
  return detail::run_gaussian_map(problem, cs, prior, mode, opts);
}

}  // namespace probcon
