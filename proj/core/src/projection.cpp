#include "probcon/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace probcon {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  // Sort-based threshold algorithm.
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0, tau = 0.0;
  int support = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += u[static_cast<std::size_t>(k)];
    double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] > t) {
      tau = t;
      support = static_cast<int>(k + 1);
    }
  }
  (void)support;
  return (v.array() - tau).cwiseMax(0.0);
}

Eigen::VectorXd project_halfspace(const Eigen::VectorXd& v, const Eigen::VectorXd& a, double b) {
  double excess = a.dot(v) - b;
  if (excess <= 0.0) return v;
  return v - (excess / a.squaredNorm()) * a;
}

Eigen::VectorXd project_halfspace_metric(const Eigen::VectorXd& v, const Eigen::VectorXd& a,
                                         double b, const Eigen::VectorXd& minv_a) {
  double excess = a.dot(v) - b;
  if (excess <= 0.0) return v;
  return v - (excess / a.dot(minv_a)) * minv_a;
}

DykstraResult dykstra_project(
    const Eigen::VectorXd& v,
    const std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>& projectors,
    const std::function<double(const Eigen::VectorXd&)>& violation,
    int max_iterations, double tol) {
  DykstraResult result;
  result.point = v;
  if (projectors.empty()) {
    result.feasible = true;
    return result;
  }

  std::vector<Eigen::VectorXd> corrections(
      projectors.size(), Eigen::VectorXd::Zero(v.size()));
  Eigen::VectorXd x = v;
  // Run until the iterate stabilizes across a full cycle; stopping at the
  // first feasible point would yield a feasible point that is not the
  // projection.
  const double stability_tol = 1e-14 * (1.0 + v.cwiseAbs().maxCoeff());
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd x_prev = x;
    for (std::size_t k = 0; k < projectors.size(); ++k) {
      Eigen::VectorXd y = projectors[k](x + corrections[k]);
      corrections[k] = x + corrections[k] - y;
      x = std::move(y);
    }
    result.iterations = it + 1;
    result.max_violation = violation(x);
    if (result.max_violation <= tol &&
        (x - x_prev).cwiseAbs().maxCoeff() <= stability_tol) {
      break;
    }
  }
  result.point = std::move(x);
  result.feasible = result.max_violation <= tol;
  return result;
}

double max_halfspace_violation(const Eigen::VectorXd& x,
                               const std::vector<LinearConstraint>& constraints) {
  double worst = 0.0;
  for (const auto& c : constraints) {
    worst = std::max(worst, -c.slack(x));
  }
  return worst;
}

DykstraResult project_onto_halfspaces(const Eigen::VectorXd& v,
                                      const std::vector<LinearConstraint>& constraints,
                                      int max_iterations, double tol) {
  std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> projectors;
  projectors.reserve(constraints.size());
  for (const auto& c : constraints) {
    projectors.push_back([&c](const Eigen::VectorXd& x) {
      return project_halfspace(x, c.a, c.b);
    });
  }
  return dykstra_project(
      v, projectors,
      [&constraints](const Eigen::VectorXd& x) {
        return max_halfspace_violation(x, constraints);
      },
      max_iterations, tol);
}

DykstraResult project_onto_constrained_simplex(const Eigen::VectorXd& v,
                                               const std::vector<LinearConstraint>& constraints,
                                               int max_iterations, double tol) {
  std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> projectors;
  projectors.reserve(constraints.size() + 1);
  projectors.push_back([](const Eigen::VectorXd& x) { return project_to_simplex(x); });
  for (const auto& c : constraints) {
    projectors.push_back([&c](const Eigen::VectorXd& x) {
      return project_halfspace(x, c.a, c.b);
    });
  }
  auto violation = [&constraints](const Eigen::VectorXd& x) {
    double worst = max_halfspace_violation(x, constraints);
    worst = std::max(worst, std::abs(x.sum() - 1.0));
    worst = std::max(worst, -x.minCoeff());
    return worst;
  };
  return dykstra_project(v, projectors, violation, max_iterations, tol);
}

}  // namespace probcon
