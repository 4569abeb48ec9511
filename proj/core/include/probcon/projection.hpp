#ifndef PROBCON_PROJECTION_HPP
#define PROBCON_PROJECTION_HPP

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "probcon/constraints.hpp"

namespace probcon {

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Euclidean projection onto the half-space a'x <= b.
Eigen::VectorXd project_halfspace(const Eigen::VectorXd& v, const Eigen::VectorXd& a, double b);

/// Projection onto a'x <= b in the metric induced by an SPD matrix M:
/// argmin (x-v)' M (x-v). minv_a must equal M^{-1} a.
Eigen::VectorXd project_halfspace_metric(const Eigen::VectorXd& v, const Eigen::VectorXd& a,
                                         double b, const Eigen::VectorXd& minv_a);

struct DykstraResult {
  Eigen::VectorXd point;
  double max_violation = 0.0;
  int iterations = 0;
  bool feasible = false;
};

/// Dykstra's alternating projection onto an intersection of convex sets,
/// given per-set Euclidean projectors and a violation measure used for the
/// stopping test. Converges to the Euclidean projection of v when the
/// intersection is nonempty; an empty intersection leaves max_violation
/// above tol (feasible = false).
DykstraResult dykstra_project(
    const Eigen::VectorXd& v,
    const std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>>& projectors,
    const std::function<double(const Eigen::VectorXd&)>& violation,
    int max_iterations = 2000, double tol = 1e-12);

/// Dykstra projection onto an intersection of half-spaces.
DykstraResult project_onto_halfspaces(const Eigen::VectorXd& v,
                                      const std::vector<LinearConstraint>& constraints,
                                      int max_iterations = 2000, double tol = 1e-12);

/// Dykstra projection onto simplex intersected with half-spaces.
DykstraResult project_onto_constrained_simplex(const Eigen::VectorXd& v,
                                               const std::vector<LinearConstraint>& constraints,
                                               int max_iterations = 2000, double tol = 1e-12);

/// Largest violation max(0, a'x - b) across a family of half-spaces.
double max_halfspace_violation(const Eigen::VectorXd& x,
                               const std::vector<LinearConstraint>& constraints);

}  // namespace probcon

#endif  // PROBCON_PROJECTION_HPP
