// Independent reference implementations used only by tests. These must stay
// decoupled from the library's own evaluation paths: the erf oracle is a
// Taylor series, the beta CDF a continued fraction, and the LogDet projection
// a reduced-Newton minimizer in matrix-entry coordinates.
#ifndef PROBCON_TEST_ORACLES_HPP
#define PROBCON_TEST_ORACLES_HPP

#include <Eigen/Core>

#include "probcon/constraints.hpp"
#include "probcon/rng.hpp"

namespace oracles {

/// erf by its alternating Maclaurin series; accurate to ~1e-14 for |z| <= 3.
double erf_series(double z);

/// Standard normal CDF built on erf_series.
double normal_cdf_series(double x);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Constrained minimizer of tr(Sigma base^{-1}) - log det Sigma over
/// {Sigma SPD : a' Sigma a <= z}, by Newton iteration on the equality slice
/// in symmetric-matrix coordinates (the base is returned when feasible).
Eigen::MatrixXd logdet_projection_minimizer(const Eigen::MatrixXd& base,
                                            const Eigen::VectorXd& a, double z);

/// Random SPD matrix A A'/n + jitter I.
Eigen::MatrixXd random_spd(int n, probcon::RngHandle& rng, double jitter = 0.1);

/// Best value of sum c_i log theta_i over the simplex grid (step h on each
/// free coordinate) subject to hard constraints; returns the argmax.
Eigen::VectorXd simplex_grid_argmax(const Eigen::VectorXd& counts,
                                    const std::vector<probcon::LinearConstraint>& hard,
                                    double h);

}  // namespace oracles

#endif  // PROBCON_TEST_ORACLES_HPP
