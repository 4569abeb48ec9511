#ifndef PROBCON_SPECIAL_HPP
#define PROBCON_SPECIAL_HPP

#include <Eigen/Core>

namespace probcon {

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal cumulative distribution function.
/// Accurate to a couple of ulps across the whole real line; throws
/// std::domain_error on non-finite input.
double std_normal_cdf(double x);

/// Inverse of std_normal_cdf on (0,1). Rational initial guess refined by
/// Halley steps against std_normal_cdf, with a bisection fallback.
/// Throws std::domain_error for p outside (0,1).
double std_normal_quantile(double p);

/// Probabilists' Hermite polynomial H_k(x), defined by
/// phi^(n)(x) = (-1)^n H_n(x) phi(x); so H_2(x) = x^2 - 1, not 4x^2 - 2.
/// Supported for k in {0,...,6}; other k throws std::domain_error.
double hermite(int k, double x);

/// Digamma function psi(x) for x > 0.
double digamma(double x);

/// log of the multivariate beta function: sum_i lgamma(alpha_i) - lgamma(sum alpha).
double log_multi_beta(const Eigen::VectorXd& alpha);

/// log density of Dir(alpha) at a simplex point theta.
double log_dirichlet_pdf(const Eigen::VectorXd& theta, const Eigen::VectorXd& alpha);

}  // namespace probcon

#endif  // PROBCON_SPECIAL_HPP
