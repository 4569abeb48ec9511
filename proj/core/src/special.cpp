#include "probcon/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace probcon {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Acklam's rational approximation to the normal quantile, ~1e-9 relative
// error; refined below to full double precision.
double quantile_initial_guess(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("std_normal_cdf: non-finite input");
  }
  return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("std_normal_quantile: p must lie in (0,1)");
  }
  double x = quantile_initial_guess(p);

  // Halley refinement against the CDF; two steps reach machine precision.
  for (int i = 0; i < 2; ++i) {
    double e = std_normal_cdf(x) - p;
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }

  if (!std::isfinite(x) || std::abs(std_normal_cdf(x) - p) > 1e-10) {
    // Bisection fallback; the CDF is monotone on any bracketing interval.
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      (std_normal_cdf(mid) < p ? lo : hi) = mid;
    }
    x = 0.5 * (lo + hi);
  }
  return x;
}

double hermite(int k, double x) {
  if (k < 0 || k > 6) {
    throw std::domain_error("hermite: order must lie in {0,...,6}");
  }
  double h_prev = 1.0; // H_0
  if (k == 0) return h_prev;
  double h = x; // H_1
  for (int n = 1; n < k; ++n) {
    double h_next = x * h - static_cast<double>(n) * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("digamma: requires x > 0");
  }
  double result = 0.0;
  while (x < 10.0) { // shift into the asymptotic region
    result -= 1.0 / x;
    x += 1.0;
  }
  double inv2 = 1.0 / (x * x);
  // Bernoulli-number tail through x^-10.
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0)))));
  result += std::log(x) - 0.5 / x - series;
  return result;
}

double log_multi_beta(const Eigen::VectorXd& alpha) {
  double sum = 0.0, lg = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      throw std::domain_error("log_multi_beta: alpha must be strictly positive");
    }
    sum += alpha[i];
    lg += std::lgamma(alpha[i]);
  }
  return lg - std::lgamma(sum);
}

double log_dirichlet_pdf(const Eigen::VectorXd& theta, const Eigen::VectorXd& alpha) {
  if (theta.size() != alpha.size()) {
    throw std::invalid_argument("log_dirichlet_pdf: dimension mismatch");
  }
  double logp = -log_multi_beta(alpha);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    logp += (alpha[i] - 1.0) * std::log(theta[i]);
  }
  return logp;
}

}  // namespace probcon
