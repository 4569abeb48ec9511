#include "probcon/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "probcon/errors.hpp"
#include "probcon/special.hpp"

namespace probcon {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view label) {
  return splitmix64(seed ^ fnv1a(label));
}

RngHandle::RngHandle(std::uint64_t seed, std::string algorithm)
    : seed_(seed), algorithm_(std::move(algorithm)), engine_(seed) {
  if (algorithm_ != "mt19937_64") {
    throw std::domain_error("RngHandle: unknown algorithm '" + algorithm_ + "'");
  }
}

RngHandle RngHandle::derive(std::string_view label) const {
  return RngHandle(mix_seed(seed_, label), algorithm_);
}

double RngHandle::uniform() {
  // 53-bit mantissa shifted into (0,1); the +0.5 keeps both endpoints open.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngHandle::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngHandle::normal() {
  return std_normal_quantile(uniform());
}

double RngHandle::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::domain_error("RngHandle::gamma: shape must be > 0");
  }
  if (shape < 1.0) {
    double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Eigen::VectorXd RngHandle::dirichlet(const Eigen::VectorXd& alpha) {
  Eigen::VectorXd g(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      throw std::domain_error("RngHandle::dirichlet: alpha must be strictly positive");
    }
    g[i] = gamma(alpha[i]);
  }
  double total = g.sum();
  if (total <= 0.0) { // all draws underflowed; fall back to the mean direction
    return alpha / alpha.sum();
  }
  return g / total;
}

Eigen::VectorXd RngHandle::mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw std::invalid_argument("RngHandle::mvn: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DecompositionError("RngHandle::mvn: covariance is not positive definite");
  }
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal();
  return mean + llt.matrixL() * z;
}

Eigen::VectorXd RngHandle::mvn_diagonal(const Eigen::VectorXd& mean, const Eigen::VectorXd& var) {
  if (mean.size() != var.size()) {
    throw std::invalid_argument("RngHandle::mvn_diagonal: dimension mismatch");
  }
  Eigen::VectorXd x(mean.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(var[i] > 0.0)) {
      throw DecompositionError("RngHandle::mvn_diagonal: variances must be positive");
    }
    x[i] = mean[i] + std::sqrt(var[i]) * normal();
  }
  return x;
}

}  // namespace probcon
