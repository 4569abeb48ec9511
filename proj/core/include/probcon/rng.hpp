#ifndef PROBCON_RNG_HPP
#define PROBCON_RNG_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace probcon {

/// Mix a label into a seed (FNV-1a over the label, splitmix64 finalizer).
/// Used to derive independent per-cell / per-purpose streams.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view label);

/// Seeded random stream. The generator is pinned to mt19937_64, whose
/// output sequence is fixed by the C++ standard, and every variate
/// transform below is implemented in this library, so equal
/// (seed, algorithm) pairs produce bit-identical streams on any platform.
///
/// A handle is a value: copy it to fork the current state, or use derive()
/// to obtain an independently seeded stream. A single handle must not be
/// shared across concurrent callers.
class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed, std::string algorithm = "mt19937_64");

  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& algorithm() const noexcept { return algorithm_; }

  /// New handle with seed mix_seed(seed(), label); same algorithm.
  RngHandle derive(std::string_view label) const;

  /// Uniform on the open interval (0,1).
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via the inverse-CDF transform (one uniform per draw).
  double normal();

  /// Gamma(shape, scale 1), shape > 0. Marsaglia-Tsang squeeze for
  /// shape >= 1, boosted by U^(1/shape) below 1.
  double gamma(double shape);

  /// Dirichlet(alpha) via normalized gamma draws; alpha strictly positive.
  Eigen::VectorXd dirichlet(const Eigen::VectorXd& alpha);

  /// Multivariate normal with dense SPD covariance (Cholesky transform).
  /// Throws DecompositionError when cov is not SPD.
  Eigen::VectorXd mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

  /// Multivariate normal with diagonal covariance given as a variance vector.
  Eigen::VectorXd mvn_diagonal(const Eigen::VectorXd& mean, const Eigen::VectorXd& var);

 private:
  std::uint64_t seed_;
  std::string algorithm_;
  std::mt19937_64 engine_;
};

}  // namespace probcon

#endif  // PROBCON_RNG_HPP
