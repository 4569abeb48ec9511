#ifndef PROBCON_GAUSSIAN_MEANS_HPP
#define PROBCON_GAUSSIAN_MEANS_HPP

#include <vector>

#include <Eigen/Core>

#include "probcon/bregman.hpp"
#include "probcon/constraints.hpp"
#include "probcon/estimation.hpp"

namespace probcon {

/// Per-group samples with known unit observation variance.
struct GaussianMeansData {
  std::vector<Eigen::VectorXd> groups; // each nonempty

  GaussianMeansData() = default;
  explicit GaussianMeansData(std::vector<Eigen::VectorXd> g);
  int n_groups() const { return static_cast<int>(groups.size()); }
  Eigen::VectorXd group_means() const;
  Eigen::VectorXd group_sizes() const;
};

/// Per-group sample means.
Eigen::VectorXd mle_gaussian_means(const GaussianMeansData& d);

/// Weighted least-squares projection of the sample means onto the hard
/// constraint polytope (metric diag(group sizes)); this is the exact
/// hard-constrained MLE. Throws InfeasibleError on an empty polytope.
Eigen::VectorXd constrained_mle_gaussian_means(const GaussianMeansData& d,
                                               const std::vector<LinearConstraint>& hard);

/// MAP over (theta, mu, Sigma) for grouped Gaussian observations with a
/// N(mu, Sigma) prior on the means and the exp(-tr(Sigma^{-1} Lambda)/2)
/// precision hyperprior. Coordinate ascent: a closed-form theta step, a
/// projected-gradient mu step over the cone-feasible set, and a cyclic
/// Bregman-projection Sigma step (full mode) or its separable diagonal
/// analogue. Every committed step keeps (mu, Sigma) feasible and never
/// lowers the joint log-posterior. All constraint confidences must
/// exceed 0.5.
EstimationResult map_gaussian_means(const GaussianMeansData& d, const ConstraintSet& cs,
                                    const WishartHyperprior& prior, CovarianceMode mode,
                                    const GaussianMapOptions& opts = {});

}  // namespace probcon

#endif  // PROBCON_GAUSSIAN_MEANS_HPP
