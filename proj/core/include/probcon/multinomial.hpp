#ifndef PROBCON_MULTINOMIAL_HPP
#define PROBCON_MULTINOMIAL_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "probcon/constraints.hpp"
#include "probcon/estimation.hpp"

namespace probcon {

/// Category counts of a multinomial sample.
struct MultinomialData {
  Eigen::VectorXd counts; // nonnegative; total >= 1 for estimation

  MultinomialData() = default;
  explicit MultinomialData(Eigen::VectorXd c);
  double total() const { return counts.sum(); }
  int dimension() const { return static_cast<int>(counts.size()); }
};

/// theta_i = c_i / sum c.
Eigen::VectorXd mle_multinomial(const MultinomialData& d);

/// Maximizer of sum c_i log theta_i over the simplex intersected with hard
/// half-space constraints, by projected gradient ascent with backtracking.
/// The returned point satisfies every hard constraint to ~1e-12 slack.
/// Throws InfeasibleError when the feasible region is empty.
Eigen::VectorXd constrained_mle_multinomial(const MultinomialData& d,
                                            const std::vector<LinearConstraint>& hard);

struct DirichletMapOptions {
  double alpha_box_lo = 0.5;   // uniform hyperprior support, per coordinate
  double alpha_box_hi = 50.0;
  int max_sweeps = 200;
  double objective_tol = 1e-9;        // sweep-improvement convergence test
  int alpha_steps_per_sweep = 12;     // inner ascent iterations per sweep
  int probe_samples = 400;            // feasible-alpha search budget
  int ascent_starts = 3;              // diverse probe starts optimized to the end
  double theta_floor = 1e-8;          // simplex-interior clamp for the theta step
  InversionMethod feasibility_method = InversionMethod::edgeworth2;
  bool verify_exact = true;           // re-check final margins by quadrature
  std::uint64_t probe_seed = 20240901; // seeds the feasible-alpha probe draws
};

/// Joint MAP of (theta, alpha) for multinomial counts with a Dir(alpha) prior,
/// a uniform hyperprior on an alpha box, and the hyperparameter feasible-set
/// constraints induced by cs. Alternates a closed-form theta step with a
/// penalty-guided feasible ascent step in alpha; every accepted move keeps
/// alpha feasible and never lowers the joint log-posterior.
EstimationResult map_dirichlet_multinomial(const MultinomialData& d, const ConstraintSet& cs,
                                           const DirichletMapOptions& opts = {});

/// Empirical Bayes: maximizes the Dirichlet-multinomial (Polya) marginal
/// log-likelihood of the replicates over the feasible alpha region, then
/// reports the predictive theta = (pooled counts + alpha) / (total + sum alpha).
EstimationResult eb_dirichlet_multinomial(const std::vector<Eigen::VectorXd>& replicates,
                                          const ConstraintSet& cs,
                                          const DirichletMapOptions& opts = {});

}  // namespace probcon

#endif  // PROBCON_MULTINOMIAL_HPP
