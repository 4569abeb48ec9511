#ifndef PROBCON_DIRICHLET_HPP
#define PROBCON_DIRICHLET_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "probcon/constraints.hpp"
#include "probcon/quadrature.hpp"
#include "probcon/rng.hpp"

namespace probcon {

/// Dirichlet concentration parameters; strictly positive and finite.
struct DirichletHyper {
  Eigen::VectorXd alpha;

  DirichletHyper() = default;
  explicit DirichletHyper(Eigen::VectorXd concentration);
  int dimension() const { return static_cast<int>(alpha.size()); }
};

/// The event a'theta <= b under theta ~ Dir(alpha) equals the event
/// sum_k lambda_k T_k <= 0 where the T_k are independent chi-squared
/// variables: lambda_k runs over the distinct nonzero values of a_j - b and
/// dof_k = 2 * sum of alpha_j over the coordinates j attaining that value.
/// Coordinates with a_j - b = 0 contribute nothing and are dropped.
struct GroupedCoefficients {
  std::vector<double> lambdas; // pairwise distinct, nonzero
  std::vector<double> dofs;    // strictly positive, may be non-integer

  std::size_t size() const { return lambdas.size(); }
  bool empty() const { return lambdas.empty(); }
};

/// First four raw cumulants of sum_k lambda_k T_k.
struct CumulantVector {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
};

GroupedCoefficients group_coefficients(const Eigen::VectorXd& a, double b,
                                       const DirichletHyper& hyper);

/// kappa1 = sum lambda r, kappa2 = sum 2 lambda^2 r, kappa3 = sum 8 lambda^3 r,
/// kappa4 = sum 48 lambda^4 r. Throws std::domain_error on an empty grouping.
CumulantVector cumulants(const GroupedCoefficients& g);

enum class EdgeworthOrder { first = 1, second = 2 };

/// Edgeworth approximation of P(a'theta <= b) for theta ~ Dir(alpha),
/// built from the standardized cumulants at s = -kappa1/sqrt(kappa2):
///   order 1:  Phi(s) - (k3/6) H_2(s) phi(s)
///   order 2:  additionally - phi(s) [ (k4/24) H_3(s) + (k3^2/72) H_5(s) ]
/// with k3 = kappa3/kappa2^(3/2), k4 = kappa4/kappa2^2. Clamped to [0,1].
/// An empty grouping means a'theta = b identically, so the probability is 1.
double prob_leq_edgeworth(const DirichletHyper& hyper, const LinearConstraint& c,
                          EdgeworthOrder order = EdgeworthOrder::second);

/// P(a'theta <= b) by numerical inversion of the characteristic function of
/// the chi-squared combination:
///   1/2 - (1/pi) * int_0^inf sin(0.5 sum r_k atan(lambda_k t))
///                          / (t * prod (1 + lambda_k^2 t^2)^(r_k/4)) dt.
/// The infinite tail is truncated where a closed-form envelope bound drops
/// below a tenth of cfg.abs_tol; the removable t -> 0 singularity is replaced
/// by its analytic limit. Accuracy failures raise NumericalError.
double prob_leq_exact(const DirichletHyper& hyper, const LinearConstraint& c,
                      const QuadratureConfig& cfg = {});

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
};

/// Sampling estimate of P(a'theta <= b) with binomial standard error.
MonteCarloEstimate prob_leq_montecarlo(const DirichletHyper& hyper,
                                       const LinearConstraint& c,
                                       std::int64_t n_samples, RngHandle rng);

enum class InversionMethod { edgeworth1, edgeworth2, exact, montecarlo };

/// alpha lies in the constraint's hyperparameter feasible set iff the chosen
/// probability evaluator reports at least eta. montecarlo is not accepted
/// here; use prob_leq_montecarlo directly when a sampling check is wanted.
bool in_feasible_set(const DirichletHyper& hyper, const ProbabilisticConstraint& pc,
                     InversionMethod method = InversionMethod::edgeworth2);

}  // namespace probcon

#endif  // PROBCON_DIRICHLET_HPP
