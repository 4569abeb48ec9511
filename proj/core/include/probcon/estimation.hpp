#ifndef PROBCON_ESTIMATION_HPP
#define PROBCON_ESTIMATION_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "probcon/dirichlet.hpp"
#include "probcon/gaussian.hpp"

namespace probcon {

/// Outcome of a constrained MAP / EB run. objective_trace records every
/// accepted coordinate step, so it is nondecreasing by construction.
/// feasibility_margins are evaluated with the same probability method the
/// optimizer enforced (prob - eta for Dirichlet priors, soc margin for
/// Gaussian priors); exact_margins, when present, re-checks the final
/// Dirichlet iterate by quadrature.
struct EstimationResult {
  Eigen::VectorXd theta;
  std::optional<DirichletHyper> dirichlet_hyper;
  std::optional<GaussianHyper> gaussian_hyper;
  std::vector<double> objective_trace;
  std::vector<double> feasibility_margins;
  std::optional<std::vector<double>> exact_margins;
  int iterations = 0;
  bool converged = false;
};

enum class CovarianceMode { diagonal, full };

struct GaussianMapOptions {
  int max_sweeps = 300;
  double objective_tol = 1e-9; // sweep-improvement convergence test
  int mu_max_iters = 300;      // projected-gradient iterations per mu step
  int sigma_max_sweeps = 500;  // cyclic projection budget per sigma step
  double sigma_tol = 1e-10;
};

}  // namespace probcon

#endif  // PROBCON_ESTIMATION_HPP
