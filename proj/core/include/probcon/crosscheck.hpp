#ifndef PROBCON_CROSSCHECK_HPP
#define PROBCON_CROSSCHECK_HPP

#include <cstdint>
#include <string>

namespace probcon {

/// Agreement statistics between the three Dirichlet constraint-probability
/// evaluators on a seeded random suite (dimension 2..6, concentrations in
/// [0.5, 10], random linear constraints).
struct DirichletCrosscheck {
  int trials = 0;
  int mc_within_3se = 0;        // |exact - monte carlo| <= 3 std errors
  int edgeworth2_within = 0;    // |edgeworth order 2 - exact| <= 0.02
  double max_mc_gap_se = 0.0;   // worst |exact - mc| / std error
  double max_edgeworth_gap = 0.0;
  int evaluator_failures = 0;   // instances where an evaluator threw
};

DirichletCrosscheck run_dirichlet_crosscheck(int trials, std::int64_t mc_samples,
                                             std::uint64_t seed);

/// Consistency of the exact Gaussian inversion: the cone margin sign must
/// predict prob >= eta, boundary-constructed hyperparameters must give
/// prob == eta to 1e-10, and sampling must agree with the closed form.
struct GaussianCrosscheck {
  int trials = 0;
  int sign_mismatches = 0;        // outside a 1e-12 boundary band
  int boundary_checks = 0;
  double max_boundary_gap = 0.0;  // worst |prob - eta| at boundary hypers
  int mc_within_3se = 0;
  int mc_trials = 0;
};

GaussianCrosscheck run_gaussian_crosscheck(int trials, std::int64_t mc_samples,
                                           std::uint64_t seed);

std::string describe(const DirichletCrosscheck& c);
std::string describe(const GaussianCrosscheck& c);

}  // namespace probcon

#endif  // PROBCON_CROSSCHECK_HPP
