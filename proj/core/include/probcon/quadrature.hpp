#ifndef PROBCON_QUADRATURE_HPP
#define PROBCON_QUADRATURE_HPP

#include <functional>

namespace probcon {

struct QuadratureConfig {
  double abs_tol = 1e-10;     // absolute error target
  int max_subdivisions = 200; // interval splits before giving up
  double truncation_T = 40.0; // upper limit substituting +infinity

  void validate() const; // throws std::domain_error on bad fields
};

struct QuadratureOutcome {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7-15) integration of f on [lo, hi].
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below cfg.abs_tol or cfg.max_subdivisions is exhausted
/// (converged = false in that case). A non-finite integrand value raises
/// IntegrationError carrying the abscissa.
QuadratureOutcome adaptive_quadrature(const std::function<double(double)>& f,
                                      double lo, double hi,
                                      const QuadratureConfig& cfg = {});

}  // namespace probcon

#endif  // PROBCON_QUADRATURE_HPP
