#ifndef PROBCON_ERRORS_HPP
#define PROBCON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace probcon {

/// Integrand evaluated to a non-finite value; carries the offending abscissa.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double abscissa)
      : std::runtime_error(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// A matrix factorization (Cholesky etc.) failed, typically non-SPD input.
class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No point satisfies the requested constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace probcon

#endif  // PROBCON_ERRORS_HPP
