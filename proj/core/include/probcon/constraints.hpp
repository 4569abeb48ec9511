#ifndef PROBCON_CONSTRAINTS_HPP
#define PROBCON_CONSTRAINTS_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace probcon {

/// Closed half-space a'theta <= b. Boundary points (zero slack) satisfy it.
struct LinearConstraint {
  Eigen::VectorXd a;
  double b = 0.0;

  LinearConstraint() = default;
  LinearConstraint(Eigen::VectorXd coeffs, double bound);

  int dimension() const { return static_cast<int>(a.size()); }

  /// All-zero coefficient vector: the constraint degenerates to 0 <= b.
  bool is_degenerate() const;

  /// b - a'theta; nonnegative iff theta satisfies the constraint.
  double slack(const Eigen::VectorXd& theta) const;
  bool is_satisfied(const Eigen::VectorXd& theta) const;

  /// Flipped inequality: a'theta >= b becomes (-a)'theta <= -b.
  LinearConstraint flipped() const { return LinearConstraint(-a, -b); }
};

/// A linear constraint required to hold with prior probability >= eta.
struct ProbabilisticConstraint {
  LinearConstraint linear;
  double eta = 0.95;

  ProbabilisticConstraint() = default;
  ProbabilisticConstraint(LinearConstraint c, double confidence);
};

/// Ordered collection of probabilistic constraints sharing one dimension.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  void add(ProbabilisticConstraint pc);
  void add(LinearConstraint c, double eta) { add(ProbabilisticConstraint(std::move(c), eta)); }

  bool empty() const { return constraints_.empty(); }
  std::size_t size() const { return constraints_.size(); }
  int dimension() const { return dimension_; }
  const ProbabilisticConstraint& operator[](std::size_t i) const { return constraints_[i]; }
  auto begin() const { return constraints_.begin(); }
  auto end() const { return constraints_.end(); }

  /// Linear parts only, for use as hard constraints.
  std::vector<LinearConstraint> linear_parts() const;

  /// Conjunction of the member half-space tests at a parameter point.
  bool hard_satisfied_by(const Eigen::VectorXd& theta) const;

 private:
  std::vector<ProbabilisticConstraint> constraints_;
  int dimension_ = -1;
};

// Builders for the supported special cases. Indices are zero-based.

/// theta_i <= theta_j as (e_i - e_j)'theta <= 0.
LinearConstraint ordering(int i, int j, int n);

/// lo <= theta_i <= hi as two half-spaces {-theta_i <= -lo, theta_i <= hi}.
std::array<LinearConstraint, 2> box(int i, double lo, double hi, int n);

/// lo <= sum_{i in indices} theta_i <= hi as two half-spaces.
std::array<LinearConstraint, 2> sum_band(double lo, double hi,
                                         const std::vector<int>& indices, int n);

/// |theta_i - theta_j| <= c as the pair {theta_i - theta_j <= c, theta_j - theta_i <= c}.
std::array<LinearConstraint, 2> difference_upper(int i, int j, double c, int n);

/// lo <= |theta_i - theta_j| <= hi. A strictly positive lower bound describes
/// a nonconvex (disjunctive) region that cannot be written as an intersection
/// of half-spaces; it is rejected with std::invalid_argument. lo <= 0 reduces
/// to difference_upper.
std::array<LinearConstraint, 2> difference_band(int i, int j, double lo, double hi, int n);

// Serialization to the harness config format: a JSON array of records
// {"a": [...], "b": scalar, "eta": scalar}.
std::string to_json(const ConstraintSet& cs);
ConstraintSet constraint_set_from_json(const std::string& text);

}  // namespace probcon

#endif  // PROBCON_CONSTRAINTS_HPP
