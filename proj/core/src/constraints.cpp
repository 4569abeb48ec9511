#include "probcon/constraints.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace probcon {

LinearConstraint::LinearConstraint(Eigen::VectorXd coeffs, double bound)
    : a(std::move(coeffs)), b(bound) {
  if (a.size() == 0) {
    throw std::invalid_argument("LinearConstraint: empty coefficient vector");
  }
  if (!a.allFinite() || !std::isfinite(b)) {
    throw std::invalid_argument("LinearConstraint: non-finite coefficients");
  }
}

bool LinearConstraint::is_degenerate() const {
  return (a.array() == 0.0).all();
}

double LinearConstraint::slack(const Eigen::VectorXd& theta) const {
  if (theta.size() != a.size()) {
    throw std::invalid_argument("LinearConstraint: dimension mismatch");
  }
  return b - a.dot(theta);
}

bool LinearConstraint::is_satisfied(const Eigen::VectorXd& theta) const {
  return slack(theta) >= 0.0;
}

ProbabilisticConstraint::ProbabilisticConstraint(LinearConstraint c, double confidence)
    : linear(std::move(c)), eta(confidence) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("ProbabilisticConstraint: eta must lie in (0,1)");
  }
}

void ConstraintSet::add(ProbabilisticConstraint pc) {
  if (dimension_ < 0) {
    dimension_ = pc.linear.dimension();
  } else if (pc.linear.dimension() != dimension_) {
    throw std::invalid_argument("ConstraintSet: mixed constraint dimensions");
  }
  constraints_.push_back(std::move(pc));
}

std::vector<LinearConstraint> ConstraintSet::linear_parts() const {
  std::vector<LinearConstraint> out;
  out.reserve(constraints_.size());
  for (const auto& pc : constraints_) out.push_back(pc.linear);
  return out;
}

bool ConstraintSet::hard_satisfied_by(const Eigen::VectorXd& theta) const {
  for (const auto& pc : constraints_) {
    if (!pc.linear.is_satisfied(theta)) return false;
  }
  return true;
}

LinearConstraint ordering(int i, int j, int n) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::out_of_range("ordering: index out of range");
  }
  if (i == j) {
    throw std::invalid_argument("ordering: indices must differ");
  }
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  a[i] = 1.0;
  a[j] = -1.0;
  return LinearConstraint(std::move(a), 0.0);
}

std::array<LinearConstraint, 2> box(int i, double lo, double hi, int n) {
  if (i < 0 || i >= n) throw std::out_of_range("box: index out of range");
  if (lo > hi) throw std::domain_error("box: lo > hi");
  Eigen::VectorXd lower = Eigen::VectorXd::Zero(n);
  lower[i] = -1.0;
  Eigen::VectorXd upper = Eigen::VectorXd::Zero(n);
  upper[i] = 1.0;
  return {LinearConstraint(std::move(lower), -lo), LinearConstraint(std::move(upper), hi)};
}

std::array<LinearConstraint, 2> sum_band(double lo, double hi,
                                         const std::vector<int>& indices, int n) {
  if (lo > hi) throw std::domain_error("sum_band: lo > hi");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (int i : indices) {
    if (i < 0 || i >= n) throw std::out_of_range("sum_band: index out of range");
    a[i] = 1.0;
  }
  return {LinearConstraint(-a, -lo), LinearConstraint(a, hi)};
}

std::array<LinearConstraint, 2> difference_upper(int i, int j, double c, int n) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::out_of_range("difference_upper: index out of range");
  }
  if (i == j) throw std::invalid_argument("difference_upper: indices must differ");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  a[i] = 1.0;
  a[j] = -1.0;
  return {LinearConstraint(a, c), LinearConstraint(-a, c)};
}

std::array<LinearConstraint, 2> difference_band(int i, int j, double lo, double hi, int n) {
  if (lo > hi) throw std::domain_error("difference_band: lo > hi");
  if (lo > 0.0) {
    throw std::invalid_argument(
        "difference_band: a positive lower bound on |theta_i - theta_j| is "
        "nonconvex and cannot be expressed as linear constraints");
  }
  return difference_upper(i, j, hi, n);
}

std::string to_json(const ConstraintSet& cs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& pc : cs) {
    nlohmann::json rec;
    rec["a"] = std::vector<double>(pc.linear.a.data(), pc.linear.a.data() + pc.linear.a.size());
    rec["b"] = pc.linear.b;
    rec["eta"] = pc.eta;
    arr.push_back(std::move(rec));
  }
  return arr.dump();
}

ConstraintSet constraint_set_from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) {
    throw std::invalid_argument("constraint_set_from_json: expected a JSON array");
  }
  ConstraintSet cs;
  for (const auto& rec : arr) {
    std::vector<double> coeffs = rec.at("a").get<std::vector<double>>();
    Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    double b = rec.at("b").get<double>();
    double eta = rec.value("eta", 0.95);
    cs.add(LinearConstraint(std::move(a), b), eta);
  }
  return cs;
}

}  // namespace probcon
