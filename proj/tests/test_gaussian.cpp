#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "probcon/errors.hpp"
#include "probcon/gaussian.hpp"
#include "probcon/special.hpp"

using namespace probcon;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double quantile_bisect(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (std_normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cone margin on pinned cases") {
  GaussianHyper h(vec({-2.0, 0.0}), Eigen::MatrixXd::Identity(2, 2));
  ProbabilisticConstraint pc(LinearConstraint(vec({1.0, 0.0}), 0.0), 0.95);
  double expected = 0.0 - (-2.0) - quantile_bisect(0.95) * 1.0;
  CHECK(soc_margin(h, pc) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(soc_margin(h, pc) == doctest::Approx(0.3551464).epsilon(1e-6));

  // eta = 1/2 reduces to the linear slack.
  ProbabilisticConstraint half(LinearConstraint(vec({1.0, 0.0}), 0.0), 0.5);
  CHECK(soc_margin(h, half) == doctest::Approx(2.0).epsilon(1e-12));

  GaussianHyper scalar(vec({0.0}), Eigen::MatrixXd::Identity(1, 1));
  ProbabilisticConstraint boundary(LinearConstraint(vec({1.0}), quantile_bisect(0.95)), 0.95);
  CHECK(std::abs(soc_margin(scalar, boundary)) < 1e-10);
}

TEST_CASE("prior probability of a half-space is the normal cdf of the slack") {
  GaussianHyper h(vec({0.0, 0.0, 0.0}), Eigen::MatrixXd::Identity(3, 3));
  CHECK(prob_leq(h, LinearConstraint(vec({1.0, 0.0, 0.0}), 0.0)) == doctest::Approx(0.5));

  Eigen::MatrixXd diag2(2, 2);
  diag2 << 4.0, 0.0, 0.0, 1.0;
  GaussianHyper g(vec({1.0, 1.0}), diag2);
  CHECK(prob_leq(g, LinearConstraint(vec({1.0, 1.0}), 2.0)) == doctest::Approx(0.5));

  // Boundary hyperparameters reproduce eta to high accuracy.
  for (double eta : {0.6, 0.75, 0.9, 0.95, 0.99}) {
    double b = g.mu().dot(vec({1.0, 1.0})) +
               std_normal_quantile(eta) * std::sqrt(g.quad_form(vec({1.0, 1.0})));
    CHECK(std::abs(prob_leq(g, LinearConstraint(vec({1.0, 1.0}), b)) - eta) < 1e-10);
  }

  CHECK_THROWS_AS(prob_leq(h, LinearConstraint(Eigen::VectorXd::Zero(3), 1.0)),
                  std::domain_error);
}

TEST_CASE("hyperparameter validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.2, 0.3, 1.0;
  CHECK_THROWS_AS(GaussianHyper(vec({0.0, 0.0}), asym), std::domain_error);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(GaussianHyper(vec({0.0, 0.0}), indef), DecompositionError);

  CHECK_THROWS_AS(GaussianHyper::diagonal(vec({0.0}), vec({0.0})), DecompositionError);
}

TEST_CASE("diagonal variant matches the dense form") {
  Eigen::VectorXd mu = vec({0.3, -1.2, 0.7});
  Eigen::VectorXd var = vec({0.5, 2.0, 1.25});
  GaussianHyper diag = GaussianHyper::diagonal(mu, var);
  GaussianHyper dense(mu, Eigen::MatrixXd(var.asDiagonal()));

  Eigen::VectorXd a = vec({1.0, -0.5, 0.25});
  CHECK(diag.quad_form(a) == doctest::Approx(dense.quad_form(a)).epsilon(1e-14));
  CHECK(diag.log_det() == doctest::Approx(dense.log_det()).epsilon(1e-14));
  CHECK((diag.precision() - dense.precision()).cwiseAbs().maxCoeff() < 1e-12);
  LinearConstraint c(a, 0.4);
  CHECK(prob_leq(diag, c) == doctest::Approx(prob_leq(dense, c)).epsilon(1e-14));
}

TEST_CASE("membership reports per-constraint margins with closed boundaries") {
  GaussianHyper h(vec({0.0, 0.0}), Eigen::MatrixXd::Identity(2, 2));
  ConstraintSet empty;
  CHECK(in_feasible_set(h, empty).feasible); // vacuous intersection

  ConstraintSet mixed;
  mixed.add(LinearConstraint(vec({1.0, 0.0}), 10.0), 0.95);  // satisfied
  mixed.add(LinearConstraint(vec({1.0, 0.0}), -10.0), 0.95); // violated
  auto report = in_feasible_set(h, mixed);
  CHECK_FALSE(report.feasible);
  CHECK(report.margins[0] > 0.0);
  CHECK(report.margins[1] < 0.0);

  ConstraintSet boundary;
  double b = std_normal_quantile(0.9);
  boundary.add(LinearConstraint(vec({1.0, 0.0}), b), 0.9);
  auto rb = in_feasible_set(h, boundary);
  CHECK(std::abs(rb.margins[0]) < 1e-12);
  CHECK(rb.feasible); // zero margin is inside the closed set
}

TEST_CASE("monte carlo agrees with the closed form and is deterministic") {
  GaussianHyper h(vec({0.0, 0.0}), Eigen::MatrixXd::Identity(2, 2));
  LinearConstraint c(vec({1.0, 0.0}), 0.0);
  auto mc = prob_leq_montecarlo(h, c, 100000, RngHandle(11));
  CHECK(std::abs(mc.estimate - 0.5) <= 3.0 * mc.std_err);

  double eta = 0.95;
  double b = std_normal_quantile(eta);
  auto mcb = prob_leq_montecarlo(h, LinearConstraint(vec({1.0, 0.0}), b), 100000, RngHandle(12));
  CHECK(std::abs(mcb.estimate - eta) <= 3.0 * std::max(mcb.std_err, 1e-12));

  auto again = prob_leq_montecarlo(h, c, 100000, RngHandle(11));
  CHECK(again.estimate == mc.estimate);

  GaussianHyper diag = GaussianHyper::diagonal(vec({0.5, 0.5}), vec({2.0, 0.5}));
  LinearConstraint cd(vec({1.0, -1.0}), 0.3);
  auto mcd = prob_leq_montecarlo(diag, cd, 100000, RngHandle(13));
  CHECK(std::abs(mcd.estimate - prob_leq(diag, cd)) <= 3.0 * mcd.std_err);
}

TEST_CASE("margin sign predicts membership; rescaling keeps the sign") {
  RngHandle rng(2718);
  int boundary_band = 0;
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.uniform() * 4.0);
    Eigen::VectorXd mu(n), a(n);
    for (int i = 0; i < n; ++i) {
      mu[i] = rng.uniform(-2.0, 2.0);
      a[i] = rng.uniform(-1.0, 1.0);
    }
    if ((a.array() == 0.0).all()) a[0] = 1.0;
    Eigen::MatrixXd sigma = oracles::random_spd(n, rng);
    GaussianHyper h(mu, sigma);
    double eta = rng.uniform(0.05, 0.95);
    double b = a.dot(mu) + std::sqrt(h.quad_form(a)) * rng.uniform(-3.0, 3.0);
    ProbabilisticConstraint pc(LinearConstraint(a, b), eta);

    double margin = soc_margin(h, pc);
    double p = prob_leq(h, LinearConstraint(a, b));
    if (std::abs(margin) <= 1e-12) {
      ++boundary_band;
      continue;
    }
    CHECK((margin >= 0.0) == (p >= eta));

    double scale = rng.uniform(0.01, 100.0);
    double scaled = soc_margin(h, ProbabilisticConstraint(LinearConstraint(a * scale, b * scale), eta));
    CHECK((scaled >= 0.0) == (margin >= 0.0));
  }
  CHECK(boundary_band <= 2); // generic draws essentially never land on the boundary
}

TEST_CASE("feasible means form a convex set at fixed covariance for eta >= 1/2") {
  RngHandle rng(31415);
  for (int t = 0; t < 100; ++t) {
    int n = 3;
    Eigen::MatrixXd sigma = oracles::random_spd(n, rng);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a[i] = rng.uniform(-1.0, 1.0);
    if ((a.array() == 0.0).all()) a[0] = 1.0;
    double eta = rng.uniform(0.5, 0.99);
    double b = rng.uniform(-1.0, 1.0);
    ProbabilisticConstraint pc(LinearConstraint(a, b), eta);

    // Two feasible means (constructed to satisfy the cone inequality).
    GaussianHyper probe(Eigen::VectorXd::Zero(n), sigma);
    double shrink = std_normal_quantile(eta) * std::sqrt(probe.quad_form(a));
    Eigen::VectorXd mu1(n), mu2(n);
    for (int i = 0; i < n; ++i) {
      mu1[i] = rng.uniform(-2.0, 2.0);
      mu2[i] = rng.uniform(-2.0, 2.0);
    }
    double norm2 = a.squaredNorm();
    auto make_feasible = [&](Eigen::VectorXd v) {
      double excess = a.dot(v) - (b - shrink);
      if (excess > 0.0) v -= (excess / norm2) * a;
      return v;
    };
    mu1 = make_feasible(mu1);
    mu2 = make_feasible(mu2);
    Eigen::VectorXd mid = 0.5 * (mu1 + mu2);
    CHECK(soc_margin(GaussianHyper(mid, sigma), pc) >= -1e-10);
  }
}
