#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "probcon/bregman.hpp"
#include "probcon/errors.hpp"
#include "probcon/special.hpp"

using namespace probcon;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("logdet divergence basics") {
  Eigen::MatrixXd x = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  CHECK(logdet_divergence(x, x) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(logdet_divergence(x, eye) ==
        doctest::Approx(4.0 - 2.0 * std::log(2.0) - 2.0).epsilon(1e-12));

  RngHandle rng(100);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd a = oracles::random_spd(3, rng);
    Eigen::MatrixXd b = oracles::random_spd(3, rng);
    CHECK(logdet_divergence(a, b) >= -1e-12);
  }

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(logdet_divergence(indef, eye), DecompositionError);
}

TEST_CASE("trace bound from a probabilistic constraint") {
  double q95 = std_normal_quantile(0.95);
  Eigen::VectorXd a = vec({1.0, 0.0});
  {
    // margin equal to the quantile gives unit bound
    ProbabilisticConstraint pc(LinearConstraint(a, q95), 0.95);
    TraceConstraint tc = trace_bound_from_constraint(pc, vec({0.0, 0.0}));
    CHECK(tc.z == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    ProbabilisticConstraint pc(LinearConstraint(a, 0.5 * q95), 0.95);
    TraceConstraint tc = trace_bound_from_constraint(pc, vec({0.0, 0.0}));
    CHECK(tc.z == doctest::Approx(0.25).epsilon(1e-12));
  }
  CHECK_THROWS_AS(trace_bound_from_constraint(
                      ProbabilisticConstraint(LinearConstraint(a, 0.0), 0.95), vec({0.0, 0.0})),
                  InfeasibleError);
  CHECK_THROWS_AS(trace_bound_from_constraint(
                      ProbabilisticConstraint(LinearConstraint(a, 1.0), 0.4), vec({0.0, 0.0})),
                  std::domain_error);
}

TEST_CASE("single projection: fixed point, scalar case, multiplier form") {
  {
    Eigen::MatrixXd base = Eigen::MatrixXd::Identity(2, 2);
    TraceConstraint tc(vec({1.0, 0.0}), 5.0); // already feasible
    CHECK((project_single(base, tc) - base).cwiseAbs().maxCoeff() == 0.0);
  }
  {
    Eigen::MatrixXd base(1, 1);
    base << 4.0;
    TraceConstraint tc(vec({1.0}), 1.0);
    Eigen::MatrixXd sigma = project_single(base, tc);
    CHECK(sigma(0, 0) == doctest::Approx(1.0).epsilon(1e-14)); // nu = 0.75
  }

  RngHandle rng(321);
  for (int t = 0; t < 40; ++t) {
    int n = t % 2 == 0 ? 2 : 3;
    Eigen::MatrixXd base = oracles::random_spd(n, rng);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a[i] = rng.uniform(-1.0, 1.0);
    if ((a.array() == 0.0).all()) a[0] = 1.0;
    double q = a.dot(base * a);
    double z = q * rng.uniform(0.2, 0.9); // force the constraint active
    TraceConstraint tc(a, z);
    Eigen::MatrixXd sigma = project_single(base, tc);

    // Active-set exactness and positive definiteness.
    CHECK(a.dot(sigma * a) == doctest::Approx(z).epsilon(1e-10));
    CHECK(min_eigenvalue(sigma) > 0.0);

    // The precision shift is the rank-one multiplier update.
    Eigen::MatrixXd shift = sigma.llt().solve(Eigen::MatrixXd::Identity(n, n)) -
                            base.llt().solve(Eigen::MatrixXd::Identity(n, n));
    double nu_expected = (q - z) / (z * q);
    double nu_extracted = a.dot(shift * a) / (a.squaredNorm() * a.squaredNorm());
    CHECK(nu_extracted == doctest::Approx(nu_expected).epsilon(1e-9));
    Eigen::MatrixXd residual = shift - nu_expected * (a * a.transpose());
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-10 * (1.0 + shift.cwiseAbs().maxCoeff()));

    // Idempotence.
    CHECK((project_single(sigma, tc) - sigma).cwiseAbs().maxCoeff() < 1e-12);
  }

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(project_single(indef, TraceConstraint(vec({1.0, 0.0}), 1.0)),
                  DecompositionError);
}

TEST_CASE("single projection matches the numerical logdet minimizer") {
  RngHandle rng(555);
  for (int t = 0; t < 20; ++t) {
    int n = t % 2 == 0 ? 2 : 3;
    Eigen::MatrixXd base = oracles::random_spd(n, rng);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a[i] = rng.uniform(-1.0, 1.0);
    if ((a.array() == 0.0).all()) a[0] = 1.0;
    double z = a.dot(base * a) * rng.uniform(0.3, 0.8);
    TraceConstraint tc(a, z);

    Eigen::MatrixXd fast = project_single(base, tc);
    Eigen::MatrixXd slow = oracles::logdet_projection_minimizer(base, a, z);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("diagonal projection: clipping and stationarity") {
  {
    Eigen::VectorXd base = vec({4.0, 9.0});
    Eigen::VectorXd d1 = project_single_diagonal(base, TraceConstraint(vec({1.0, 0.0}), 1.0));
    CHECK(d1[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d1[1] == doctest::Approx(9.0).epsilon(1e-12));
  }
  RngHandle rng(808);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd base(3);
    Eigen::VectorXd a(3);
    for (int i = 0; i < 3; ++i) {
      base[i] = rng.uniform(0.5, 4.0);
      a[i] = rng.uniform(-1.0, 1.0);
    }
    if ((a.array() == 0.0).all()) a[0] = 1.0;
    double q = (a.array().square() * base.array()).sum();
    double z = q * rng.uniform(0.3, 0.9);
    Eigen::VectorXd d = project_single_diagonal(base, TraceConstraint(a, z));

    CHECK((a.array().square() * d.array()).sum() == doctest::Approx(z).epsilon(1e-9));
    // A single multiplier explains every coordinate: 1/d_i - 1/s_i = nu a_i^2.
    double nu = -1.0;
    for (int i = 0; i < 3; ++i) {
      if (a[i] == 0.0) {
        CHECK(d[i] == base[i]);
        continue;
      }
      double nu_i = (1.0 / d[i] - 1.0 / base[i]) / (a[i] * a[i]);
      if (nu < 0.0) nu = nu_i;
      CHECK(nu_i == doctest::Approx(nu).epsilon(1e-7));
    }
    CHECK(nu >= 0.0);
  }
}

TEST_CASE("cyclic projection reaches the intersection and preserves positivity") {
  {
    // Single constraint: identical to a single projection.
    RngHandle rng(99);
    Eigen::MatrixXd base = oracles::random_spd(3, rng);
    Eigen::VectorXd a = vec({1.0, -0.5, 0.25});
    double z = a.dot(base * a) * 0.5;
    auto res = cyclic_project(base, {TraceConstraint(a, z)});
    CHECK(res.converged);
    CHECK((res.sigma - project_single(base, TraceConstraint(a, z))).cwiseAbs().maxCoeff() < 1e-12);
  }
  {
    // Feasible base: identity map.
    Eigen::MatrixXd base = Eigen::MatrixXd::Identity(2, 2);
    auto res = cyclic_project(base, {TraceConstraint(vec({1.0, 0.0}), 2.0),
                                     TraceConstraint(vec({0.0, 1.0}), 3.0)});
    CHECK(res.converged);
    CHECK(res.sweeps == 1);
    CHECK((res.sigma - base).cwiseAbs().maxCoeff() == 0.0);
  }
  {
    // Orthogonal axis constraints clip the diagonal entries.
    Eigen::MatrixXd base(2, 2);
    base << 4.0, 0.0, 0.0, 9.0;
    auto res = cyclic_project(base, {TraceConstraint(vec({1.0, 0.0}), 1.0),
                                     TraceConstraint(vec({0.0, 1.0}), 2.0)});
    CHECK(res.converged);
    CHECK(res.sigma(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.sigma(1, 1) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(res.sigma(0, 1)) < 1e-12);
  }

  RngHandle rng(1212);
  for (int t = 0; t < 30; ++t) {
    int n = 2 + t % 3;
    Eigen::MatrixXd base = oracles::random_spd(n, rng);
    std::vector<TraceConstraint> tcs;
    int m = 2 + static_cast<int>(rng.uniform() * 3.0);
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd a(n);
      for (int i = 0; i < n; ++i) a[i] = rng.uniform(-1.0, 1.0);
      if ((a.array() == 0.0).all()) a[0] = 1.0;
      tcs.emplace_back(a, a.dot(base * a) * rng.uniform(0.3, 1.2));
    }
    auto res = cyclic_project(base, tcs, 2000, 1e-9);
    CHECK(res.converged);
    CHECK(res.max_violation <= 1e-9);
    CHECK(min_eigenvalue(res.sigma) > 0.0);
    CHECK(!res.violation_trace.empty());
  }
}

TEST_CASE("cyclic projection reports non-convergence instead of lying") {
  Eigen::MatrixXd base(2, 2);
  base << 10.0, 9.0, 9.0, 10.0;
  std::vector<TraceConstraint> tcs = {TraceConstraint(vec({1.0, 1.0}), 0.05),
                                      TraceConstraint(vec({1.0, -1.0}), 0.05),
                                      TraceConstraint(vec({1.0, 0.0}), 0.05)};
  auto res = cyclic_project(base, tcs, 1, 1e-12);
  if (!res.converged) {
    CHECK(res.max_violation > 1e-12);
    CHECK(res.sweeps == 1);
  }
  auto full = cyclic_project(base, tcs, 5000, 1e-10);
  CHECK(full.converged);
  CHECK(min_eigenvalue(full.sigma) > 0.0);
}
