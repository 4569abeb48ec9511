#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "probcon/errors.hpp"
#include "probcon/gaussian_means.hpp"
#include "probcon/multinomial.hpp"
#include "probcon/projection.hpp"
#include "probcon/regression.hpp"
#include "probcon/special.hpp"

using namespace probcon;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

bool nondecreasing(const std::vector<double>& trace, double slack = 1e-9) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] < trace[i - 1] - slack) return false;
  }
  return true;
}

double multinomial_loglik(const Eigen::VectorXd& c, const Eigen::VectorXd& theta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c[i] > 0.0) ll += c[i] * std::log(theta[i]);
  }
  return ll;
}

double joint_objective(const Eigen::VectorXd& c, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& alpha) {
  return multinomial_loglik(c, theta) + log_dirichlet_pdf(theta, alpha);
}

// Exhaustive oracle for the n = 2 constrained MAP: alpha on a grid, theta on
// a simplex grid, feasibility via the same order-2 Edgeworth rule the
// optimizer enforces.
double map_grid_optimum(const Eigen::VectorXd& counts, const ConstraintSet& cs,
                        double alpha_lo, double alpha_hi, double alpha_step,
                        double theta_step) {
  double best = -std::numeric_limits<double>::infinity();
  for (double a1 = alpha_lo; a1 <= alpha_hi + 1e-12; a1 += alpha_step) {
    for (double a2 = alpha_lo; a2 <= alpha_hi + 1e-12; a2 += alpha_step) {
      Eigen::VectorXd alpha = vec({a1, a2});
      bool feasible = true;
      for (const auto& pc : cs) {
        if (prob_leq_edgeworth(DirichletHyper{alpha}, pc.linear) < pc.eta) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      for (double t = theta_step; t < 1.0; t += theta_step) {
        Eigen::VectorXd theta = vec({t, 1.0 - t});
        best = std::max(best, joint_objective(counts, theta, alpha));
      }
    }
  }
  return best;
}

double polya_loglik(const std::vector<Eigen::VectorXd>& reps, const Eigen::VectorXd& alpha) {
  double ll = 0.0;
  for (const auto& c : reps) ll += log_multi_beta(alpha + c) - log_multi_beta(alpha);
  return ll;
}

double eb_grid_optimum(const std::vector<Eigen::VectorXd>& reps, double lo, double hi,
                       double step) {
  double best = -std::numeric_limits<double>::infinity();
  for (double a1 = lo; a1 <= hi + 1e-12; a1 += step) {
    for (double a2 = lo; a2 <= hi + 1e-12; a2 += step) {
      best = std::max(best, polya_loglik(reps, vec({a1, a2})));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("multinomial mle") {
  CHECK(mle_multinomial(MultinomialData(vec({3, 7}))) == vec({0.3, 0.7}));
  CHECK(mle_multinomial(MultinomialData(vec({0, 5}))) == vec({0.0, 1.0}));
  CHECK(mle_multinomial(MultinomialData(vec({1, 1, 2}))) == vec({0.25, 0.25, 0.5}));
  CHECK_THROWS_AS(mle_multinomial(MultinomialData(vec({0, 0}))), std::domain_error);
  CHECK_THROWS_AS(MultinomialData(vec({-1, 2})), std::invalid_argument);
}

TEST_CASE("constrained multinomial mle: active, inactive, oracle, infeasible") {
  std::vector<LinearConstraint> order = {ordering(0, 1, 2)};
  {
    Eigen::VectorXd theta = constrained_mle_multinomial(MultinomialData(vec({7, 3})), order);
    CHECK(theta[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(theta[1] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(theta[0] - theta[1] <= 1e-10);
  }
  {
    Eigen::VectorXd theta = constrained_mle_multinomial(MultinomialData(vec({3, 7})), order);
    CHECK(theta[0] == doctest::Approx(0.3).epsilon(1e-6));
  }
  {
    std::vector<LinearConstraint> chain = {ordering(0, 1, 3), ordering(1, 2, 3)};
    Eigen::VectorXd counts = vec({5, 3, 2});
    Eigen::VectorXd theta = constrained_mle_multinomial(MultinomialData(counts), chain);
    Eigen::VectorXd grid = oracles::simplex_grid_argmax(counts, chain, 1e-3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(theta[i] - grid[i]) <= 2e-3);
    for (const auto& c : chain) CHECK(c.slack(theta) >= -1e-10);
  }
  {
    Eigen::VectorXd e1 = vec({1.0, 0.0});
    std::vector<LinearConstraint> empty_region = {LinearConstraint(e1, 0.2),
                                                  LinearConstraint(-e1, -0.5)};
    CHECK_THROWS_AS(constrained_mle_multinomial(MultinomialData(vec({3, 7})), empty_region),
                    InfeasibleError);
  }
}

TEST_CASE("dirichlet map: fixed hyperparameters recover the posterior mode") {
  DirichletMapOptions opts;
  opts.alpha_box_lo = 2.0;
  opts.alpha_box_hi = 2.0; // pins alpha at (2,2)
  ConstraintSet none;
  EstimationResult r = map_dirichlet_multinomial(MultinomialData(vec({3, 7})), none, opts);
  CHECK(r.theta[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(r.theta[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
  CHECK(nondecreasing(r.objective_trace));
  CHECK(r.converged);
}

TEST_CASE("dirichlet map reaches the exhaustive grid optimum") {
  ConstraintSet cs;
  cs.add(ordering(0, 1, 2), 0.95); // P(theta_1 <= theta_2) >= 0.95

  DirichletMapOptions opts;
  opts.alpha_box_lo = 1.0;
  opts.alpha_box_hi = 20.0;
  Eigen::VectorXd counts = vec({2, 8});
  EstimationResult r = map_dirichlet_multinomial(MultinomialData(counts), cs, opts);

  double impl_obj = joint_objective(counts, r.theta, r.dirichlet_hyper->alpha);
  double grid_obj = map_grid_optimum(counts, cs, 1.0, 20.0, 0.25, 1e-3);
  CHECK(std::abs(impl_obj - grid_obj) <= 1e-2);
  CHECK(nondecreasing(r.objective_trace));
  for (double m : r.feasibility_margins) CHECK(m >= -1e-6);
}

TEST_CASE("dirichlet map shrugs off constraints that contradict plentiful data") {
  ConstraintSet wrong;
  wrong.add(ordering(1, 0, 2), 0.95); // P(theta_1 >= theta_2) >= 0.95

  Eigen::VectorXd counts = vec({40, 160}); // m = 200, mle (0.2, 0.8)
  EstimationResult r = map_dirichlet_multinomial(MultinomialData(counts), wrong);
  CHECK((r.theta - vec({0.2, 0.8})).lpNorm<1>() <= 0.1);
  for (double m : r.feasibility_margins) {
    CHECK(m >= -1e-6);
    CHECK(m <= 0.1); // the optimum leans on the feasibility boundary
  }
  CHECK(nondecreasing(r.objective_trace));
}

TEST_CASE("dirichlet map rejects unachievable feasibility") {
  ConstraintSet cs;
  // Requires prior mass 0.99 on theta_1 <= theta_2 with alpha pinned to a
  // symmetric box point, which gives exactly 1/2.
  cs.add(ordering(0, 1, 2), 0.99);
  DirichletMapOptions opts;
  opts.alpha_box_lo = 1.0;
  opts.alpha_box_hi = 1.0;
  opts.probe_samples = 50;
  CHECK_THROWS_AS(map_dirichlet_multinomial(MultinomialData(vec({3, 7})), cs, opts),
                  InfeasibleError);
}

TEST_CASE("empirical bayes: symmetry, grid optimum, constrained restriction") {
  {
    ConstraintSet none;
    EstimationResult r = eb_dirichlet_multinomial({vec({1, 1})}, none);
    REQUIRE(r.dirichlet_hyper.has_value());
    CHECK(std::abs(r.dirichlet_hyper->alpha[0] - r.dirichlet_hyper->alpha[1]) <= 1e-6);
  }

  std::vector<Eigen::VectorXd> reps = {vec({3, 7}), vec({2, 8}), vec({4, 6})};
  ConstraintSet none;
  DirichletMapOptions opts;
  opts.alpha_box_lo = 0.1;
  opts.alpha_box_hi = 50.0;
  EstimationResult free_fit = eb_dirichlet_multinomial(reps, none, opts);
  double impl_obj = polya_loglik(reps, free_fit.dirichlet_hyper->alpha);
  double grid_obj = eb_grid_optimum(reps, 0.1, 50.0, 0.25);
  CHECK(impl_obj >= grid_obj - 1e-2);
  CHECK(nondecreasing(free_fit.objective_trace));

  ConstraintSet cs;
  cs.add(ordering(0, 1, 2), 0.95);
  EstimationResult constrained = eb_dirichlet_multinomial(reps, cs, opts);
  for (double m : constrained.feasibility_margins) CHECK(m >= -1e-6);
  CHECK(polya_loglik(reps, constrained.dirichlet_hyper->alpha) <= impl_obj + 1e-9);
  // Predictive point: pooled counts smoothed by alpha.
  Eigen::VectorXd pooled = vec({9, 21});
  Eigen::VectorXd expect =
      (pooled + constrained.dirichlet_hyper->alpha) /
      (pooled.sum() + constrained.dirichlet_hyper->alpha.sum());
  CHECK((constrained.theta - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("gaussian means mle and weighted constrained mle") {
  GaussianMeansData d({vec({1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}),
                       vec({0.0, 0.0, 0.0, 0.0, 0.0})});
  CHECK(mle_gaussian_means(d) == vec({1.0, 0.0}));

  // Weighted projection onto theta_1 <= theta_2 pools the group means.
  Eigen::VectorXd theta = constrained_mle_gaussian_means(d, {ordering(0, 1, 2)});
  CHECK(theta[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(theta[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  Eigen::VectorXd e1 = vec({1.0, 0.0});
  CHECK_THROWS_AS(constrained_mle_gaussian_means(
                      d, {LinearConstraint(e1, 0.0), LinearConstraint(-e1, -1.0)}),
                  InfeasibleError);
}

TEST_CASE("gaussian means map: likelihood dominance and housekeeping") {
  RngHandle rng(4242);
  Eigen::VectorXd samples(500);
  for (int i = 0; i < 500; ++i) samples[i] = 0.7 + rng.normal();
  GaussianMeansData d({samples});

  ConstraintSet vacuous;
  vacuous.add(LinearConstraint(vec({1.0}), 1e6), 0.95);
  WishartHyperprior prior = WishartHyperprior::scaled_identity(0.5, 1);
  EstimationResult r = map_gaussian_means(d, vacuous, prior, CovarianceMode::full);
  CHECK(std::abs(r.theta[0] - samples.mean()) <= 0.05);
  CHECK(nondecreasing(r.objective_trace));
  for (double m : r.feasibility_margins) CHECK(m >= -1e-6);
  CHECK(r.converged);

  ConstraintSet low;
  low.add(LinearConstraint(vec({1.0}), 1.0), 0.4);
  CHECK_THROWS_AS(map_gaussian_means(d, low, prior, CovarianceMode::full),
                  std::invalid_argument);
}

TEST_CASE("gaussian means map under ordering constraints stays feasible and monotone") {
  RngHandle rng(515);
  std::vector<Eigen::VectorXd> groups(3);
  Eigen::VectorXd truth = vec({0.0, 0.5, 1.0});
  for (int j = 0; j < 3; ++j) {
    groups[j].resize(12);
    for (int i = 0; i < 12; ++i) groups[j][i] = truth[j] + rng.normal();
  }
  GaussianMeansData d(groups);
  ConstraintSet cs;
  cs.add(ordering(0, 1, 3), 0.95);
  cs.add(ordering(1, 2, 3), 0.95);

  for (CovarianceMode mode : {CovarianceMode::diagonal, CovarianceMode::full}) {
    EstimationResult r =
        map_gaussian_means(d, cs, WishartHyperprior::scaled_identity(0.1, 3), mode);
    CHECK(nondecreasing(r.objective_trace));
    for (double m : r.feasibility_margins) CHECK(m >= -1e-6);
    REQUIRE(r.gaussian_hyper.has_value());
    CHECK(r.gaussian_hyper->is_diagonal() == (mode == CovarianceMode::diagonal));
  }
}

TEST_CASE("ridge regression closed forms") {
  RngHandle rng(606);
  Eigen::MatrixXd raw(6, 3);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 3; ++j) raw(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(6, 3);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) y[i] = rng.normal();

  RegressionData ortho(q, y, 1.0);
  CHECK((ridge_regression(ortho, 0.0) - q.transpose() * y).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd x(3, 2);
  x << 1.0, 0.5, -0.3, 2.0, 0.7, -1.1;
  Eigen::VectorXd y3 = vec({0.2, -0.4, 1.3});
  RegressionData small(x, y3, 2.0);
  double ridge = 0.7;
  Eigen::MatrixXd lhs = x.transpose() * x + ridge * 2.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd oracle = lhs.inverse() * x.transpose() * y3;
  CHECK((ridge_regression(small, ridge) - oracle).cwiseAbs().maxCoeff() < 1e-8);

  Eigen::MatrixXd deficient(3, 2);
  deficient << 1.0, 2.0, 2.0, 4.0, -1.0, -2.0;
  RegressionData bad(deficient, y3, 1.0);
  CHECK_THROWS_AS(ridge_regression(bad, 0.0), NumericalError);
  CHECK_THROWS_AS(ridge_regression(small, -1.0), std::domain_error);
}

TEST_CASE("constrained ridge satisfies KKT at active constraints") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y = vec({-1.0, 1.0});
  RegressionData d(x, y, 1.0);
  std::vector<LinearConstraint> nonneg = {LinearConstraint(vec({-1.0, 0.0}), 0.0)}; // theta_1 >= 0

  Eigen::VectorXd theta = constrained_ridge(d, 0.5, nonneg);
  CHECK(std::abs(theta[0]) <= 1e-8);                       // active at zero
  CHECK(theta[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
  double grad0 = (theta[0] - y[0]) + 0.5 * theta[0];
  CHECK(grad0 >= -1e-8); // pushing further negative is blocked by the constraint

  // Unit-step gradient mapping residual below 1e-8.
  auto grad = [&](const Eigen::VectorXd& t) -> Eigen::VectorXd {
    return x.transpose() * (x * t - y) + 0.5 * t;
  };
  Eigen::VectorXd mapped = project_onto_halfspaces(theta - grad(theta), nonneg).point;
  CHECK((theta - mapped).lpNorm<Eigen::Infinity>() <= 1e-8);

  // Inactive constraints leave the estimate at the plain ridge solution.
  std::vector<LinearConstraint> slack_set = {LinearConstraint(vec({1.0, 0.0}), 10.0)};
  CHECK((constrained_ridge(d, 0.5, slack_set) - ridge_regression(d, 0.5))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
}

TEST_CASE("regression map: monotone, feasible, convergent") {
  RngHandle rng(77);
  int m = 30, p = 4;
  Eigen::MatrixXd x(m, p);
  Eigen::VectorXd beta = vec({-0.5, 0.25, 0.8, -0.1});
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    y[i] = x.row(i).dot(beta) + rng.normal();
  }
  RegressionData d(x, y, 1.0);

  ConstraintSet cs;
  cs.add(LinearConstraint(vec({1.0, 0.0, 0.0, 0.0}), 0.0), 0.95); // beta_1 <= 0
  cs.add(ordering(3, 2, 4), 0.95);                                // beta_4 <= beta_3

  for (CovarianceMode mode : {CovarianceMode::diagonal, CovarianceMode::full}) {
    EstimationResult r =
        map_regression(d, cs, WishartHyperprior::scaled_identity(0.1, p), mode);
    CHECK(nondecreasing(r.objective_trace));
    for (double v : r.feasibility_margins) CHECK(v >= -1e-6);
    CHECK(r.converged);
    CHECK(r.theta.allFinite());
  }
}

TEST_CASE("held-out selection is deterministic and prefers small values on ties") {
  RngHandle rng(88);
  int m = 25, p = 3;
  Eigen::MatrixXd x(m, p);
  Eigen::VectorXd beta = vec({0.4, -0.2, 0.9});
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    y[i] = x.row(i).dot(beta) + rng.normal();
  }

  RidgeSelection a = select_ridge(x, y, 1.0, {1.0, 0.1, 10.0, 0.001}, 0.2);
  RidgeSelection b = select_ridge(x, y, 1.0, {0.001, 0.1, 1.0, 10.0}, 0.2);
  CHECK(a.ridge == b.ridge); // grid order must not matter
  CHECK(a.theta == b.theta);

  // A duplicated grid entry ties with itself; the first (smallest) wins.
  RidgeSelection c = select_ridge(x, y, 1.0, {0.1, 0.1}, 0.2);
  CHECK(c.ridge == 0.1);

  ConstraintSet cs;
  cs.add(LinearConstraint(vec({0.0, 1.0, 0.0}), 0.0), 0.95);
  RegressionGrids grids;
  grids.sigma2 = {0.5, 1.0};
  grids.tau = {0.05, 0.2};
  RegressionMapSelection sel =
      map_regression_selected(x, y, cs, CovarianceMode::full, grids);
  CHECK(sel.result.theta.allFinite());
  CHECK((sel.sigma2 == 0.5 || sel.sigma2 == 1.0));
  CHECK((sel.tau == 0.05 || sel.tau == 0.2));
}
