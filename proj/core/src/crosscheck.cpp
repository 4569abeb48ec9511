#include "probcon/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "probcon/dirichlet.hpp"
#include "probcon/gaussian.hpp"
#include "probcon/rng.hpp"
#include "probcon/special.hpp"

namespace probcon {

namespace {

// Random instance with the bound placed a bounded number of standard
// deviations from the prior mean of a'theta, so the probability stays where
// a finite-sample check can resolve it (a bound far outside the realizable
// range pins the probability to 0/1 and the binomial standard error to zero).
struct DirichletInstance {
  DirichletHyper hyper;
  LinearConstraint constraint;
};

DirichletInstance draw_dirichlet_instance(RngHandle& rng) {
  int n = 2 + static_cast<int>(rng.uniform() * 5.0); // 2..6
  Eigen::VectorXd alpha(n), a(n);
  for (int i = 0; i < n; ++i) {
    alpha[i] = rng.uniform(0.5, 10.0);
    a[i] = rng.uniform(-1.0, 1.0);
  }
  DirichletHyper hyper{alpha};
  double total = alpha.sum();
  Eigen::VectorXd mean = alpha / total;
  // Closed-form moments of a'theta under Dir(alpha).
  double m1 = a.dot(mean);
  double second = (a.array().square() * mean.array()).sum();
  double sd = std::sqrt(std::max((second - m1 * m1) / (total + 1.0), 1e-30));
  double b = m1 + sd * rng.uniform(-2.8, 2.8);
  return {std::move(hyper), LinearConstraint(std::move(a), b)};
}

}  // namespace

DirichletCrosscheck run_dirichlet_crosscheck(int trials, std::int64_t mc_samples,
                                             std::uint64_t seed) {
  DirichletCrosscheck out;
  out.trials = trials;
  RngHandle gen = RngHandle(seed).derive("dirichlet-instances");

  for (int t = 0; t < trials; ++t) {
    DirichletInstance inst = draw_dirichlet_instance(gen);
    double exact, e2;
    MonteCarloEstimate mc;
    try {
      exact = prob_leq_exact(inst.hyper, inst.constraint);
      e2 = prob_leq_edgeworth(inst.hyper, inst.constraint, EdgeworthOrder::second);
      mc = prob_leq_montecarlo(inst.hyper, inst.constraint, mc_samples,
                               gen.derive("mc-" + std::to_string(t)));
    } catch (const std::exception&) {
      ++out.evaluator_failures;
      continue;
    }

    double mc_gap = std::abs(exact - mc.estimate);
    if (mc_gap <= 3.0 * mc.std_err) ++out.mc_within_3se;
    if (mc.std_err > 0.0) {
      out.max_mc_gap_se = std::max(out.max_mc_gap_se, mc_gap / mc.std_err);
    } else if (mc_gap > 0.0) {
      out.max_mc_gap_se = std::numeric_limits<double>::infinity();
    }

    double eg = std::abs(e2 - exact);
    if (eg <= 0.02) ++out.edgeworth2_within;
    out.max_edgeworth_gap = std::max(out.max_edgeworth_gap, eg);
  }
  return out;
}

GaussianCrosscheck run_gaussian_crosscheck(int trials, std::int64_t mc_samples,
                                           std::uint64_t seed) {
  GaussianCrosscheck out;
  out.trials = trials;
  RngHandle gen = RngHandle(seed).derive("gaussian-instances");

  for (int t = 0; t < trials; ++t) {
    int n = 2 + static_cast<int>(gen.uniform() * 5.0);
    Eigen::VectorXd mu(n), a(n);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      mu[i] = gen.uniform(-2.0, 2.0);
      a[i] = gen.uniform(-1.0, 1.0);
      for (int j = 0; j < n; ++j) m(i, j) = gen.normal();
    }
    if ((a.array() == 0.0).all()) a[0] = 1.0;
    Eigen::MatrixXd sigma = m * m.transpose() / static_cast<double>(n)
        + 0.1 * Eigen::MatrixXd::Identity(n, n);
    GaussianHyper hyper(mu, sigma);

    double sd = std::sqrt(hyper.quad_form(a));
    double eta = gen.uniform(0.05, 0.95);
    double b = a.dot(mu) + sd * gen.uniform(-3.0, 3.0);
    LinearConstraint lc(a, b);
    ProbabilisticConstraint pc(lc, eta);

    double margin = soc_margin(hyper, pc);
    double p = prob_leq(hyper, lc);
    if (std::abs(margin) > 1e-12 && ((margin >= 0.0) != (p >= eta))) {
      ++out.sign_mismatches;
    }

    // Boundary construction: b chosen so the margin vanishes.
    double b_boundary = a.dot(mu) + std_normal_quantile(eta) * sd;
    LinearConstraint boundary(a, b_boundary);
    ++out.boundary_checks;
    out.max_boundary_gap =
        std::max(out.max_boundary_gap, std::abs(prob_leq(hyper, boundary) - eta));

    if (t < trials / 2) { // sampling agreement on half the suite
      MonteCarloEstimate mc = prob_leq_montecarlo(hyper, lc, mc_samples,
                                                  gen.derive("mc-" + std::to_string(t)));
      ++out.mc_trials;
      double se = std::max(mc.std_err, 1e-12);
      if (std::abs(p - mc.estimate) <= 3.0 * se) ++out.mc_within_3se;
    }
  }
  return out;
}

std::string describe(const DirichletCrosscheck& c) {
  std::ostringstream os;
  os << "dirichlet crosscheck: " << c.trials << " instances; "
     << c.mc_within_3se << " within 3 std errors of monte carlo (worst gap "
     << c.max_mc_gap_se << " se); " << c.edgeworth2_within
     << " with |edgeworth2 - exact| <= 0.02 (worst " << c.max_edgeworth_gap << ")";
  if (c.evaluator_failures > 0) os << "; " << c.evaluator_failures << " evaluator failures";
  return os.str();
}

std::string describe(const GaussianCrosscheck& c) {
  std::ostringstream os;
  os << "gaussian crosscheck: " << c.trials << " instances; "
     << c.sign_mismatches << " margin/probability sign mismatches; boundary |prob-eta| worst "
     << c.max_boundary_gap << "; monte carlo within 3 se on " << c.mc_within_3se
     << "/" << c.mc_trials;
  return os.str();
}

}  // namespace probcon
