#include "probcon/multinomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "probcon/errors.hpp"
#include "probcon/projection.hpp"
#include "probcon/special.hpp"

namespace probcon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::VectorXd clamp_to_box(Eigen::VectorXd v, double lo, double hi) {
  return v.cwiseMax(lo).cwiseMin(hi);
}

double dirichlet_probability(const Eigen::VectorXd& alpha, const ProbabilisticConstraint& pc,
                             InversionMethod method) {
  DirichletHyper h{alpha};
  switch (method) {
    case InversionMethod::edgeworth1:
      return prob_leq_edgeworth(h, pc.linear, EdgeworthOrder::first);
    case InversionMethod::exact:
      return prob_leq_exact(h, pc.linear);
    default:
      return prob_leq_edgeworth(h, pc.linear, EdgeworthOrder::second);
  }
}

std::vector<double> feasibility_margins(const Eigen::VectorXd& alpha, const ConstraintSet& cs,
                                        InversionMethod method) {
  std::vector<double> margins;
  margins.reserve(cs.size());
  for (const auto& pc : cs) {
    margins.push_back(dirichlet_probability(alpha, pc, method) - pc.eta);
  }
  return margins;
}

double worst_margin(const std::vector<double>& margins) {
  double worst = std::numeric_limits<double>::infinity();
  for (double m : margins) worst = std::min(worst, m);
  return margins.empty() ? 0.0 : worst;
}

/// Penalty-guided ascent of a smooth objective over the alpha box subject to
/// the hyperparameter feasible sets. Committed iterates are always feasible
/// and never lower the objective; the penalty weight doubles whenever a
/// sweep fails to make progress. Search directions come from central finite
/// differences of the penalized objective unless an analytic gradient of the
/// unpenalized part is supplied.
class FeasibleAlphaAscent {
 public:
  FeasibleAlphaAscent(const ConstraintSet& cs, const DirichletMapOptions& opts,
                      std::function<double(const Eigen::VectorXd&)> objective,
                      std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient = {})
      : cs_(cs), opts_(opts), objective_(std::move(objective)),
        gradient_(std::move(gradient)) {}

  bool feasible(const Eigen::VectorXd& alpha) const {
    return worst_margin(feasibility_margins(alpha, cs_, opts_.feasibility_method)) >= -1e-12;
  }

  double penalty(const Eigen::VectorXd& alpha) const {
    double p = 0.0;
    for (const auto& pc : cs_) {
      double gap = std::max(0.0, pc.eta - dirichlet_probability(alpha, pc, opts_.feasibility_method));
      p += gap * gap;
    }
    return p;
  }

  /// Full optimization from one feasible start: sweeps of penalized ascent
  /// with feasibility restoration, stopping after a few stalled sweeps.
  /// trace receives the committed objective value after every sweep.
  Eigen::VectorXd optimize(Eigen::VectorXd alpha, std::vector<double>* trace,
                           int* sweeps_used) const {
    double weight = 10.0;
    double step = 0.5;
    const double step_cap = std::max(1.0, opts_.alpha_box_hi - opts_.alpha_box_lo);
    double f = objective_(alpha);
    if (trace) trace->push_back(f);

    int stalls = 0;
    int sweep = 0;
    for (; sweep < opts_.max_sweeps && stalls < 3; ++sweep) {
      Eigen::VectorXd sweep_start = alpha;
      auto penalized = [&](const Eigen::VectorXd& a) {
        return objective_(a) - weight * penalty(a);
      };
      double fp = penalized(alpha);

      for (int it = 0; it < opts_.alpha_steps_per_sweep; ++it) {
        Eigen::VectorXd dir = direction(alpha, weight, penalized);
        double dir_norm = dir.norm();
        if (dir_norm < 1e-14) break;

        bool stepped = false;
        double t = step;
        for (int bt = 0; bt < 30; ++bt) {
          Eigen::VectorXd cand =
              clamp_to_box(alpha + (t / dir_norm) * dir, opts_.alpha_box_lo, opts_.alpha_box_hi);
          double fp_cand = penalized(cand);
          if (fp_cand > fp + 1e-14) {
            alpha = std::move(cand);
            fp = fp_cand;
            step = std::min(t * 1.5, step_cap);
            stepped = true;
            break;
          }
          t *= 0.5;
        }
        if (!stepped) break;
      }

      // Commit only a feasible point that improves the true objective.
      Eigen::VectorXd committed = alpha;
      if (!feasible(committed)) {
        double t = 1.0;
        while (t > 1e-12) {
          Eigen::VectorXd mid = sweep_start + t * (alpha - sweep_start);
          if (feasible(mid)) {
            committed = std::move(mid);
            break;
          }
          t *= 0.5;
        }
        if (t <= 1e-12) committed = sweep_start;
      }
      double f_committed = objective_(committed);
      if (f_committed > f + opts_.objective_tol) {
        alpha = std::move(committed);
        f = f_committed;
        stalls = 0;
      } else if (f_committed > f) {
        alpha = std::move(committed);
        f = f_committed;
        ++stalls;
        weight = std::min(weight * 2.0, 1e12);
      } else {
        alpha = std::move(sweep_start);
        ++stalls;
        weight = std::min(weight * 2.0, 1e12);
      }
      if (trace) trace->push_back(f);
    }
    if (sweeps_used) *sweeps_used = sweep;
    return alpha;
  }

  /// Log-uniform probe of the box keeping up to k diverse feasible starts,
  /// best objective first. Throws InfeasibleError with diagnostics when
  /// nothing feasible turns up.
  std::vector<Eigen::VectorXd> probe_starts(int n, RngHandle rng, int k) const {
    std::vector<std::pair<double, Eigen::VectorXd>> feasible_probes;
    double best_margin = kNegInf;
    Eigen::VectorXd center = Eigen::VectorXd::Constant(
        n, std::sqrt(opts_.alpha_box_lo * opts_.alpha_box_hi));

    for (int s = 0; s <= opts_.probe_samples; ++s) {
      Eigen::VectorXd cand(n);
      if (s == 0) {
        cand = center;
      } else {
        for (int i = 0; i < n; ++i) {
          double u = rng.uniform();
          cand[i] = opts_.alpha_box_lo *
                    std::pow(opts_.alpha_box_hi / opts_.alpha_box_lo, u);
        }
      }
      double margin = worst_margin(feasibility_margins(cand, cs_, opts_.feasibility_method));
      best_margin = std::max(best_margin, margin);
      if (margin >= 0.0) {
        feasible_probes.emplace_back(objective_(cand), std::move(cand));
      }
    }
    if (feasible_probes.empty()) {
      std::ostringstream msg;
      msg << "no feasible alpha found after " << (opts_.probe_samples + 1)
          << " probes of [" << opts_.alpha_box_lo << ", " << opts_.alpha_box_hi
          << "]^" << n << "; best worst-margin " << best_margin;
      throw InfeasibleError(msg.str());
    }
    std::sort(feasible_probes.begin(), feasible_probes.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Eigen::VectorXd> starts;
    for (auto& [f, cand] : feasible_probes) {
      bool close = false;
      for (const auto& kept : starts) {
        if ((cand - kept).lpNorm<Eigen::Infinity>() < 0.5) {
          close = true;
          break;
        }
      }
      if (!close) starts.push_back(std::move(cand));
      if (static_cast<int>(starts.size()) >= k) break;
    }
    return starts;
  }

 private:
  Eigen::VectorXd direction(const Eigen::VectorXd& alpha, double weight,
                            const std::function<double(const Eigen::VectorXd&)>& penalized) const {
    Eigen::VectorXd g(alpha.size());
    if (gradient_) {
      // Analytic gradient of the objective, finite differences for the penalty.
      g = gradient_(alpha);
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        double h = 1e-4 * (1.0 + std::abs(alpha[i]));
        Eigen::VectorXd up = alpha, dn = alpha;
        up[i] += h;
        dn[i] = std::max(dn[i] - h, 1e-10);
        g[i] -= weight * (penalty(up) - penalty(dn)) / (up[i] - dn[i]);
      }
    } else {
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        double h = 1e-4 * (1.0 + std::abs(alpha[i]));
        Eigen::VectorXd up = alpha, dn = alpha;
        up[i] += h;
        dn[i] = std::max(dn[i] - h, 1e-10);
        g[i] = (penalized(up) - penalized(dn)) / (up[i] - dn[i]);
      }
    }
    return g;
  }

  const ConstraintSet& cs_;
  const DirichletMapOptions& opts_;
  std::function<double(const Eigen::VectorXd&)> objective_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient_;
};

Eigen::VectorXd floored_simplex_point(Eigen::VectorXd weights, double floor) {
  Eigen::VectorXd w = weights.cwiseMax(floor);
  return w / w.sum();
}

double multinomial_loglik(const Eigen::VectorXd& counts, const Eigen::VectorXd& theta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0.0) continue;
    if (theta[i] <= 0.0) return kNegInf;
    ll += counts[i] * std::log(theta[i]);
  }
  return ll;
}

}  // namespace

MultinomialData::MultinomialData(Eigen::VectorXd c) : counts(std::move(c)) {
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0.0 || !std::isfinite(counts[i])) {
      throw std::invalid_argument("MultinomialData: counts must be nonnegative and finite");
    }
  }
}

Eigen::VectorXd mle_multinomial(const MultinomialData& d) {
  double total = d.total();
  if (!(total >= 1.0)) {
    throw std::domain_error("mle_multinomial: total count must be >= 1");
  }
  return d.counts / total;
}

Eigen::VectorXd constrained_mle_multinomial(const MultinomialData& d,
                                            const std::vector<LinearConstraint>& hard) {
  double total = d.total();
  if (!(total >= 1.0)) {
    throw std::domain_error("constrained_mle_multinomial: total count must be >= 1");
  }
  const Eigen::Index n = d.counts.size();
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

  DykstraResult start = project_onto_constrained_simplex(uniform, hard, 5000, 1e-12);
  if (!start.feasible) {
    throw InfeasibleError("constrained_mle_multinomial: empty feasible region "
                          "(projection violation " + std::to_string(start.max_violation) + ")");
  }

  Eigen::VectorXd theta = start.point;
  double obj = multinomial_loglik(d.counts, theta);
  double step = 0.1;
  const double grad_cap = 1e12;

  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXd grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      grad[i] = d.counts[i] > 0.0 ? std::min(d.counts[i] / std::max(theta[i], 1e-300), grad_cap) : 0.0;
    }
    double gnorm = grad.norm();
    if (gnorm == 0.0) break;

    bool stepped = false;
    double t = step;
    for (int bt = 0; bt < 50; ++bt) {
      Eigen::VectorXd cand =
          project_onto_constrained_simplex(theta + (t / gnorm) * grad, hard, 3000, 1e-13).point;
      double cand_obj = multinomial_loglik(d.counts, cand);
      if (cand_obj > obj + 1e-15) {
        double moved = (cand - theta).norm();
        theta = std::move(cand);
        obj = cand_obj;
        step = std::min(t * 1.5, 1.0);
        stepped = true;
        if (moved < 1e-13) it = 5000; // converged in position
        break;
      }
      t *= 0.5;
    }
    if (!stepped) break;
  }

  // Final feasibility polish.
  DykstraResult polish = project_onto_constrained_simplex(theta, hard, 10000, 1e-14);
  if (polish.feasible && multinomial_loglik(d.counts, polish.point) >= obj - 1e-9) {
    theta = polish.point;
  }
  return theta;
}

EstimationResult map_dirichlet_multinomial(const MultinomialData& d, const ConstraintSet& cs,
                                           const DirichletMapOptions& opts) {
  double total = d.total();
  if (!(total >= 1.0)) {
    throw std::domain_error("map_dirichlet_multinomial: total count must be >= 1");
  }
  if (!cs.empty() && cs.dimension() != d.dimension()) {
    throw std::invalid_argument("map_dirichlet_multinomial: constraint dimension mismatch");
  }
  const Eigen::Index n = d.counts.size();

  // The theta step has a closed form given alpha (the clamped posterior
  // mode), so the joint maximization reduces to ascent of the profiled
  // objective over the feasible alpha region.
  auto theta_of = [&](const Eigen::VectorXd& alpha) {
    return floored_simplex_point(d.counts + alpha - Eigen::VectorXd::Ones(n), opts.theta_floor);
  };
  auto profile = [&](const Eigen::VectorXd& alpha) {
    Eigen::VectorXd theta = theta_of(alpha);
    return multinomial_loglik(d.counts, theta) + log_dirichlet_pdf(theta, alpha);
  };

  FeasibleAlphaAscent ascent(cs, opts, profile);
  std::vector<Eigen::VectorXd> starts;
  if (cs.empty()) {
    starts.push_back(
        clamp_to_box(Eigen::VectorXd::Constant(n, 1.0), opts.alpha_box_lo, opts.alpha_box_hi));
  } else {
    starts = ascent.probe_starts(static_cast<int>(n),
                                 RngHandle(opts.probe_seed).derive("alpha-probe"),
                                 opts.ascent_starts);
  }

  EstimationResult result;
  Eigen::VectorXd alpha;
  double best = kNegInf;
  for (const auto& start : starts) {
    std::vector<double> trace;
    int sweeps = 0;
    Eigen::VectorXd cand = ascent.optimize(start, &trace, &sweeps);
    double f = profile(cand);
    if (f > best) {
      best = f;
      alpha = std::move(cand);
      result.objective_trace = std::move(trace);
      result.iterations = sweeps;
    }
  }
  result.converged = result.iterations < opts.max_sweeps;

  result.theta = theta_of(alpha);
  result.dirichlet_hyper = DirichletHyper{alpha};
  result.feasibility_margins = feasibility_margins(alpha, cs, opts.feasibility_method);
  if (opts.verify_exact && !cs.empty()) {
    result.exact_margins = feasibility_margins(alpha, cs, InversionMethod::exact);
  }
  return result;
}

EstimationResult eb_dirichlet_multinomial(const std::vector<Eigen::VectorXd>& replicates,
                                          const ConstraintSet& cs,
                                          const DirichletMapOptions& opts) {
  if (replicates.empty()) {
    throw std::domain_error("eb_dirichlet_multinomial: at least one replicate required");
  }
  const Eigen::Index n = replicates.front().size();
  for (const auto& c : replicates) {
    if (c.size() != n) {
      throw std::invalid_argument("eb_dirichlet_multinomial: replicate dimension mismatch");
    }
  }
  if (!cs.empty() && cs.dimension() != n) {
    throw std::invalid_argument("eb_dirichlet_multinomial: constraint dimension mismatch");
  }

  // Summed Dirichlet-multinomial (Polya) marginal log-likelihood.
  auto polya = [&](const Eigen::VectorXd& alpha) {
    double ll = 0.0;
    for (const auto& c : replicates) {
      ll += log_multi_beta(alpha + c) - log_multi_beta(alpha);
    }
    return ll;
  };
  auto polya_grad = [&](const Eigen::VectorXd& alpha) {
    double a_sum = alpha.sum();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (const auto& c : replicates) {
      double m = c.sum();
      double common = digamma(a_sum) - digamma(a_sum + m);
      for (Eigen::Index i = 0; i < n; ++i) {
        g[i] += digamma(alpha[i] + c[i]) - digamma(alpha[i]) + common;
      }
    }
    return g;
  };

  FeasibleAlphaAscent ascent(cs, opts, polya, polya_grad);
  std::vector<Eigen::VectorXd> starts;
  if (cs.empty()) {
    starts.push_back(
        clamp_to_box(Eigen::VectorXd::Constant(n, 1.0), opts.alpha_box_lo, opts.alpha_box_hi));
  } else {
    starts = ascent.probe_starts(static_cast<int>(n),
                                 RngHandle(opts.probe_seed).derive("alpha-probe"),
                                 opts.ascent_starts);
  }

  EstimationResult result;
  Eigen::VectorXd alpha;
  double best = kNegInf;
  for (const auto& start : starts) {
    std::vector<double> trace;
    int sweeps = 0;
    Eigen::VectorXd cand = ascent.optimize(start, &trace, &sweeps);
    double f = polya(cand);
    if (f > best) {
      best = f;
      alpha = std::move(cand);
      result.objective_trace = std::move(trace);
      result.iterations = sweeps;
    }
  }
  result.converged = result.iterations < opts.max_sweeps;

  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(n);
  for (const auto& c : replicates) pooled += c;
  Eigen::VectorXd posterior = pooled + alpha;
  result.theta = posterior / posterior.sum();
  result.dirichlet_hyper = DirichletHyper{alpha};
  result.feasibility_margins = feasibility_margins(alpha, cs, opts.feasibility_method);
  if (opts.verify_exact && !cs.empty()) {
    result.exact_margins = feasibility_margins(alpha, cs, InversionMethod::exact);
  }
  return result;
}

}  // namespace probcon
