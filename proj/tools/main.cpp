// probcon: chance-constrained prior estimation toolkit.
//
// Subcommands:
//   invert dirichlet | invert gaussian  -- constraint probability / membership
//   estimate                            -- fit an estimator to data files
//   experiment                          -- run a seeded synthetic study to CSV
//   oracle                              -- cross-check the probability evaluators
//
// Exit codes: 0 success, 1 usage error, 2 infeasibility, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "probcon/bregman.hpp"
#include "probcon/crosscheck.hpp"
#include "probcon/dirichlet.hpp"
#include "probcon/errors.hpp"
#include "probcon/estimation.hpp"
#include "probcon/gaussian.hpp"
#include "probcon/gaussian_means.hpp"
#include "probcon/harness.hpp"
#include "probcon/multinomial.hpp"
#include "probcon/regression.hpp"

namespace {

using nlohmann::json;

Eigen::VectorXd parse_vector(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) values.push_back(std::stod(tok));
  }
  if (values.empty()) throw CLI::ValidationError("empty vector argument");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd parse_square_matrix(const std::string& csv, Eigen::Index n) {
  Eigen::VectorXd flat = parse_vector(csv);
  if (flat.size() != n * n) {
    throw CLI::ValidationError("matrix needs " + std::to_string(n * n) +
                               " row-major entries, got " + std::to_string(flat.size()));
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = flat[r * n + c];
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

void emit(const json& payload, const std::string& out_path) {
  std::string text = payload.dump(2);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + out_path + "'");
    file << text << "\n";
  }
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json result_to_json(const probcon::EstimationResult& r) {
  json out;
  out["theta"] = to_std(r.theta);
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  out["objective_trace"] = r.objective_trace;
  out["feasibility_margins"] = r.feasibility_margins;
  if (r.exact_margins) out["exact_margins"] = *r.exact_margins;
  if (r.dirichlet_hyper) out["alpha"] = to_std(r.dirichlet_hyper->alpha);
  if (r.gaussian_hyper) {
    out["mu"] = to_std(r.gaussian_hyper->mu());
    out["sigma"] = matrix_to_json(r.gaussian_hyper->covariance());
  }
  return out;
}

struct InvertArgs {
  std::string alpha, mu, sigma, sigma_diag, a;
  double b = 0.0;
  std::optional<double> eta;
  std::string method = "exact";
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string config, out;
};

void load_invert_config(InvertArgs& args) {
  if (args.config.empty()) return;
  json j = json::parse(read_file(args.config));
  auto vec_str = [](const json& arr) {
    std::string s;
    for (const auto& v : arr) {
      if (!s.empty()) s += ',';
      s += std::to_string(v.get<double>());
    }
    return s;
  };
  if (j.contains("alpha") && args.alpha.empty()) args.alpha = vec_str(j["alpha"]);
  if (j.contains("mu") && args.mu.empty()) args.mu = vec_str(j["mu"]);
  if (j.contains("sigma_diag") && args.sigma_diag.empty()) args.sigma_diag = vec_str(j["sigma_diag"]);
  if (j.contains("sigma") && args.sigma.empty()) {
    std::string s;
    for (const auto& row : j["sigma"]) {
      for (const auto& v : row) {
        if (!s.empty()) s += ',';
        s += std::to_string(v.get<double>());
      }
    }
    args.sigma = s;
  }
  if (j.contains("a") && args.a.empty()) args.a = vec_str(j["a"]);
  if (j.contains("b")) args.b = j["b"].get<double>();
  if (j.contains("eta") && !args.eta) args.eta = j["eta"].get<double>();
}

int run_invert_dirichlet(InvertArgs& args) {
  load_invert_config(args);
  probcon::DirichletHyper hyper{parse_vector(args.alpha)};
  probcon::LinearConstraint c(parse_vector(args.a), args.b);

  json out;
  out["method"] = args.method;
  double prob;
  if (args.method == "exact") {
    prob = probcon::prob_leq_exact(hyper, c);
  } else if (args.method == "edgeworth1") {
    prob = probcon::prob_leq_edgeworth(hyper, c, probcon::EdgeworthOrder::first);
  } else if (args.method == "edgeworth2") {
    prob = probcon::prob_leq_edgeworth(hyper, c, probcon::EdgeworthOrder::second);
  } else if (args.method == "mc") {
    auto mc = probcon::prob_leq_montecarlo(hyper, c, args.samples,
                                           probcon::RngHandle(args.seed));
    prob = mc.estimate;
    out["std_err"] = mc.std_err;
  } else {
    throw CLI::ValidationError("unknown method '" + args.method + "'");
  }
  out["prob"] = prob;
  if (args.eta) out["member"] = prob >= *args.eta;
  emit(out, args.out);
  return 0;
}

int run_invert_gaussian(InvertArgs& args) {
  load_invert_config(args);
  Eigen::VectorXd mu = parse_vector(args.mu);
  probcon::GaussianHyper hyper =
      !args.sigma_diag.empty()
          ? probcon::GaussianHyper::diagonal(mu, parse_vector(args.sigma_diag))
          : probcon::GaussianHyper(mu, parse_square_matrix(args.sigma, mu.size()));
  probcon::LinearConstraint c(parse_vector(args.a), args.b);

  json out;
  out["prob"] = probcon::prob_leq(hyper, c);
  if (args.method == "mc") {
    auto mc = probcon::prob_leq_montecarlo(hyper, c, args.samples,
                                           probcon::RngHandle(args.seed));
    out["mc_prob"] = mc.estimate;
    out["std_err"] = mc.std_err;
  }
  if (args.eta) {
    double margin = probcon::soc_margin(hyper, probcon::ProbabilisticConstraint(c, *args.eta));
    out["margin"] = margin;
    out["member"] = margin >= 0.0;
  }
  emit(out, args.out);
  return 0;
}

struct EstimateArgs {
  std::string family, data_path, constraints_path, estimator, mode = "full", out;
  double ridge = 0.1;
  double tau = 0.1;
  std::uint64_t seed = 0;
  std::vector<double> alpha_box{0.5, 50.0};
};

int run_estimate(const EstimateArgs& args) {
  json data = json::parse(read_file(args.data_path));
  probcon::ConstraintSet cs;
  if (!args.constraints_path.empty()) {
    cs = probcon::constraint_set_from_json(read_file(args.constraints_path));
  }
  probcon::Family family = probcon::family_from_string(args.family);
  probcon::CovarianceMode mode = args.mode == "diag" ? probcon::CovarianceMode::diagonal
                                                     : probcon::CovarianceMode::full;
  json out;
  out["family"] = args.family;
  out["estimator"] = args.estimator;

  if (family == probcon::Family::multinomial) {
    std::vector<Eigen::VectorXd> replicates;
    if (data.contains("replicates")) {
      for (const auto& row : data["replicates"]) {
        auto v = row.get<std::vector<double>>();
        replicates.push_back(
            Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
      }
    } else {
      auto v = data.at("counts").get<std::vector<double>>();
      replicates.push_back(
          Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    Eigen::VectorXd pooled = replicates.front();
    for (std::size_t i = 1; i < replicates.size(); ++i) pooled += replicates[i];
    probcon::MultinomialData md(pooled);

    probcon::DirichletMapOptions opts;
    opts.alpha_box_lo = args.alpha_box.at(0);
    opts.alpha_box_hi = args.alpha_box.at(1);
    opts.probe_seed = args.seed;

    if (args.estimator == "mle") {
      out["theta"] = to_std(probcon::mle_multinomial(md));
    } else if (args.estimator == "constrained_mle") {
      out["theta"] = to_std(probcon::constrained_mle_multinomial(md, cs.linear_parts()));
    } else if (args.estimator == "map") {
      out.update(result_to_json(probcon::map_dirichlet_multinomial(md, cs, opts)));
    } else if (args.estimator == "eb") {
      out.update(result_to_json(probcon::eb_dirichlet_multinomial(replicates, cs, opts)));
    } else {
      throw CLI::ValidationError("unknown multinomial estimator '" + args.estimator + "'");
    }
  } else if (family == probcon::Family::gaussian_means) {
    std::vector<Eigen::VectorXd> groups;
    for (const auto& row : data.at("groups")) {
      auto v = row.get<std::vector<double>>();
      groups.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    probcon::GaussianMeansData gd(groups);
    if (args.estimator == "mle") {
      out["theta"] = to_std(probcon::mle_gaussian_means(gd));
    } else if (args.estimator == "constrained_mle") {
      out["theta"] = to_std(probcon::constrained_mle_gaussian_means(gd, cs.linear_parts()));
    } else if (args.estimator == "map") {
      auto prior = probcon::WishartHyperprior::scaled_identity(args.tau, gd.n_groups());
      out.update(result_to_json(probcon::map_gaussian_means(gd, cs, prior, mode)));
    } else {
      throw CLI::ValidationError("unknown gaussian_means estimator '" + args.estimator + "'");
    }
  } else {
    auto xm = data.at("X").get<std::vector<std::vector<double>>>();
    auto yv = data.at("y").get<std::vector<double>>();
    Eigen::MatrixXd X(xm.size(), xm.empty() ? 0 : xm.front().size());
    for (std::size_t r = 0; r < xm.size(); ++r) {
      for (std::size_t c = 0; c < xm[r].size(); ++c) {
        X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = xm[r][c];
      }
    }
    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    probcon::RegressionData rd(X, y, data.value("sigma2", 1.0));

    if (args.estimator == "ridge") {
      out["theta"] = to_std(probcon::ridge_regression(rd, args.ridge));
      out["ridge"] = args.ridge;
    } else if (args.estimator == "constrained_ridge") {
      out["theta"] = to_std(probcon::constrained_ridge(rd, args.ridge, cs.linear_parts()));
      out["ridge"] = args.ridge;
    } else if (args.estimator == "map") {
      auto prior = probcon::WishartHyperprior::scaled_identity(args.tau, rd.dimension());
      out.update(result_to_json(probcon::map_regression(rd, cs, prior, mode)));
    } else {
      throw CLI::ValidationError("unknown regression estimator '" + args.estimator + "'");
    }
  }
  emit(out, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic parameter constraint estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string method = "exact";
  std::string config;
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--jobs", jobs, "parallel workers for experiments");
  app.add_option("--method", method, "probability method: edgeworth1|edgeworth2|exact|mc");
  app.add_option("--config", config, "JSON config file");

  // invert
  auto* invert = app.add_subcommand("invert", "probability / membership of one constraint");
  invert->require_subcommand(1);
  InvertArgs inv;
  auto* dirichlet = invert->add_subcommand("dirichlet", "theta ~ Dir(alpha)");
  dirichlet->add_option("--alpha", inv.alpha, "concentrations, comma separated");
  dirichlet->add_option("--a", inv.a, "constraint coefficients");
  dirichlet->add_option("--b", inv.b, "constraint bound");
  double eta_val = -1.0;
  dirichlet->add_option("--eta", eta_val, "confidence for membership");
  dirichlet->add_option("--samples", inv.samples, "monte carlo sample count");

  auto* gaussian = invert->add_subcommand("gaussian", "theta ~ N(mu, Sigma)");
  gaussian->add_option("--mu", inv.mu, "mean, comma separated");
  gaussian->add_option("--sigma", inv.sigma, "covariance, row-major comma separated");
  gaussian->add_option("--sigma-diag", inv.sigma_diag, "diagonal covariance variances");
  gaussian->add_option("--a", inv.a, "constraint coefficients");
  gaussian->add_option("--b", inv.b, "constraint bound");
  gaussian->add_option("--eta", eta_val, "confidence for margin/membership");
  gaussian->add_option("--samples", inv.samples, "monte carlo sample count");

  // estimate
  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "fit an estimator to data files");
  estimate->add_option("--family", est.family, "multinomial|gaussian_means|regression")->required();
  estimate->add_option("--data", est.data_path, "data JSON file")->required();
  estimate->add_option("--constraints", est.constraints_path, "constraint JSON file");
  estimate->add_option("--estimator", est.estimator, "estimator name")->required();
  estimate->add_option("--mode", est.mode, "covariance mode: diag|full");
  estimate->add_option("--ridge", est.ridge, "ridge weight for ridge estimators");
  estimate->add_option("--tau", est.tau, "hyperprior scale Lambda = tau I");
  estimate->add_option("--alpha-box", est.alpha_box, "alpha box lo hi")->expected(2);

  // experiment
  std::string builtin_name, spec_path;
  auto* experiment = app.add_subcommand("experiment", "run a synthetic study to CSV");
  experiment->add_option("--builtin", builtin_name,
                         "multinomial|gaussian|regression|regression_noisy");
  experiment->add_option("--spec", spec_path, "experiment spec JSON file");

  // oracle
  std::string oracle_family = "all";
  int oracle_trials = 50;
  std::int64_t oracle_samples = 100000;
  auto* oracle = app.add_subcommand("oracle", "cross-check the probability evaluators");
  oracle->add_option("--family", oracle_family, "dirichlet|gaussian|all");
  oracle->add_option("--trials", oracle_trials, "random instances per family");
  oracle->add_option("--samples", oracle_samples, "monte carlo samples per instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 1;
  }

  try {
    inv.method = method;
    inv.seed = seed;
    inv.out = out_path;
    inv.config = config;
    if (eta_val > 0.0) inv.eta = eta_val;
    est.seed = seed;
    est.out = out_path;

    if (dirichlet->parsed()) return run_invert_dirichlet(inv);
    if (gaussian->parsed()) return run_invert_gaussian(inv);
    if (estimate->parsed()) return run_estimate(est);

    if (experiment->parsed()) {
      probcon::ExperimentSpec spec;
      if (!builtin_name.empty()) {
        spec = probcon::builtin_spec(builtin_name, seed);
      } else if (!spec_path.empty() || !config.empty()) {
        spec = probcon::experiment_spec_from_json(
            read_file(spec_path.empty() ? config : spec_path));
        if (seed != 0) spec.seed = seed;
      } else {
        std::cerr << "experiment: need --builtin or --spec/--config\n";
        return 1;
      }
      auto rows = probcon::run_experiment(spec, jobs);
      if (out_path.empty()) {
        std::cout << probcon::rows_to_csv(std::move(rows));
      } else {
        probcon::write_csv(std::move(rows), out_path);
      }
      return 0;
    }

    if (oracle->parsed()) {
      json summary;
      if (oracle_family == "dirichlet" || oracle_family == "all") {
        auto c = probcon::run_dirichlet_crosscheck(oracle_trials, oracle_samples, seed);
        std::cout << probcon::describe(c) << "\n";
        summary["dirichlet"] = {{"trials", c.trials},
                                {"mc_within_3se", c.mc_within_3se},
                                {"edgeworth2_within_0.02", c.edgeworth2_within},
                                {"max_edgeworth_gap", c.max_edgeworth_gap},
                                {"evaluator_failures", c.evaluator_failures}};
      }
      if (oracle_family == "gaussian" || oracle_family == "all") {
        auto c = probcon::run_gaussian_crosscheck(oracle_trials, oracle_samples, seed);
        std::cout << probcon::describe(c) << "\n";
        summary["gaussian"] = {{"trials", c.trials},
                               {"sign_mismatches", c.sign_mismatches},
                               {"max_boundary_gap", c.max_boundary_gap},
                               {"mc_within_3se", c.mc_within_3se},
                               {"mc_trials", c.mc_trials}};
      }
      if (!out_path.empty()) emit(summary, out_path);
      return 0;
    }

    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const probcon::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const probcon::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const probcon::DecompositionError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const probcon::IntegrationError& e) {
    std::cerr << "numerical failure at t=" << e.abscissa() << ": " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
