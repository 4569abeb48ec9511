#include "probcon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "probcon/errors.hpp"
#include "probcon/gaussian_means.hpp"

namespace probcon {

std::string to_string(Family f) {
  switch (f) {
    case Family::multinomial: return "multinomial";
    case Family::gaussian_means: return "gaussian_means";
    case Family::regression: return "regression";
  }
  return "unknown";
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::correct: return "correct";
    case Scenario::incorrect: return "incorrect";
    case Scenario::noisy: return "noisy";
    case Scenario::custom: return "custom";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  if (s == "multinomial") return Family::multinomial;
  if (s == "gaussian_means" || s == "gaussian") return Family::gaussian_means;
  if (s == "regression") return Family::regression;
  throw std::invalid_argument("unknown family '" + s + "'");
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "correct") return Scenario::correct;
  if (s == "incorrect") return Scenario::incorrect;
  if (s == "noisy") return Scenario::noisy;
  if (s == "custom") return Scenario::custom;
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

namespace {

const std::vector<std::string>& known_estimators(Family f) {
  static const std::vector<std::string> multinomial{"mle", "constrained_mle", "eb", "map"};
  static const std::vector<std::string> gaussian{"mle", "constrained_mle", "map_diag", "map_full"};
  static const std::vector<std::string> regression{"ridge", "constrained_ridge", "map_diag",
                                                   "map_full"};
  switch (f) {
    case Family::multinomial: return multinomial;
    case Family::gaussian_means: return gaussian;
    default: return regression;
  }
}

}  // namespace

void ExperimentSpec::validate() const {
  if (n_replicates < 1) throw std::invalid_argument("ExperimentSpec: n_replicates must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("ExperimentSpec: eta must lie in (0,1)");
  if (train_sizes.empty()) throw std::invalid_argument("ExperimentSpec: no train sizes");
  for (int t : train_sizes) {
    if (t < 1) throw std::invalid_argument("ExperimentSpec: train sizes must be positive");
  }
  if (test_size < 1) throw std::invalid_argument("ExperimentSpec: test_size must be >= 1");
  if (scenarios.empty()) throw std::invalid_argument("ExperimentSpec: no scenarios");
  if (estimators.empty()) throw std::invalid_argument("ExperimentSpec: no estimators");
  const auto& known = known_estimators(family);
  for (const auto& e : estimators) {
    if (std::find(known.begin(), known.end(), e) == known.end()) {
      throw std::invalid_argument("ExperimentSpec: estimator '" + e + "' unknown for family " +
                                  to_string(family));
    }
  }
  if (true_params.size() == 0) throw std::invalid_argument("ExperimentSpec: missing true_params");
  if (family == Family::multinomial) {
    if (std::abs(true_params.sum() - 1.0) > 1e-9 || true_params.minCoeff() < 0.0) {
      throw std::invalid_argument("ExperimentSpec: multinomial truth must be a simplex point");
    }
  }
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw std::invalid_argument("ExperimentSpec: flip_fraction must lie in [0,1]");
  }
}

ExperimentSpec builtin_multinomial_spec() {
  ExperimentSpec spec;
  spec.family = Family::multinomial;
  spec.true_params = Eigen::VectorXd(5);
  spec.true_params << 1.0 / 12.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 4.0, 1.0 / 3.0;
  spec.eta = 0.95;
  for (int i : {0, 1, 2}) {
    for (int j : {3, 4}) {
      spec.correct_constraints.add(ordering(i, j, 5), spec.eta);   // theta_i <= theta_j
      spec.incorrect_constraints.add(ordering(j, i, 5), spec.eta); // theta_i >= theta_j
    }
  }
  spec.train_sizes = {20, 30, 50};
  spec.test_size = 2000;
  spec.estimators = {"mle", "constrained_mle", "eb", "map"};
  return spec;
}

ExperimentSpec builtin_gaussian_spec() {
  ExperimentSpec spec;
  spec.family = Family::gaussian_means;
  spec.true_params = Eigen::VectorXd(3);
  spec.true_params << 0.0, 0.5, 1.0;
  spec.eta = 0.95;
  spec.correct_constraints.add(ordering(0, 1, 3), spec.eta);
  spec.correct_constraints.add(ordering(1, 2, 3), spec.eta);
  {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(3);
    a[0] = -1.0; // theta_1 >= 0
    spec.correct_constraints.add(LinearConstraint(a, 0.0), spec.eta);
  }
  {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(3);
    a[2] = 1.0; // theta_3 <= 1
    spec.correct_constraints.add(LinearConstraint(a, 1.0), spec.eta);
  }
  spec.incorrect_constraints.add(ordering(1, 0, 3), spec.eta); // theta_1 >= theta_2
  spec.incorrect_constraints.add(ordering(2, 1, 3), spec.eta); // theta_2 >= theta_3
  spec.train_sizes = {20, 30, 50};
  spec.test_size = 200; // per group
  spec.estimators = {"mle", "constrained_mle", "map_diag", "map_full"};
  return spec;
}

ExperimentSpec builtin_regression_spec(RngHandle rng) {
  ExperimentSpec spec;
  spec.family = Family::regression;
  const int p = 10;
  spec.true_params = Eigen::VectorXd(p);
  for (int i = 0; i < 5; ++i) spec.true_params[i] = rng.uniform(-1.0, 0.0);
  for (int i = 5; i < p; ++i) spec.true_params[i] = rng.uniform(0.0, 1.0);
  spec.eta = 0.95;

  auto add_pair = [&](int k) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
    a[k] = 1.0; // beta_k <= 0
    spec.correct_constraints.add(LinearConstraint(a, 0.0), spec.eta);
    spec.incorrect_constraints.add(LinearConstraint(-a, 0.0), spec.eta);
  };
  for (int k : {0, 2, 4}) add_pair(k);
  for (int k : {5, 7, 9}) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
    a[k] = -1.0; // beta_k >= 0
    spec.correct_constraints.add(LinearConstraint(a, 0.0), spec.eta);
    spec.incorrect_constraints.add(LinearConstraint(-a, 0.0), spec.eta);
  }
  for (int i : {1, 3}) {
    for (int j : {6, 8}) {
      spec.correct_constraints.add(ordering(i, j, p), spec.eta);   // beta_i <= beta_j
      spec.incorrect_constraints.add(ordering(j, i, p), spec.eta); // beta_i >= beta_j
    }
  }

  spec.train_sizes = {20};
  spec.test_size = 500;
  spec.estimators = {"ridge", "constrained_ridge", "map_diag", "map_full"};
  return spec;
}

ExperimentSpec builtin_noisy_regression_spec(RngHandle rng, double flip_fraction) {
  ExperimentSpec spec = builtin_regression_spec(std::move(rng));
  spec.scenarios = {Scenario::noisy};
  spec.flip_fraction = flip_fraction;
  return spec;
}

ExperimentSpec builtin_spec(const std::string& name, std::uint64_t seed) {
  ExperimentSpec spec;
  if (name == "multinomial") {
    spec = builtin_multinomial_spec();
  } else if (name == "gaussian" || name == "gaussian_means") {
    spec = builtin_gaussian_spec();
  } else if (name == "regression") {
    spec = builtin_regression_spec(RngHandle(seed).derive("beta"));
  } else if (name == "regression_noisy") {
    spec = builtin_noisy_regression_spec(RngHandle(seed).derive("beta"));
  } else {
    throw std::invalid_argument("unknown builtin experiment '" + name + "'");
  }
  spec.seed = seed;
  return spec;
}

ExperimentSpec experiment_spec_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentSpec spec;
  spec.family = family_from_string(j.at("family").get<std::string>());
  spec.seed = j.value("seed", 0ULL);
  spec.eta = j.value("eta", 0.95);

  if (j.contains("true_params")) {
    auto v = j.at("true_params").get<std::vector<double>>();
    spec.true_params = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  } else if (spec.family == Family::regression) {
    ExperimentSpec drawn = builtin_regression_spec(RngHandle(spec.seed).derive("beta"));
    spec.true_params = drawn.true_params;
    spec.correct_constraints = drawn.correct_constraints;
    spec.incorrect_constraints = drawn.incorrect_constraints;
  } else {
    throw std::invalid_argument("experiment spec: true_params required for this family");
  }

  auto load_set = [&](const char* key) {
    return constraint_set_from_json(j.at(key).dump());
  };
  if (j.contains("correct_constraints")) spec.correct_constraints = load_set("correct_constraints");
  if (j.contains("incorrect_constraints")) {
    spec.incorrect_constraints = load_set("incorrect_constraints");
  }
  if (j.contains("constraints")) spec.custom_constraints = load_set("constraints");

  if (j.contains("scenarios")) {
    spec.scenarios.clear();
    for (const auto& s : j.at("scenarios")) {
      spec.scenarios.push_back(scenario_from_string(s.get<std::string>()));
    }
  } else if (!spec.custom_constraints.empty()) {
    spec.scenarios = {Scenario::custom};
  }

  spec.train_sizes = j.at("train_sizes").get<std::vector<int>>();
  spec.n_replicates = j.value("n_replicates", 20);
  spec.test_size = j.value("test_size", spec.family == Family::regression ? 500 : 1000);
  spec.flip_fraction = j.value("flip_fraction", 0.25);
  if (j.contains("estimators")) {
    spec.estimators = j.at("estimators").get<std::vector<std::string>>();
  } else {
    spec.estimators = known_estimators(spec.family);
  }
  if (j.contains("ridge_grid")) spec.ridge_grid = j.at("ridge_grid").get<std::vector<double>>();
  if (j.contains("sigma2_grid")) {
    spec.regression_grids.sigma2 = j.at("sigma2_grid").get<std::vector<double>>();
  }
  if (j.contains("tau_grid")) {
    spec.regression_grids.tau = j.at("tau_grid").get<std::vector<double>>();
  }
  if (j.contains("gm_tau_grid")) spec.gm_tau_grid = j.at("gm_tau_grid").get<std::vector<double>>();
  if (j.contains("alpha_box")) {
    auto box = j.at("alpha_box").get<std::vector<double>>();
    if (box.size() != 2) throw std::invalid_argument("experiment spec: alpha_box needs [lo, hi]");
    spec.dirichlet_opts.alpha_box_lo = box[0];
    spec.dirichlet_opts.alpha_box_hi = box[1];
  }
  spec.validate();
  return spec;
}

namespace {

Eigen::VectorXd draw_multinomial_counts(const Eigen::VectorXd& theta, int m, RngHandle& rng) {
  const Eigen::Index n = theta.size();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < m; ++s) {
    double u = rng.uniform();
    double cum = 0.0;
    Eigen::Index k = n - 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      cum += theta[i];
      if (u < cum) {
        k = i;
        break;
      }
    }
    counts[k] += 1.0;
  }
  return counts;
}

ConstraintSet scenario_constraints(const ExperimentSpec& spec, Scenario scenario,
                                   std::uint64_t cell_seed) {
  switch (scenario) {
    case Scenario::correct: return spec.correct_constraints;
    case Scenario::incorrect: return spec.incorrect_constraints;
    case Scenario::custom: return spec.custom_constraints;
    case Scenario::noisy: {
      ConstraintSet noisy;
      RngHandle flips = RngHandle(cell_seed).derive("flips");
      for (const auto& pc : spec.correct_constraints) {
        if (flips.uniform() < spec.flip_fraction) {
          noisy.add(pc.linear.flipped(), pc.eta);
        } else {
          noisy.add(pc);
        }
      }
      return noisy;
    }
  }
  return {};
}

/// Held-out selection of tau for the Gaussian-means MAP: the trailing
/// fraction of each group scores the fit, the winner is refit on all data.
EstimationResult select_map_gaussian_means(const GaussianMeansData& data, const ConstraintSet& cs,
                                           CovarianceMode mode, std::vector<double> tau_grid,
                                           double holdout_fraction,
                                           const GaussianMapOptions& opts) {
  std::sort(tau_grid.begin(), tau_grid.end());
  const int n = data.n_groups();

  std::vector<Eigen::VectorXd> fit_groups(data.groups.size()), val_groups(data.groups.size());
  bool can_split = true;
  for (std::size_t g = 0; g < data.groups.size(); ++g) {
    Eigen::Index m = data.groups[g].size();
    Eigen::Index n_val = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::floor(holdout_fraction * static_cast<double>(m))));
    if (m - n_val < 1) {
      can_split = false;
      break;
    }
    fit_groups[g] = data.groups[g].head(m - n_val);
    val_groups[g] = data.groups[g].tail(n_val);
  }

  double best_tau = tau_grid.front();
  if (can_split && tau_grid.size() > 1) {
    GaussianMeansData fit_data(fit_groups);
    double best_score = 0.0;
    bool have = false;
    std::string last_error;
    for (double tau : tau_grid) {
      try {
        EstimationResult r = map_gaussian_means(
            fit_data, cs, WishartHyperprior::scaled_identity(tau, n), mode, opts);
        double sq = 0.0;
        double count = 0.0;
        for (std::size_t g = 0; g < val_groups.size(); ++g) {
          sq += (val_groups[g].array() - r.theta[static_cast<Eigen::Index>(g)]).square().sum();
          count += static_cast<double>(val_groups[g].size());
        }
        double score = sq / count;
        if (!have || score < best_score) {
          best_score = score;
          best_tau = tau;
          have = true;
        }
      } catch (const InfeasibleError& e) {
        last_error = e.what();
      }
    }
    if (!have) {
      throw InfeasibleError("select_map_gaussian_means: every tau infeasible (" + last_error + ")");
    }
  }
  return map_gaussian_means(data, cs, WishartHyperprior::scaled_identity(best_tau, n), mode, opts);
}

struct CellInputs {
  const ExperimentSpec& spec;
  Scenario scenario;
  int train_size;
  int replicate;
  std::uint64_t cell_seed;
};

void append_metric(std::vector<MetricsRow>& rows, const CellInputs& cell,
                   const std::string& estimator, const std::string& metric, double value) {
  rows.push_back(MetricsRow{to_string(cell.spec.family), estimator, to_string(cell.scenario),
                            cell.train_size, cell.replicate, metric, value, cell.cell_seed});
}

void run_multinomial_cell(const CellInputs& cell, std::vector<MetricsRow>& rows) {
  const ExperimentSpec& spec = cell.spec;
  RngHandle data_rng = RngHandle(cell.cell_seed).derive("data");
  Eigen::VectorXd train = draw_multinomial_counts(spec.true_params, cell.train_size, data_rng);
  Eigen::VectorXd test = draw_multinomial_counts(spec.true_params, spec.test_size, data_rng);
  MultinomialData data(train);
  ConstraintSet cs = scenario_constraints(spec, cell.scenario, cell.cell_seed);

  auto test_nll = [&](const Eigen::VectorXd& theta) {
    double nll = 0.0;
    for (Eigen::Index i = 0; i < test.size(); ++i) {
      nll -= test[i] * std::log(std::max(theta[i], 1e-12));
    }
    return nll / test.sum();
  };

  for (const auto& name : spec.estimators) {
    try {
      Eigen::VectorXd theta;
      if (name == "mle") {
        theta = mle_multinomial(data);
      } else if (name == "constrained_mle") {
        theta = constrained_mle_multinomial(data, cs.linear_parts());
      } else if (name == "map") {
        DirichletMapOptions opts = spec.dirichlet_opts;
        opts.probe_seed = mix_seed(cell.cell_seed, "probe:map");
        theta = map_dirichlet_multinomial(data, cs, opts).theta;
      } else { // eb
        DirichletMapOptions opts = spec.dirichlet_opts;
        opts.probe_seed = mix_seed(cell.cell_seed, "probe:eb");
        theta = eb_dirichlet_multinomial({train}, cs, opts).theta;
      }
      append_metric(rows, cell, name, "l2_error", (theta - spec.true_params).norm());
      append_metric(rows, cell, name, "test_nll", test_nll(theta));
    } catch (const std::exception&) {
      append_metric(rows, cell, name, "failed", 1.0);
    }
  }
}

void run_gaussian_cell(const CellInputs& cell, std::vector<MetricsRow>& rows) {
  const ExperimentSpec& spec = cell.spec;
  const int n = static_cast<int>(spec.true_params.size());
  RngHandle data_rng = RngHandle(cell.cell_seed).derive("data");

  std::vector<Eigen::VectorXd> train(n), test(n);
  for (int j = 0; j < n; ++j) {
    train[j].resize(cell.train_size);
    for (int s = 0; s < cell.train_size; ++s) train[j][s] = spec.true_params[j] + data_rng.normal();
  }
  for (int j = 0; j < n; ++j) {
    test[j].resize(spec.test_size);
    for (int s = 0; s < spec.test_size; ++s) test[j][s] = spec.true_params[j] + data_rng.normal();
  }
  GaussianMeansData data(train);
  ConstraintSet cs = scenario_constraints(spec, cell.scenario, cell.cell_seed);

  auto test_nll = [&](const Eigen::VectorXd& theta) {
    double sq = 0.0, count = 0.0;
    for (int j = 0; j < n; ++j) {
      sq += (test[static_cast<std::size_t>(j)].array() - theta[j]).square().sum();
      count += static_cast<double>(test[static_cast<std::size_t>(j)].size());
    }
    return 0.5 * std::log(2.0 * 3.141592653589793) + 0.5 * sq / count;
  };

  for (const auto& name : spec.estimators) {
    try {
      Eigen::VectorXd theta;
      if (name == "mle") {
        theta = mle_gaussian_means(data);
      } else if (name == "constrained_mle") {
        theta = constrained_mle_gaussian_means(data, cs.linear_parts());
      } else {
        CovarianceMode mode =
            name == "map_diag" ? CovarianceMode::diagonal : CovarianceMode::full;
        theta = select_map_gaussian_means(data, cs, mode, spec.gm_tau_grid,
                                          spec.holdout_fraction, spec.gaussian_opts)
                    .theta;
      }
      append_metric(rows, cell, name, "l2_error", (theta - spec.true_params).norm());
      append_metric(rows, cell, name, "test_nll", test_nll(theta));
    } catch (const std::exception&) {
      append_metric(rows, cell, name, "failed", 1.0);
    }
  }
}

void run_regression_cell(const CellInputs& cell, std::vector<MetricsRow>& rows) {
  const ExperimentSpec& spec = cell.spec;
  const int p = static_cast<int>(spec.true_params.size());
  RngHandle data_rng = RngHandle(cell.cell_seed).derive("data");

  auto draw = [&](int m, Eigen::MatrixXd& X, Eigen::VectorXd& y) {
    X.resize(m, p);
    y.resize(m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < p; ++c) X(r, c) = data_rng.normal();
      y[r] = X.row(r).dot(spec.true_params) + data_rng.normal();
    }
  };
  Eigen::MatrixXd x_train, x_test;
  Eigen::VectorXd y_train, y_test;
  draw(cell.train_size, x_train, y_train);
  draw(spec.test_size, x_test, y_test);
  ConstraintSet cs = scenario_constraints(spec, cell.scenario, cell.cell_seed);
  std::vector<LinearConstraint> hard = cs.linear_parts();

  auto emit = [&](const std::string& name, const Eigen::VectorXd& theta) {
    Eigen::VectorXd pred = x_test * theta;
    double mse = (pred - y_test).squaredNorm() / static_cast<double>(y_test.size());
    double hits = 0.0;
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
      if (std::round(pred[i]) == std::round(y_test[i])) hits += 1.0;
    }
    append_metric(rows, cell, name, "l2_error", (theta - spec.true_params).norm());
    append_metric(rows, cell, name, "test_mse", mse);
    append_metric(rows, cell, name, "accuracy", hits / static_cast<double>(pred.size()));
  };

  for (const auto& name : spec.estimators) {
    try {
      if (name == "ridge") {
        emit(name, select_ridge(x_train, y_train, 1.0, spec.ridge_grid,
                                spec.holdout_fraction)
                       .theta);
      } else if (name == "constrained_ridge") {
        emit(name, select_ridge(x_train, y_train, 1.0, spec.ridge_grid,
                                spec.holdout_fraction, &hard)
                       .theta);
      } else {
        CovarianceMode mode =
            name == "map_diag" ? CovarianceMode::diagonal : CovarianceMode::full;
        emit(name, map_regression_selected(x_train, y_train, cs, mode, spec.regression_grids,
                                           spec.gaussian_opts)
                       .result.theta);
      }
    } catch (const std::exception&) {
      append_metric(rows, cell, name, "failed", 1.0);
    }
  }
}

std::vector<MetricsRow> run_cell(const CellInputs& cell) {
  std::vector<MetricsRow> rows;
  switch (cell.spec.family) {
    case Family::multinomial: run_multinomial_cell(cell, rows); break;
    case Family::gaussian_means: run_gaussian_cell(cell, rows); break;
    case Family::regression: run_regression_cell(cell, rows); break;
  }
  return rows;
}

}  // namespace

std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec, int n_jobs) {
  spec.validate();

  std::vector<CellInputs> cells;
  for (Scenario scenario : spec.scenarios) {
    for (int train_size : spec.train_sizes) {
      for (int rep = 0; rep < spec.n_replicates; ++rep) {
        std::string label = to_string(spec.family) + "|" + std::to_string(train_size) + "|" +
                            std::to_string(rep);
        cells.push_back(CellInputs{spec, scenario, train_size, rep, mix_seed(spec.seed, label)});
      }
    }
  }

  std::vector<std::vector<MetricsRow>> per_cell(cells.size());
  if (n_jobs <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) per_cell[i] = run_cell(cells[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        per_cell[i] = run_cell(cells[i]);
      }
    };
    std::vector<std::thread> pool;
    int threads = std::min<int>(n_jobs, static_cast<int>(cells.size()));
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<MetricsRow> rows;
  for (auto& chunk : per_cell) {
    rows.insert(rows.end(), std::make_move_iterator(chunk.begin()),
                std::make_move_iterator(chunk.end()));
  }
  return rows;
}

std::string rows_to_csv(std::vector<MetricsRow> rows) {
  auto key = [](const MetricsRow& r) {
    return std::tie(r.family, r.scenario, r.train_size, r.replicate, r.estimator, r.metric);
  };
  std::sort(rows.begin(), rows.end(),
            [&](const MetricsRow& a, const MetricsRow& b) { return key(a) < key(b); });

  std::string out = "family,estimator,scenario,train_size,replicate,metric,value,seed\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.10g", r.value);
    out += r.family;
    out += ',';
    out += r.estimator;
    out += ',';
    out += r.scenario;
    out += ',';
    out += std::to_string(r.train_size);
    out += ',';
    out += std::to_string(r.replicate);
    out += ',';
    out += r.metric;
    out += ',';
    out += buf;
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void write_csv(std::vector<MetricsRow> rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("write_csv: cannot open '" + path + "'");
  }
  file << rows_to_csv(std::move(rows));
}

}  // namespace probcon
