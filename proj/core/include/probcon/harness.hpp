#ifndef PROBCON_HARNESS_HPP
#define PROBCON_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "probcon/constraints.hpp"
#include "probcon/multinomial.hpp"
#include "probcon/regression.hpp"
#include "probcon/rng.hpp"

namespace probcon {

enum class Family { multinomial, gaussian_means, regression };
enum class Scenario { correct, incorrect, noisy, custom };

std::string to_string(Family f);
std::string to_string(Scenario s);
Family family_from_string(const std::string& s);
Scenario scenario_from_string(const std::string& s);

/// A complete synthetic study: generative truth, the constraint sets to
/// compare, the estimator roster, and the evaluation grid. Fully seeded:
/// (spec, seed) determines every byte of the output.
struct ExperimentSpec {
  Family family = Family::multinomial;
  Eigen::VectorXd true_params;
  double eta = 0.95;
  ConstraintSet correct_constraints;
  ConstraintSet incorrect_constraints;
  ConstraintSet custom_constraints;
  std::vector<Scenario> scenarios{Scenario::correct, Scenario::incorrect};
  double flip_fraction = 0.25; // noisy scenario: chance each constraint flips

  std::vector<int> train_sizes;
  int n_replicates = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> estimators;
  int test_size = 1000;

  std::vector<double> ridge_grid{0.001, 0.01, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
  RegressionGrids regression_grids;
  std::vector<double> gm_tau_grid{0.01, 0.1, 0.5, 2.0, 8.0};
  double holdout_fraction = 0.2;
  DirichletMapOptions dirichlet_opts;
  GaussianMapOptions gaussian_opts;

  void validate() const; // throws on malformed fields
};

struct MetricsRow {
  std::string family;
  std::string estimator;
  std::string scenario;
  int train_size = 0;
  int replicate = 0;
  std::string metric;
  double value = 0.0;
  std::uint64_t seed = 0; // the cell seed that regenerates this row
};

/// Multinomial study: truth (1/12, 1/6, 1/6, 1/4, 1/3); correct set orders
/// the three small components below the two large ones (6 constraints at
/// eta 0.95), incorrect set reverses every inequality.
ExperimentSpec builtin_multinomial_spec();

/// Gaussian-means study: truth (0, 1/2, 1); correct set {t1<=t2, t2<=t3,
/// t1>=0, t3<=1}, incorrect set {t1>=t2, t2>=t3}.
ExperimentSpec builtin_gaussian_spec();

/// Regression study: a 10-dimensional coefficient vector with the first five
/// components uniform on (-1,0) and the last five uniform on (0,1), drawn
/// from the supplied stream; sign constraints plus cross-group orderings,
/// and their reversal.
ExperimentSpec builtin_regression_spec(RngHandle rng);

/// Regression study where a seeded fraction of the correct constraints is
/// sign-flipped per replicate before fitting.
ExperimentSpec builtin_noisy_regression_spec(RngHandle rng, double flip_fraction = 0.25);

/// Builtin lookup by name: multinomial | gaussian | regression |
/// regression_noisy (regression builtins derive their coefficient draw from
/// the seed). Unknown names throw std::invalid_argument.
ExperimentSpec builtin_spec(const std::string& name, std::uint64_t seed);

/// Parse an ExperimentSpec from the JSON config format (see README).
ExperimentSpec experiment_spec_from_json(const std::string& text);

/// Run every (scenario, train size, replicate, estimator) cell, emitting
/// parameter error and predictive metrics per cell; estimator failures
/// become rows with metric "failed" and the run continues. Cells execute
/// concurrently under n_jobs > 1 with identical output.
std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec, int n_jobs = 1);

/// CSV serialization: fixed header
/// family,estimator,scenario,train_size,replicate,metric,value,seed
/// with %.10g values, LF endings, rows in deterministic sorted order.
std::string rows_to_csv(std::vector<MetricsRow> rows);
void write_csv(std::vector<MetricsRow> rows, const std::string& path);

}  // namespace probcon

#endif  // PROBCON_HARNESS_HPP
