#include <benchmark/benchmark.h>

#include "probcon/bregman.hpp"
#include "probcon/dirichlet.hpp"
#include "probcon/gaussian.hpp"
#include "probcon/multinomial.hpp"
#include "probcon/rng.hpp"
#include "probcon/special.hpp"

namespace {

using namespace probcon;

DirichletHyper bench_hyper() {
  Eigen::VectorXd alpha(5);
  alpha << 1.5, 3.0, 2.0, 6.5, 4.0;
  return DirichletHyper{alpha};
}

LinearConstraint bench_constraint() {
  Eigen::VectorXd a(5);
  a << 1.0, -1.0, 0.5, 0.0, -0.25;
  return LinearConstraint(a, 0.1);
}

void bm_normal_quantile(benchmark::State& state) {
  double p = 0.0001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(std_normal_quantile(p));
    p += 1e-6;
    if (p > 0.9999) p = 0.0001;
  }
}
BENCHMARK(bm_normal_quantile);

void bm_prob_leq_edgeworth(benchmark::State& state) {
  DirichletHyper h = bench_hyper();
  LinearConstraint c = bench_constraint();
  for (auto _ : state) {
    benchmark::DoNotOptimize(prob_leq_edgeworth(h, c));
  }
}
BENCHMARK(bm_prob_leq_edgeworth);

void bm_prob_leq_exact(benchmark::State& state) {
  DirichletHyper h = bench_hyper();
  LinearConstraint c = bench_constraint();
  for (auto _ : state) {
    benchmark::DoNotOptimize(prob_leq_exact(h, c));
  }
}
BENCHMARK(bm_prob_leq_exact);

void bm_prob_leq_montecarlo_10k(benchmark::State& state) {
  DirichletHyper h = bench_hyper();
  LinearConstraint c = bench_constraint();
  for (auto _ : state) {
    benchmark::DoNotOptimize(prob_leq_montecarlo(h, c, 10000, RngHandle(7)));
  }
}
BENCHMARK(bm_prob_leq_montecarlo_10k);

void bm_gaussian_soc_margin(benchmark::State& state) {
  Eigen::VectorXd mu(5);
  mu << 0.1, -0.4, 0.9, 0.0, 0.3;
  GaussianHyper h(mu, Eigen::MatrixXd::Identity(5, 5));
  ProbabilisticConstraint pc(bench_constraint(), 0.95);
  for (auto _ : state) {
    benchmark::DoNotOptimize(soc_margin(h, pc));
  }
}
BENCHMARK(bm_gaussian_soc_margin);

void bm_cyclic_project(benchmark::State& state) {
  RngHandle rng(42);
  Eigen::MatrixXd m(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) m(i, j) = rng.normal();
  }
  Eigen::MatrixXd base = m * m.transpose() / 5.0 + 0.2 * Eigen::MatrixXd::Identity(5, 5);
  std::vector<TraceConstraint> tcs;
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd a(5);
    for (int i = 0; i < 5; ++i) a[i] = rng.uniform(-1.0, 1.0);
    tcs.emplace_back(a, a.dot(base * a) * 0.5);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cyclic_project(base, tcs));
  }
}
BENCHMARK(bm_cyclic_project);

void bm_map_dirichlet_small(benchmark::State& state) {
  Eigen::VectorXd counts(2);
  counts << 2, 8;
  MultinomialData data(counts);
  ConstraintSet cs;
  cs.add(ordering(0, 1, 2), 0.95);
  DirichletMapOptions opts;
  opts.ascent_starts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_dirichlet_multinomial(data, cs, opts));
  }
}
BENCHMARK(bm_map_dirichlet_small);

}  // namespace

BENCHMARK_MAIN();
