#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

#include "veriscale/curves.hpp"
#include "veriscale/estimators.hpp"
#include "veriscale/rng.hpp"
#include "veriscale/scaling.hpp"
#include "veriscale/synth.hpp"

namespace {

using namespace veriscale;

SynthConfig bench_config() {
  SynthConfig config;
  config.n_problems = 32;
  config.n_solutions = 32;
  config.n_verifications = 8;
  config.seed = 1;
  return config;
}

void BM_BestOfKClosedForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(99);
  AlphaVector alpha;
  for (int i = 0; i < n; ++i) {
    alpha.values.push_back(rng.below(2) ? 1.0 : 0.0);
    alpha.source_index.push_back(i);
  }
  const int k = n / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_of_k_closed_form(alpha, k));
  }
}
BENCHMARK(BM_BestOfKClosedForm)->Arg(16)->Arg(64)->Arg(128);

void BM_MajorityVotingExhaustive(benchmark::State& state) {
  const Dataset ds = generate(bench_config());
  EstimatorConfig cfg;
  cfg.mode = SamplingMode::exhaustive;
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc_success_rate(ds, k, cfg));
  }
}
BENCHMARK(BM_MajorityVotingExhaustive)->Arg(3)->Arg(5);

void BM_MajorityVotingMonteCarlo(benchmark::State& state) {
  const Dataset ds = generate(bench_config());
  EstimatorConfig cfg;
  cfg.mode = SamplingMode::monte_carlo;
  cfg.trials = static_cast<int>(state.range(0));
  cfg.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sc_success_rate(ds, 9, cfg));
  }
}
BENCHMARK(BM_MajorityVotingMonteCarlo)->Arg(200)->Arg(1000);

void BM_SelectionMonteCarlo(benchmark::State& state) {
  const Dataset ds = generate(bench_config());
  EstimatorConfig cfg;
  cfg.mode = SamplingMode::monte_carlo;
  cfg.trials = static_cast<int>(state.range(0));
  cfg.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(genrm_success_rate(ds, 8, 4, cfg));
  }
}
BENCHMARK(BM_SelectionMonteCarlo)->Arg(200)->Arg(1000);

void BM_Generate(benchmark::State& state) {
  SynthConfig config = bench_config();
  config.n_problems = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(config));
  }
}
BENCHMARK(BM_Generate)->Arg(16)->Arg(128);

void BM_PowerLawFit(benchmark::State& state) {
  Rng rng(5);
  std::vector<std::pair<double, double>> points;
  for (int i = 1; i <= 64; ++i) {
    const double x = static_cast<double>(i) * 4.0;
    points.push_back({x, 2.0 * x * (1.0 + 0.05 * rng.uniform())});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_power_law(points));
  }
}
BENCHMARK(BM_PowerLawFit);

}  // namespace

BENCHMARK_MAIN();
