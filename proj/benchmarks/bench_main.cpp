#include <benchmark/benchmark.h>

#include <vector>

#include "crcs.hpp"

namespace {

using namespace crcs;

TallyTable sample(double gap, int n, std::uint64_t replication = 0) {
  const SimulationConfig config = reference_config(gap, n, 1, 17);
  return tally_for(config, generate_dataset(config, replication));
}

void BM_Mle(benchmark::State& state) {
  const TallyTable t = sample(state.range(0) / 10.0, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mle(t));
  state.counters["support"] = static_cast<double>(t.size());
}
BENCHMARK(BM_Mle)->Args({100, 1000})->Args({20, 1000})->Args({5, 1000})->Args({1, 1000})->Args({1, 10000})
    ->Unit(benchmark::kMicrosecond);

void BM_Naive(benchmark::State& state) {
  const TallyTable t = sample(state.range(0) / 10.0, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(naive_estimate(t));
  state.counters["support"] = static_cast<double>(t.size());
}
BENCHMARK(BM_Naive)->Args({100, 1000})->Args({1, 1000})->Args({1, 10000})->Unit(benchmark::kMicrosecond);

void BM_LikelihoodRatioInterval(benchmark::State& state) {
  const TallyTable t = sample(0.1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ci_likelihood_ratio(t, 0, 10.0, 0.95, 2.286));
}
BENCHMARK(BM_LikelihoodRatioInterval)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_BootstrapReplicates(benchmark::State& state) {
  const TallyTable t = sample(0.5, 1000);
  const std::vector<double> points{10.0, 20.0, 25.0};
  BootstrapSpec spec;
  spec.estimator = state.range(0) == 0 ? EstimatorKind::kMle : EstimatorKind::kNaive;
  spec.resamples = 200;
  spec.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_replicates(t, points, spec));
  state.SetLabel(std::string(to_string(spec.estimator)));
}
BENCHMARK(BM_BootstrapReplicates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CoverageExperiment(benchmark::State& state) {
  const SimulationConfig config = reference_config(state.range(0) / 10.0, 1000, 20, 3);
  ExperimentOptions options;
  options.methods = {CiMethod::kNormal};
  options.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(coverage_experiment(config, options));
}
BENCHMARK(BM_CoverageExperiment)->Arg(100)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
