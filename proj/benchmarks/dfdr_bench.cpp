// Microbenchmarks for the hot paths: exact tests (which enumerate a full
// conditional law per feature), pi0 estimation and the threshold scan.

#include <benchmark/benchmark.h>

#include <random>

#include "dfdr/dfdr.hpp"

namespace {

using namespace dfdr;

// Study of Fisher tests on random tables, as in the methylation analysis.
Study fisher_study(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> trials(1, 25);
  std::vector<TestResult> results;
  results.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r1 = trials(rng), r2 = trials(rng);
    std::binomial_distribution<std::int64_t> b1(r1, i % 3 == 0 ? 0.85 : 0.5), b2(r2, 0.5);
    results.push_back(fisher_test(b1(rng), r1, b2(rng), r2));
  }
  return make_study(results);
}

void BM_BinomialTest(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(binomial_test(n / 3, n - n / 3));
  state.SetComplexityN(n);
}
BENCHMARK(BM_BinomialTest)->RangeMultiplier(4)->Range(8, 8 << 10)->Complexity();

void BM_FisherTest(benchmark::State& state) {
  const auto r = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(fisher_test(r / 4, r, r / 2, r));
  state.SetComplexityN(r);
}
BENCHMARK(BM_FisherTest)->RangeMultiplier(4)->Range(8, 8 << 10)->Complexity();

void BM_NegBinomialTest(benchmark::State& state) {
  const auto s = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(nb_exact_test(s / 3, s - s / 3, 1.0 / 1.451, 3));
  state.SetComplexityN(s);
}
BENCHMARK(BM_NegBinomialTest)->RangeMultiplier(4)->Range(8, 8 << 10)->Complexity();

void BM_GeneralizedPi0(benchmark::State& state) {
  const auto study = fisher_study(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(generalized_pi0(study, 0.5, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneralizedPi0)->RangeMultiplier(8)->Range(64, 1 << 15);

void BM_Threshold(benchmark::State& state) {
  const auto study = fisher_study(static_cast<std::size_t>(state.range(0)), 2);
  const RejectionProcess proc(study.pvalues());
  const auto est = FdrEstimator::generalized(study, 0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(threshold(est, proc, 0.05));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Threshold)->RangeMultiplier(8)->Range(64, 1 << 15);

void BM_BootstrapTune(benchmark::State& state) {
  const auto study = fisher_study(2000, 3);
  std::vector<double> lambdas;
  for (int k = 0; k < 10; ++k) lambdas.push_back(0.05 + 0.09 * k);
  auto grid = TuningGrid::product(lambdas, {0.0, 0.5, 1.0});
  grid.bootstraps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_tune(study, grid));
}
BENCHMARK(BM_BootstrapTune)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
