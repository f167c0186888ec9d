#include <benchmark/benchmark.h>

#include "cauchy/experiment.hpp"

namespace {

const cauchy::Scenario& scenario(int which) {
  static const cauchy::Scenario logcosh = cauchy::parse_scenario(
      "name = bench_logcosh\nfamily = composed_logcosh\nseed = 14\nn = 4..16\nm = 2..8\nell = 4\n"
      "kappa_h = 0.05..1\nkappa_a = 0.05..1\nx0_radius = 3\n");
  static const cauchy::Scenario psd = cauchy::parse_scenario(
      "name = bench_psd\nfamily = quadratic_psd\nseed = 12\nn = 16..48\nspectrum = 0.01..1\n");
  return which == 0 ? logcosh : psd;
}

void BM_Serial(benchmark::State& state) {
  const auto& s = scenario(static_cast<int>(state.range(0)));
  const auto count = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cauchy::run_scenario_serial(s, count));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(s.name);
}

void BM_OpenMP(benchmark::State& state) {
  const auto& s = scenario(static_cast<int>(state.range(0)));
  const auto count = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cauchy::run_scenario(s, count));
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(s.name);
}

}  // namespace

BENCHMARK(BM_Serial)->Args({0, 64})->Args({1, 64})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OpenMP)->Args({0, 64})->Args({1, 64})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
