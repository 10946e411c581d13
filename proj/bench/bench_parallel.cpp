// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "slope/families.hpp"
#include "slope/gcore.hpp"
#include "slope/mc.hpp"

namespace {

void BM_CoverageSerial(benchmark::State& state) {
  slope::SimConfig cfg;
  cfg.reps = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(slope::run_coverage_serial(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.reps);
}

void BM_CoverageParallel(benchmark::State& state) {
  slope::SimConfig cfg;
  cfg.reps = state.range(0);
  cfg.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(slope::run_coverage(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.reps);
}

const slope::GenEstimator& median_lift() {
  static const slope::GenEstimator g = slope::lift_point_estimator(
      slope::Family::cauchy_median(7), [](const slope::Sample& y) { return y.scalar_value(); }, "median");
  return g;
}

void BM_SlopeReportSerial(benchmark::State& state) {
  const auto grid = slope::linspace(-4.0, 4.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(slope::slope_report_serial(median_lift(), grid));
}

void BM_SlopeReportParallel(benchmark::State& state) {
  const auto grid = slope::linspace(-4.0, 4.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(slope::slope_report(median_lift(), grid));
}

}  // namespace

BENCHMARK(BM_CoverageSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageParallel)->Args({2000, 1})->Args({2000, 2})->Args({2000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlopeReportSerial)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlopeReportParallel)->Arg(41)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
