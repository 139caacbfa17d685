// Serial vs OpenMP timing for the data-parallel kernels: phase-scan rate
// evaluation and Monte Carlo replication batches. Run manually:
//   ./build/bench/bench_kernels

#include <numbers>

#include <benchmark/benchmark.h>

#include "entvis/detect.hpp"
#include "entvis/mc.hpp"

namespace {

using namespace entvis;

entmeas::MixedStateParams bench_state() { return {0.5, 0.5, std::numbers::pi / 8.0}; }

interf::SetupParams bench_setup() {
  interf::SetupParams s;
  s.b1 = std::sqrt(0.55);
  s.b2 = std::sqrt(0.45);
  s.t_h = 0.9;
  s.t_v = 0.85;
  s.theta = std::numbers::pi / 4.0;
  s.xi_hv = -std::numbers::pi / 8.0;
  s.xi_vh = std::numbers::pi / 8.0;
  return s;
}

void BM_ScanRates(benchmark::State& state, Execution exec) {
  const auto p = bench_state();
  const auto s = bench_setup();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto scan = detect::scan_rates(p, s, detect::Analyzer::D, n, 4.0 * std::numbers::pi, exec);
    benchmark::DoNotOptimize(scan.rates.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Replications(benchmark::State& state, Execution exec) {
  const auto p = bench_state();
  const auto s = bench_setup();
  const auto reps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto study = mc::run_replications(p, s, detect::Analyzer::D, 256,
                                      4.0 * std::numbers::pi, 1e4, 1, reps, exec);
    benchmark::DoNotOptimize(study.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * reps);
}

}  // namespace

BENCHMARK_CAPTURE(BM_ScanRates, serial, entvis::Execution::serial)
    ->Arg(1 << 12)
    ->Arg(1 << 15)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ScanRates, openmp, entvis::Execution::parallel)
    ->Arg(1 << 12)
    ->Arg(1 << 15)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replications, serial, entvis::Execution::serial)
    ->Arg(32)
    ->Arg(128)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replications, openmp, entvis::Execution::parallel)
    ->Arg(32)
    ->Arg(128)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
