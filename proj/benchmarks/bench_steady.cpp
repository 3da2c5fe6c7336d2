#include <benchmark/benchmark.h>

#include "wqed/steady_state.hpp"

using namespace wqed;

namespace {

BinnedLayout make_layout(std::uint64_t m, double dz) {
  EnsembleSpec s;
  s.n_emitters = 1000000000ULL;
  s.gamma_1d = two_pi * 100.0;
  s.gamma_prime = two_pi * 100.0;
  s.line = SpectralLine::gaussian(two_pi * 50e9);
  s.delta_z = dz;
  return build_bins(s, m, 1);
}

void BM_SteadySolveStructured(benchmark::State& state) {
  const BinnedLayout layout = make_layout(static_cast<std::uint64_t>(state.range(0)), 0.1);
  DriveSpec drive;
  double delta = 0.0;
  for (auto _ : state) {
    delta += 1e7;
    benchmark::DoNotOptimize(solve_collective_steady(layout, delta, drive));
  }
}
BENCHMARK(BM_SteadySolveStructured)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SteadySolveDense(benchmark::State& state) {
  const BinnedLayout layout = make_layout(static_cast<std::uint64_t>(state.range(0)), 0.1);
  DriveSpec drive;
  double delta = 0.0;
  for (auto _ : state) {
    delta += 1e7;
    benchmark::DoNotOptimize(
        solve_collective_steady(layout, delta, drive, SolveBackend::Dense));
  }
}
BENCHMARK(BM_SteadySolveDense)->Arg(100)->Arg(500);

void BM_ExactOracle(benchmark::State& state) {
  EnsembleSpec s;
  s.n_emitters = static_cast<std::uint64_t>(state.range(0));
  s.gamma_1d = 1.0;
  s.gamma_prime = 1.0;
  s.line = SpectralLine::gaussian(10.0);
  s.delta_z = 0.1;
  GridSpec grid;
  grid.min = -500.0;
  grid.max = 500.0;
  grid.count = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_steady_transmission(s, 1, grid));
  }
}
BENCHMARK(BM_ExactOracle)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
