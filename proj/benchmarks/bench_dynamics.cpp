#include <benchmark/benchmark.h>

#include "wqed/dynamics.hpp"

using namespace wqed;

namespace {

void BM_GeneratorApply(benchmark::State& state) {
  EnsembleSpec s;
  s.n_emitters = 1000000ULL;
  s.gamma_1d = 1e-3;
  s.gamma_prime = 1e-3;
  s.line = SpectralLine::gaussian(1.0);
  s.delta_z = 0.1;
  const std::uint64_t m = static_cast<std::uint64_t>(state.range(0));
  const int n_f = static_cast<int>(state.range(1));
  const BinnedLayout layout = build_bins(s, m, 1);
  const FrequencyGrid grid = sample_frequencies(s.line, n_f);
  const LinearGenerator gen(layout, {grid}, nullptr, 0.0);
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(gen.dimension());
  Eigen::VectorXcd out(gen.dimension());
  for (auto _ : state) {
    gen.apply(y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(gen.dimension()));
}
BENCHMARK(BM_GeneratorApply)->Args({1000, 200})->Args({100, 100});

}  // namespace
