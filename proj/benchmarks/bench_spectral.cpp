#include <benchmark/benchmark.h>

#include "wqed/faddeeva.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

namespace {

void BM_Erfcx(benchmark::State& state) {
  Complex z(0.3, -2.0);
  for (auto _ : state) {
    z += Complex(1e-6, 1e-6);
    benchmark::DoNotOptimize(erfcx(z));
  }
}
BENCHMARK(BM_Erfcx);

void BM_ChiGaussian(benchmark::State& state) {
  const SpectralLine line = SpectralLine::gaussian(1.0);
  double d = -4.0;
  for (auto _ : state) {
    d += 1e-5;
    benchmark::DoNotOptimize(chi_eval(line, d, 1e-3));
  }
}
BENCHMARK(BM_ChiGaussian);

void BM_ChiTabulated(benchmark::State& state) {
  const SpectralLine burned =
      apply_hole_burn(SpectralLine::gaussian(1.0), {{0.0, 0.3, 0.9}}, 4001);
  double d = -4.0;
  for (auto _ : state) {
    d += 1e-4;
    benchmark::DoNotOptimize(chi_eval(burned, d, 1e-3));
  }
}
BENCHMARK(BM_ChiTabulated)->Unit(benchmark::kMicrosecond);

}  // namespace
