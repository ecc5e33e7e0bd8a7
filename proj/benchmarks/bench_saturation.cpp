#include <benchmark/benchmark.h>

#include "kies/saturation.hpp"

using kies::MixedKies;
using kies::MixingLaw;

static void BM_SaturationFixedPoint(benchmark::State& state) {
  const MixedKies m(MixingLaw::gamma(2.0, 5.0), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(kies::saturation_fixed_point(m).d);
}
BENCHMARK(BM_SaturationFixedPoint);

static void BM_SaturationAlgorithm1(benchmark::State& state) {
  const MixedKies m(MixingLaw::gamma(2.0, 5.0), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(kies::saturation_algorithm1(m).d);
}
BENCHMARK(BM_SaturationAlgorithm1);

static void BM_SaturationDiscrete(benchmark::State& state) {
  const MixedKies m(MixingLaw::discrete({0.1, 0.5, 5.0, 10.0}, {0.25, 0.25, 0.25, 0.25}), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(kies::saturation_algorithm1(m).d);
}
BENCHMARK(BM_SaturationDiscrete);

BENCHMARK_MAIN();
