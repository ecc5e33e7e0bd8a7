#include <benchmark/benchmark.h>

#include <vector>

#include "kies/mixture.hpp"
#include "kies/sampling.hpp"
#include "kies/special_functions.hpp"

namespace {

using kies::MixedKies;
using kies::MixingLaw;

MixedKies model_for(int which) {
  switch (which) {
    case 0: return MixedKies(MixingLaw::discrete({0.1, 0.5, 5.0, 10.0}, {0.25, 0.25, 0.25, 0.25}), 2.0);
    case 1: return MixedKies(MixingLaw::shifted_binomial(50, 0.25), 2.0);
    case 2: return MixedKies(MixingLaw::gamma(2.0, 5.0), 0.7);
    case 3: return MixedKies(MixingLaw::beta(3.0, 1.0), 2.0);
    default: return MixedKies(MixingLaw::affine(3.96, 4.97, MixingLaw::beta(0.5, 0.3)), 0.9);
  }
}

const char* kNames[] = {"discrete", "binomial", "gamma", "beta", "affine_beta"};

}  // namespace

static void BM_MixPdf(benchmark::State& state) {
  const auto m = model_for(static_cast<int>(state.range(0)));
  state.SetLabel(kNames[state.range(0)]);
  for (auto _ : state) {
    double acc = 0;
    for (int k = 1; k < 100; ++k) acc += kies::mix_pdf(m, k / 100.0);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 99);
}
BENCHMARK(BM_MixPdf)->DenseRange(0, 4);

static void BM_MixCdf(benchmark::State& state) {
  const auto m = model_for(static_cast<int>(state.range(0)));
  state.SetLabel(kNames[state.range(0)]);
  for (auto _ : state) {
    double acc = 0;
    for (int k = 1; k < 100; ++k) acc += kies::mix_cdf(m, k / 100.0);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 99);
}
BENCHMARK(BM_MixCdf)->DenseRange(0, 4);

static void BM_Hyp1F1(benchmark::State& state) {
  const double x = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kies::hyp1f1(3.0, 4.5, x));
}
BENCHMARK(BM_Hyp1F1)->Arg(1)->Arg(10)->Arg(29)->Arg(100);

static void BM_Sample(benchmark::State& state) {
  const auto m = model_for(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto b = kies::sample(m, 1, n, 1);
    benchmark::DoNotOptimize(b.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(1 << 12)->Arg(1 << 16);

static void BM_MixQuantile(benchmark::State& state) {
  const auto m = model_for(static_cast<int>(state.range(0)));
  state.SetLabel(kNames[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(kies::mix_quantile(m, 0.37));
}
BENCHMARK(BM_MixQuantile)->DenseRange(0, 4);
