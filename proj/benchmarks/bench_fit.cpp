#include <benchmark/benchmark.h>

#include "kies/fitting.hpp"
#include "kies/sampling.hpp"

// One multi-start fit on 1e4 synthetic draws, 50 bins.
static void BM_Fit(benchmark::State& state) {
  const auto fam = static_cast<kies::FitFamily>(state.range(0));
  const kies::MixedKies truth(kies::MixingLaw::affine(2.0, 1.0, kies::MixingLaw::exponential(1.0)), 2.0);
  const auto s = kies::sample(truth, 3, 10000);
  const auto emp = kies::bin_data(s.values, 50).pdf;
  kies::FitConfig cfg;
  cfg.family = fam;
  cfg.restarts = static_cast<int>(state.range(1));
  state.SetLabel(std::string(kies::family_code(fam)));
  for (auto _ : state) benchmark::DoNotOptimize(kies::fit(emp, cfg).cost);
}
BENCHMARK(BM_Fit)
    ->Args({0, 8})
    ->Args({5, 8})
    ->Args({6, 8})
    ->Unit(benchmark::kMillisecond);
