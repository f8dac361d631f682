#include <benchmark/benchmark.h>

#include <random>

#include "wshrink/estimator.hpp"
#include "wshrink/posterior.hpp"
#include "wshrink/wavelet.hpp"

using namespace wshrink;

namespace {

Signal random_signal(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  Signal x(n);
  for (double& v : x) v = z(rng);
  return x;
}

ShrinkageRule heavy_rule() {
  ShrinkageRule rule;
  rule.prior = DensityModel::double_exponential();
  rule.error = DensityModel::with_std(DensityFamily::student_t, 1.0);
  rule.nu = 22.6;
  rule.beta = 2.0;
  rule.n = 4096;
  return rule;
}

void BM_Dwt(benchmark::State& state) {
  const Signal x = random_signal(static_cast<std::size_t>(state.range(0)));
  const FilterBank& bank = default_filter_bank();
  for (auto _ : state) benchmark::DoNotOptimize(idwt(dwt(x, 3, bank), bank));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dwt)->RangeMultiplier(4)->Range(1 << 8, 1 << 16);

void BM_ShrinkExact(benchmark::State& state) {
  const ShrinkageRule rule = heavy_rule();
  double d = 0.0;
  for (auto _ : state) {
    d = d > 0.2 ? -0.2 : d + 1e-3;
    benchmark::DoNotOptimize(shrink(rule, d));
  }
}
BENCHMARK(BM_ShrinkExact);

void BM_ShrinkTabulated(benchmark::State& state) {
  const TabulatedShrinker tab(heavy_rule());
  double d = 0.0;
  for (auto _ : state) {
    d = d > 0.2 ? -0.2 : d + 1e-3;
    benchmark::DoNotOptimize(tab(d));
  }
}
BENCHMARK(BM_ShrinkTabulated);

void BM_DenoiseTabulated(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Signal y = random_signal(n);
  const BayesModel model = make_model(ComboId::DEDE);
  SmoothnessSpec spec;
  const ShrinkagePlan plan = make_plan(n, spec, model);
  ShrinkCache cache;
  DenoiseOptions opt;
  opt.tabulate = true;
  opt.cache = &cache;
  denoise(y, model, plan, opt);  // build the tables outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(denoise(y, model, plan, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DenoiseTabulated)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
