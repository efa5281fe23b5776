#include <benchmark/benchmark.h>

#include "spr/fri.hpp"
#include "spr/model.hpp"
#include "spr/pipeline.hpp"
#include "spr/support_recovery.hpp"

namespace {

void BM_RecoverSupport(benchmark::State& state, bool cached) {
  const int k = static_cast<int>(state.range(0));
  const spr::DifferenceSet diffs =
      spr::difference_set(spr::synthesize_support(k, 1, {0.0, 1.0}, 42));
  spr::RecoveryConfig config;
  config.use_caching = cached;
  for (auto _ : state) benchmark::DoNotOptimize(spr::recover_support(diffs, k, config, 1));
  state.SetComplexityN(k);
}

void BM_Uncached(benchmark::State& state) { BM_RecoverSupport(state, false); }
void BM_Cached(benchmark::State& state) { BM_RecoverSupport(state, true); }

BENCHMARK(BM_Uncached)->DenseRange(10, 30, 5)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_Cached)->DenseRange(10, 30, 5)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Superresolve(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const spr::Support support = spr::synthesize_support(k, 1, {0.0, 1.0}, 7);
  const spr::FourierSamples samples =
      spr::acf_fourier_samples(spr::build_acf_atoms(support, spr::Amplitudes::Ones(k)), {},
                               spr::padded_sampling_step(1.0), 100);
  for (auto _ : state) benchmark::DoNotOptimize(spr::superresolve_acf(samples, k));
}

BENCHMARK(BM_Superresolve)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
