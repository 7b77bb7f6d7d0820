#include <algorithm>
#include <vector>

#include <benchmark/benchmark.h>

#include "chainent/chainent.hpp"

namespace {

using namespace chainent;

const ChainCouplings kReference{ToeplitzCoeffs{4.0, 1.0}, ToeplitzCoeffs{1.0}};

void BM_GroundStateCorrelations(benchmark::State& state) {
  const Geometry g(static_cast<int>(state.range(0)), 1024);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state_correlations(kReference, g));
}
BENCHMARK(BM_GroundStateCorrelations)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_StructuredBlockEntropy(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const CorrelationPair pair = ground_state_correlations(kReference, Geometry(16, 16));
  const BlockSpec block{std::min(l, 16), l};
  for (auto _ : state) benchmark::DoNotOptimize(block_entropy(pair, block).s);
}
BENCHMARK(BM_StructuredBlockEntropy)->DenseRange(2, 16, 2)->Unit(benchmark::kMicrosecond);

void BM_DenseBlockEntropy(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Geometry g(16, 16);
  const DenseCorrelations dense = dense_ground_state(kReference, g);
  const std::vector<int> idx = block_indices(g, BlockSpec{l, l});
  for (auto _ : state) benchmark::DoNotOptimize(dense_entropy(dense, idx));
}
BENCHMARK(BM_DenseBlockEntropy)->DenseRange(2, 16, 2)->Unit(benchmark::kMicrosecond);

void BM_Sweep(benchmark::State& state) {
  const CorrelationPair pair = ground_state_correlations(kReference, Geometry(256, 4096));
  const Grid grid{{2, 4, 8, 16}, {16, 32, 64, 128}};
  const SweepOptions opts{.threads = static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sweep(pair, grid, opts));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
