#include <benchmark/benchmark.h>

#include "bpro/matching.hpp"
#include "bpro/rng.hpp"

namespace {

void BM_InterleavedUnmatched(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  bpro::CounterRng rng(1);
  const auto arrival = bpro::random_permutation(2 * k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bpro::interleaved_unmatched(k, arrival));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InterleavedUnmatched)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNLogN);

}  // namespace
