#include <benchmark/benchmark.h>

#include <string>

#include "bpro/io.hpp"
#include "bpro/markov.hpp"

namespace {

bpro::DiscreteDistribution table1(std::int64_t types) {
  return bpro::parse_distribution_json(
      bpro::read_text_file(BPRO_DATA_DIR "/table1/types" + std::to_string(types) + ".json"));
}

void BM_BuildChain(benchmark::State& state) {
  const auto dist = table1(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bpro::build_chain(dist));
}
BENCHMARK(BM_BuildChain)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

void BM_StationaryExact(benchmark::State& state) {
  const auto chain = bpro::build_chain(table1(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bpro::stationary(chain, bpro::SolveMode::Exact));
  state.counters["states"] = static_cast<double>(chain.size());
}
BENCHMARK(BM_StationaryExact)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_StationaryIterative(benchmark::State& state) {
  const auto chain = bpro::build_chain(table1(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bpro::stationary(chain, bpro::SolveMode::Iterative));
}
BENCHMARK(BM_StationaryIterative)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
