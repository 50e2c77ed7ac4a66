#include <benchmark/benchmark.h>

#include "bpro/io.hpp"
#include "bpro/optimal.hpp"
#include "bpro/random_order.hpp"

namespace {

const bpro::DiscreteDistribution& seven() {
  static const auto dist =
      bpro::parse_distribution_json(bpro::read_text_file(BPRO_DATA_DIR "/table1/types7.json"));
  return dist;
}

void BM_ConfigurationLp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bpro::configuration_lp(seven()));
}
BENCHMARK(BM_ConfigurationLp)->Unit(benchmark::kMillisecond);

void BM_OptExact(benchmark::State& state) {
  const auto inst = bpro::sample_iid_instance(seven(), static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(bpro::opt_exact(inst.items));
}
BENCHMARK(BM_OptExact)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_OptBracket(benchmark::State& state) {
  const auto inst = bpro::sample_iid_instance(seven(), static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(bpro::opt_bracket(inst.items));
}
BENCHMARK(BM_OptBracket)->Arg(1'000)->Arg(5'000)->Unit(benchmark::kMillisecond);

}  // namespace
