#include <benchmark/benchmark.h>

#include "bpro/io.hpp"
#include "bpro/packers.hpp"
#include "bpro/random_order.hpp"
#include "bpro/trace_analysis.hpp"

namespace {

bpro::Instance sample(std::size_t n) {
  const auto dist =
      bpro::parse_distribution_json(bpro::read_text_file(BPRO_DATA_DIR "/table1/types7.json"));
  return bpro::sample_iid_instance(dist, n, 1);
}

void BM_BestFitTrace(benchmark::State& state) {
  const auto inst = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bpro::best_fit(inst.items));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BestFitTrace)->Arg(1'000)->Arg(10'000);

void BM_FirstFitTrace(benchmark::State& state) {
  const auto inst = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bpro::first_fit(inst.items));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FirstFitTrace)->Arg(10'000);

void BM_BestFitCounter(benchmark::State& state) {
  const auto inst = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    bpro::BestFitCounter c;
    for (const auto& s : inst.items) c.add(s.value());
    benchmark::DoNotOptimize(c.bins());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BestFitCounter)->Arg(100'000);

void BM_StructuralClaims(benchmark::State& state) {
  const auto inst = sample(static_cast<std::size_t>(state.range(0)));
  const auto trace = bpro::best_fit(inst.items);
  for (auto _ : state) benchmark::DoNotOptimize(bpro::verify_structural_claims(trace));
}
BENCHMARK(BM_StructuralClaims)->Arg(300)->Arg(3'000);

}  // namespace
