#include <benchmark/benchmark.h>

#include "kbias/generators.hpp"

namespace {

using namespace kbias;

void BM_ConfigurationModel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto degrees = sample_degree_sequence(OffspringLaw::from_map({{3, 0.5}, {4, 0.5}}), n, 1).degrees;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen_configuration_model(degrees, seed++).num_edges());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ConfigurationModel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ErdosRenyi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen_erdos_renyi(n, 4.0, seed++).num_edges());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ErdosRenyi)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
