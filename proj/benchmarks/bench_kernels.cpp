#include <benchmark/benchmark.h>

#include "kbias/generators.hpp"
#include "kbias/kernels.hpp"
#include "kbias/stationary.hpp"

namespace {

using namespace kbias;

Graph cm_graph(std::size_t n) {
  GenSpec spec;
  spec.model = GraphModel::Configuration;
  spec.n = n;
  spec.degree_pmf = OffspringLaw::from_map({{3, 0.5}, {4, 0.5}});
  spec.seed = 1;
  spec.erase = true;
  spec.restrict = Restriction::TwoCore;
  return generate(spec).graph;
}

// All vertex biases at level k; cost grows as k |E|.
void BM_BiasAll(benchmark::State& state, Exploration e) {
  const auto g = cm_graph(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bias_all(g, k, e).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k * g.num_directed_edges()));
}
BENCHMARK_CAPTURE(BM_BiasAll, bt, Exploration::backtracking())->Args({10000, 10})->Args({100000, 10});
BENCHMARK_CAPTURE(BM_BiasAll, nb, Exploration::non_backtracking())->Args({10000, 10})->Args({100000, 10});

void BM_EdgePush(benchmark::State& state) {
  const auto g = cm_graph(static_cast<std::size_t>(state.range(0)));
  DistVector d = pi_edges(g);
  for (auto _ : state) {
    d = edge_push(g, d);
    benchmark::DoNotOptimize(d[0]);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_directed_edges()));
}
BENCHMARK(BM_EdgePush)->Arg(10000)->Arg(100000);

void BM_MixingProfile(benchmark::State& state) {
  const auto g = cm_graph(static_cast<std::size_t>(state.range(0)));
  MixingOptions opt;
  opt.k_max = 100;
  opt.sample_starts = 32;
  for (auto _ : state) benchmark::DoNotOptimize(mixing_profile(g, Exploration::backtracking(), opt).D_values.back());
}
BENCHMARK(BM_MixingProfile)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
