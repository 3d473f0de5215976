#include <benchmark/benchmark.h>

#include "ima/diffusion.hpp"
#include "bench_common.hpp"

using namespace ima;

static void BM_SimulateIc(benchmark::State& state) {
  auto inst = bench::random_network(static_cast<std::uint32_t>(state.range(0)), 8.0, 20);
  SeedSet seeds = inst.seeds();
  Simulator sim(inst.graph, {});
  std::uint64_t run = 0;
  for (auto _ : state) {
    Rng rng(Rng::derive(5, stream::kSimulation, ++run));
    benchmark::DoNotOptimize(sim.run(seeds, rng));
  }
}
BENCHMARK(BM_SimulateIc)->Arg(1 << 10)->Arg(1 << 13)->Arg(1 << 16);

static void BM_MonteCarloSpread(benchmark::State& state) {
  auto inst = bench::random_network(1 << 12, 8.0, 20);
  SeedSet seeds = inst.seeds();
  const std::uint64_t r = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t master = 0;
  for (auto _ : state) {
    auto est = monte_carlo_spread(inst.graph, {}, seeds, r, ++master);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(r));
}
BENCHMARK(BM_MonteCarloSpread)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ExactSpread(benchmark::State& state) {
  // Worst-case enumeration width at the bound the oracle accepts.
  const int stochastic = static_cast<int>(state.range(0));
  GraphBuilder b;
  b.ensure_nodes(static_cast<NodeId>(stochastic + 1));
  for (int i = 0; i < stochastic; ++i) {
    b.add_edge(i, i + 1, 0.5, true);
  }
  Graph g = std::move(b).build();
  SeedSet seeds({0}, g.node_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_spread(g, {}, seeds));
  }
}
BENCHMARK(BM_ExactSpread)->Arg(12)->Arg(18)->Arg(22)->Unit(benchmark::kMillisecond);
