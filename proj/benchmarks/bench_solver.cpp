#include <benchmark/benchmark.h>

#include "ima/baselines.hpp"
#include "ima/solver.hpp"
#include "bench_common.hpp"

using namespace ima;

static void BM_SolveEndToEnd(benchmark::State& state) {
  auto inst = bench::random_network(static_cast<std::uint32_t>(state.range(0)), 8.0, 20);
  SeedSet seeds = inst.seeds();
  SolverConfig cfg;
  cfg.eps = 0.5;
  cfg.delta = 0.01;
  cfg.k = 10;
  std::uint64_t master = 0;
  for (auto _ : state) {
    cfg.master_seed = ++master;
    auto rep = solve(inst.graph, seeds, inst.candidates, cfg);
    benchmark::DoNotOptimize(rep.sigma_after);
  }
}
BENCHMARK(BM_SolveEndToEnd)->Arg(1 << 10)->Arg(1 << 13)->Unit(benchmark::kMillisecond);

static void BM_SelectionOnly(benchmark::State& state) {
  auto inst = bench::random_network(1 << 13, 8.0, 20);
  SeedSet seeds = inst.seeds();
  auto coll = sample_fixed(inst.graph, seeds, 100000, 3, true);
  for (auto _ : state) {
    state.PauseTiming();
    auto work = coll;
    state.ResumeTiming();
    auto rep = select_edges(work, inst.candidates, 10, 5);
    benchmark::DoNotOptimize(rep.coverage_final);
  }
}
BENCHMARK(BM_SelectionOnly)->Unit(benchmark::kMillisecond);

static void BM_McGreedy(benchmark::State& state) {
  auto inst = bench::random_network(1 << 10, 8.0, 10);
  SeedSet seeds = inst.seeds();
  // Trim the pool so one iteration stays in the millisecond range.
  std::vector<CandidateEdge> pool(inst.candidates.begin(),
                                  inst.candidates.begin() +
                                      std::min<std::size_t>(100, inst.candidates.size()));
  const std::uint64_t r = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t master = 0;
  for (auto _ : state) {
    auto res = mc_greedy(inst.graph, seeds, pool, 5, r, ++master);
    benchmark::DoNotOptimize(res.edges.size());
  }
}
BENCHMARK(BM_McGreedy)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
