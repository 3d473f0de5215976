#include <benchmark/benchmark.h>

#include "ima/rr.hpp"
#include "ima/solver.hpp"
#include "bench_common.hpp"

using namespace ima;

static void BM_SampleRrSets(benchmark::State& state) {
  auto inst = bench::random_network(static_cast<std::uint32_t>(state.range(0)), 8.0, 20);
  SeedSet seeds = inst.seeds();
  const std::uint64_t count = 5000;
  std::uint64_t master = 0;
  for (auto _ : state) {
    auto coll = sample_fixed(inst.graph, seeds, count, ++master, true);
    benchmark::DoNotOptimize(coll.seed_coverage());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * count);
}
BENCHMARK(BM_SampleRrSets)->Arg(1 << 10)->Arg(1 << 13)->Arg(1 << 16)
    ->Unit(benchmark::kMillisecond);

static void BM_TruncatedVsPlain(benchmark::State& state) {
  auto inst = bench::random_network(1 << 13, 8.0, 50);
  SeedSet seeds = inst.seeds();
  const bool truncate = state.range(0) != 0;
  const std::uint64_t count = 5000;
  std::uint64_t master = 0;
  for (auto _ : state) {
    auto coll = sample_fixed(inst.graph, seeds, count, ++master, truncate);
    benchmark::DoNotOptimize(coll.theta());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * count);
}
BENCHMARK(BM_TruncatedVsPlain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SoftUpdate(benchmark::State& state) {
  auto inst = bench::random_network(1 << 13, 8.0, 20);
  SeedSet seeds = inst.seeds();
  auto coll = sample_fixed(inst.graph, seeds, 50000, 3, true);
  // Update against the candidate with the largest marginal.
  CandidateEdge best = inst.candidates.front();
  for (const auto& e : inst.candidates) {
    if (coll.marginal(e.v) > coll.marginal(best.v)) best = e;
  }
  std::uint32_t step = 0;
  for (auto _ : state) {
    state.PauseTiming();
    auto work = coll;  // updates mutate; time a fresh copy each round
    state.ResumeTiming();
    benchmark::DoNotOptimize(soft_update(work, best, 11, ++step));
  }
}
BENCHMARK(BM_SoftUpdate)->Unit(benchmark::kMillisecond);
