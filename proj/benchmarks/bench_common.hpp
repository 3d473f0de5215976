#pragma once

#include "ima/graph.hpp"
#include "ima/instance_gen.hpp"
#include "ima/rng.hpp"

namespace ima::bench {

// Directed G(n, deg/n) with weighted-cascade probabilities and a top-degree
// seed set, shared by the throughput benchmarks.
inline Instance random_network(std::uint32_t n, double avg_deg, std::uint32_t seed_count,
                               std::uint64_t seed = 42) {
  Instance inst = make_erdos_renyi(n, avg_deg / static_cast<double>(n), seed);
  Graph& g = inst.graph;
  std::vector<NodeId> order(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (g.out_degree(a) != g.out_degree(b)) return g.out_degree(a) > g.out_degree(b);
    return a < b;
  });
  order.resize(std::min<std::size_t>(seed_count, order.size()));
  inst.seed_ids.assign(order.begin(), order.end());
  std::sort(inst.seed_ids.begin(), inst.seed_ids.end());
  inst.candidates = generate_candidates(g, inst.seeds(), CandidateMode::kSample,
                                        std::min<std::uint64_t>(2000, g.node_count()), 7);
  return inst;
}

}  // namespace ima::bench
