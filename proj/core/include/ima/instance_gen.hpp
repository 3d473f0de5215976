#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ima/graph.hpp"

namespace ima {

enum class InstanceKind { kPath, kStar, kErdosRenyi, kTwoCluster };

InstanceKind parse_instance_kind(const std::string& name);

// A generated instance, node labels equal to dense ids by construction.
struct Instance {
  Graph graph;
  std::vector<NodeId> seed_ids;
  std::vector<CandidateEdge> candidates;

  SeedSet seeds() const { return SeedSet(seed_ids, graph.node_count()); }
};

// Chain 0 -> 1 -> ... -> n-1, every edge probability `p`. Seed: node 0.
Instance make_path(std::uint32_t n, double p = 1.0);

// Star 0 -> i for i in 1..n-1, probability `p`. Seed: node 0.
Instance make_star(std::uint32_t n, double p = 1.0);

// Directed G(n, p_edge) with weighted-cascade probabilities. Seed: the node
// with the largest out-degree. Candidates: the full heuristic pool, capped
// at 10000 by uniform sampling.
Instance make_erdos_renyi(std::uint32_t n, double p_edge, std::uint64_t seed);

// Two-community instance where diffusion-aware selection provably beats the
// degree and probability heuristics:
//   - seed s0 already reaches `fan` local nodes with probability 0.9;
//   - a local hub points back at those fan nodes (high out-degree, little
//     marginal value) - the OUTDEG trap;
//   - `decoys` dead-end nodes, each with its own one-node sink (highest
//     candidate probability, small downstream) - the PROB trap;
//   - a gateway node leads a deterministic chain of `tail` nodes in the
//     second cluster - the edge worth buying.
// Candidates: s0 -> hub (0.8), s0 -> each decoy (0.95), s0 -> gateway (0.5).
// With the defaults, {gateway, decoy, decoy} is the exact optimum, so the
// marginal-coverage ranking dominates every random draw while OUTDEG and
// PROB both burn budget on the hub or the decoys alone.
Instance make_two_cluster(std::uint32_t fan = 4, std::uint32_t tail = 5,
                          std::uint32_t decoys = 2);

struct InstanceFiles {
  std::string edges;
  std::string seeds;
  std::string candidates;
};

// Builds the requested instance and writes "<prefix>.edges", "<prefix>.seeds"
// and "<prefix>.cands". Unknown parameter keys are rejected.
InstanceFiles gen_instance(InstanceKind kind, const std::map<std::string, double>& params,
                           std::uint64_t seed, const std::string& prefix);

// Convenience for tests and the CLI.
Instance make_instance(InstanceKind kind, const std::map<std::string, double>& params,
                       std::uint64_t seed);

}  // namespace ima
