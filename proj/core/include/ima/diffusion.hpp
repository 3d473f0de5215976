#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ima/graph.hpp"
#include "ima/rng.hpp"

namespace ima {

struct SpreadEstimate {
  double value = 0.0;
  std::uint64_t sample_count = 0;
  double half_width = 0.0;
  bool guaranteed = true;
};

// Forward independent-cascade simulator over the base graph plus a virtual
// edge overlay. Reusable: visitation epochs avoid per-run clearing.
class Simulator {
 public:
  Simulator(const Graph& g, std::span<const CandidateEdge> added);

  // One cascade from the seed set; returns the number of activated nodes.
  std::uint32_t run(const SeedSet& seeds, Rng& rng);

 private:
  const Graph& g_;
  std::unordered_map<NodeId, std::vector<Arc>> extra_out_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> queue_;
};

std::uint32_t simulate_ic(const Graph& g, std::span<const CandidateEdge> added,
                          const SeedSet& seeds, Rng& rng);

// Mean of r independent cascades; half_width is a 95% normal CI.
// Run i draws its stream from (master_seed, i), so the result is independent
// of execution order.
SpreadEstimate monte_carlo_spread(const Graph& g, std::span<const CandidateEdge> added,
                                  const SeedSet& seeds, std::uint64_t r,
                                  std::uint64_t master_seed);

// Enumeration bounds for the exact oracle.
inline constexpr int kMaxStochasticEdges = 22;
inline constexpr int kMaxExactNodes = 64;

// Exact expected spread by enumerating every live/blocked assignment of the
// stochastic edges (0 < p < 1); p=0 and p=1 edges are fixed. Throws
// CapacityError beyond kMaxStochasticEdges stochastic edges or
// kMaxExactNodes nodes.
double exact_spread(const Graph& g, std::span<const CandidateEdge> added,
                    const SeedSet& seeds);

// Both sides of the augmented-spread identity:
//   lhs = sigma(A + {e}, S)
//   rhs = p_e * sigma(A, S + {v}) + (1 - p_e) * sigma(A, S)
std::pair<double, double> exact_augmented_identity_check(const Graph& g,
                                                         std::span<const CandidateEdge> added,
                                                         const SeedSet& seeds,
                                                         const CandidateEdge& e);

}  // namespace ima
