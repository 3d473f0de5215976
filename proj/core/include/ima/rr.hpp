#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ima/graph.hpp"
#include "ima/rng.hpp"

namespace ima {

// One reverse-reachable set. The root is members[0]. `truncated` means
// generation stopped the moment a seed entered the set.
struct RrSet {
  NodeId root = 0;
  std::vector<NodeId> members;
  bool truncated = false;
};

struct AuditReport {
  bool ok = true;
  std::uint64_t delta_mismatches = 0;
  bool coverage_mismatch = false;
  bool index_mismatch = false;
};

// A frozen collection of RR sets plus the counters the solver mutates:
// per-set covered flag (Pi), per-node marginal array (Delta), the inverted
// node -> set-id index, and the seed-coverage count (Lambda).
class RrCollection {
 public:
  std::uint64_t theta() const { return set_off_.size() - 1; }
  NodeId node_count() const { return n_; }

  std::span<const NodeId> members(std::uint64_t i) const {
    return {pool_.data() + set_off_[i], set_off_[i + 1] - set_off_[i]};
  }
  NodeId root(std::uint64_t i) const { return pool_[set_off_[i]]; }
  bool covered(std::uint64_t i) const { return covered_[i] != 0; }
  bool truncated(std::uint64_t i) const { return truncated_[i] != 0; }

  std::int64_t marginal(NodeId v) const { return delta_[v]; }
  std::span<const std::int64_t> marginals() const { return delta_; }
  std::int64_t seed_coverage() const { return lambda_; }
  bool cap_exit() const { return cap_exit_; }

  std::span<const std::uint32_t> sets_containing(NodeId v) const {
    return {inv_.data() + inv_off_[v], inv_off_[v + 1] - inv_off_[v]};
  }

  // Marks set i as covered by S: flips Pi, bumps Lambda, and decrements
  // Delta for every member. No-op (returns false) when already covered.
  bool mark_covered(std::uint64_t i);

  // Recounts Delta and Lambda from the raw sets and Pi flags and compares
  // with the maintained counters; also re-derives the inverted index.
  AuditReport audit() const;

  // Builds a collection from explicit member lists (testing / restore).
  // members[i][0] is the root of set i.
  static RrCollection from_sets(NodeId n, const std::vector<std::vector<NodeId>>& sets,
                                const SeedSet& seeds);

  // Binary dump: magic "IMRR", version, n, theta, then per-set
  // length-prefixed member lists. Little-endian 32-bit throughout.
  void dump(std::ostream& out) const;

  // Reads a dump and rebuilds coverage state against `seeds`. Truncation
  // flags are not part of the format and come back cleared.
  static RrCollection restore(std::istream& in, const SeedSet& seeds);

 private:
  friend class RrBuilder;

  void rebuild_counters();
  void build_inverted_index();

  NodeId n_ = 0;
  std::vector<std::uint32_t> set_off_{0};
  std::vector<NodeId> pool_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::uint8_t> truncated_;
  std::vector<std::int64_t> delta_;
  std::vector<std::uint32_t> inv_off_;
  std::vector<std::uint32_t> inv_;
  std::int64_t lambda_ = 0;
  bool cap_exit_ = false;
};

// Samples one RR set: uniform random root, then reverse BFS flipping one
// coin per in-edge. With `truncate`, generation halts as soon as a seed
// joins the set.
RrSet sample_rr_set(const Graph& g, const SeedSet& seeds, bool truncate, Rng& rng);

// Test hook: same process from a forced root.
RrSet sample_rr_set_from_root(const Graph& g, const SeedSet& seeds, NodeId root,
                              bool truncate, Rng& rng);

// Samples truncated RR sets until the seed coverage reaches
// ceil(threshold), or `cap` sets were drawn (sets the cap_exit flag).
// Set i draws its stream from (master_seed, i). `added` is a virtual edge
// overlay (the augmented graph for evaluation); the base graph is untouched.
RrCollection sample_until_coverage(const Graph& g, const SeedSet& seeds, double threshold,
                                   std::uint64_t cap, std::uint64_t master_seed,
                                   bool truncate = true,
                                   std::span<const CandidateEdge> added = {});

// Samples exactly `count` sets (fixed-size collections for estimators).
RrCollection sample_fixed(const Graph& g, const SeedSet& seeds, std::uint64_t count,
                          std::uint64_t master_seed, bool truncate,
                          std::span<const CandidateEdge> added = {});

// Number of stored sets intersecting `nodes`. Pure query.
std::uint64_t coverage(const RrCollection& coll, std::span<const NodeId> nodes);

// n * coverage / theta. Throws on an empty collection.
double estimate_spread(const RrCollection& coll, std::span<const NodeId> nodes);

}  // namespace ima
