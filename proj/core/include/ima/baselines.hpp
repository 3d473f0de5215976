#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ima/graph.hpp"
#include "ima/rng.hpp"
#include "ima/rr.hpp"

namespace ima {

enum class BaselineKind {
  kRand,
  kOutdeg,
  kProb,
  kSinf,
  kAisNoProb,
  kAisNoUpdate,
  kMcGreedy,
};

struct BaselineResult {
  std::vector<CandidateEdge> edges;
  bool short_selection = false;  // pool or distinct targets ran out before k
};

// Uniform k-subset without replacement (Fisher-Yates prefix).
BaselineResult rand_select(std::span<const CandidateEdge> candidates, std::uint32_t k,
                           Rng& rng);

// Highest out-degree of the target node, ties by smallest (u, v).
BaselineResult outdeg_select(const Graph& g, std::span<const CandidateEdge> candidates,
                             std::uint32_t k);

// Highest probability, ties by smallest (u, v).
BaselineResult prob_select(std::span<const CandidateEdge> candidates, std::uint32_t k);

// Top-k distinct target nodes by initial marginal coverage (ties smaller id),
// one edge per node: the incident candidate with highest p (ties smaller u).
// The collection is not updated.
BaselineResult sinf_select(const RrCollection& coll,
                           std::span<const CandidateEdge> candidates, std::uint32_t k);

// Per round: edge whose target has the highest marginal coverage, ignoring p
// in the score (among edges into that node, highest p wins); the collection
// is soft-updated with the true p after each pick.
BaselineResult ais_no_prob(RrCollection& coll, std::span<const CandidateEdge> candidates,
                           std::uint32_t k, std::uint64_t master_seed);

// Per round argmax of p * Delta(v) with the marginal array frozen.
BaselineResult ais_no_update(const RrCollection& coll,
                             std::span<const CandidateEdge> candidates, std::uint32_t k);

// Live-edge worlds shared across every marginal evaluation (common random
// numbers): one coin per base edge and per candidate edge per world, drawn
// from (master_seed, world index). Keeps per-world activation state for the
// committed edge set, so marginals are incremental forward BFS counts.
class WorldEnsemble {
 public:
  WorldEnsemble(const Graph& g, const SeedSet& seeds,
                std::span<const CandidateEdge> pool, std::uint64_t r,
                std::uint64_t master_seed);

  std::uint64_t world_count() const { return r_; }
  std::size_t pool_size() const { return pool_.size(); }

  // Total new activations over all worlds if pool edge `cand` were added to
  // the committed set. Scratch-only; does not change the committed state.
  std::int64_t marginal_total(std::size_t cand);

  // Adds pool edge `cand` to the committed set, activating downstream nodes
  // in every world where its coin is live.
  void commit(std::size_t cand);

  // sigma-hat of the committed set: mean activated count over worlds.
  double estimate() const;

 private:
  bool base_live(std::uint64_t world, std::uint64_t edge) const;
  bool cand_live(std::uint64_t world, std::size_t cand) const;
  bool active(std::uint64_t world, NodeId v) const;
  std::int64_t bfs(std::uint64_t world, NodeId start, bool commit_mode);

  const Graph& g_;
  std::vector<CandidateEdge> pool_;
  std::uint64_t r_ = 0;
  std::uint64_t m_ = 0;
  std::size_t base_words_ = 0, cand_words_ = 0, node_words_ = 0;
  std::vector<std::uint64_t> base_bits_;   // r x m coin outcomes
  std::vector<std::uint64_t> cand_bits_;   // r x |pool| coin outcomes
  std::vector<std::uint64_t> active_bits_; // r x n committed activation
  std::int64_t total_active_ = 0;
  std::vector<std::uint32_t> edge_index_offset_;  // CSR arc -> flat edge id
  std::vector<NodeId> stack_;
  std::vector<NodeId> visited_scratch_;
  std::vector<std::uint32_t> scratch_mark_;
  std::uint32_t scratch_epoch_ = 0;
};

// Greedy over shared worlds with a lazy (CELF) queue; exactly equal to the
// naive re-evaluate-everything greedy because the fixed-world objective is
// monotone submodular. Ties by smallest (u, v).
BaselineResult mc_greedy(const Graph& g, const SeedSet& seeds,
                         std::span<const CandidateEdge> candidates, std::uint32_t k,
                         std::uint64_t r, std::uint64_t master_seed);

const char* baseline_name(BaselineKind kind);

}  // namespace ima
