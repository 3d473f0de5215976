#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ima {

using NodeId = std::uint32_t;

// One adjacency entry: the other endpoint and the propagation probability of
// the arc. In a forward list `node` is the head, in a reverse list the tail.
struct Arc {
  NodeId node = 0;
  double prob = 0.0;
};

struct LoadStats {
  std::uint64_t lines = 0;            // non-comment edge lines read
  std::uint64_t duplicate_edges = 0;  // dropped, first occurrence kept
  std::uint64_t self_loops = 0;       // dropped
};

// Immutable directed graph with per-edge probabilities, stored as CSR in both
// directions. Node ids are dense 0..n-1; the original labels from the input
// file are kept for reports. Safe for concurrent reads once built.
class Graph {
 public:
  Graph() = default;

  NodeId node_count() const { return n_; }
  std::uint64_t edge_count() const { return static_cast<std::uint64_t>(fwd_arcs_.size()); }

  std::span<const Arc> out_arcs(NodeId u) const {
    return {fwd_arcs_.data() + fwd_off_[u], fwd_off_[u + 1] - fwd_off_[u]};
  }
  std::span<const Arc> in_arcs(NodeId v) const {
    return {rev_arcs_.data() + rev_off_[v], rev_off_[v + 1] - rev_off_[v]};
  }
  std::uint32_t out_degree(NodeId u) const { return fwd_off_[u + 1] - fwd_off_[u]; }
  std::uint32_t in_degree(NodeId v) const { return rev_off_[v + 1] - rev_off_[v]; }

  // Adjacency is sorted by neighbour id, so membership is a binary search.
  bool has_edge(NodeId u, NodeId v) const;

  // Mean probability over all edges; 0 for an edgeless graph.
  double global_mean_probability() const;

  // True when every input line carried an explicit probability.
  bool fully_weighted() const { return fully_weighted_; }

  std::int64_t original_id(NodeId v) const { return original_ids_[v]; }
  std::optional<NodeId> dense_id(std::int64_t original) const;

  const LoadStats& load_stats() const { return stats_; }

  // Overwrites every probability with 1/indeg(target) (weighted cascade).
  void assign_wic_probabilities();

  // Throws Error if the forward/reverse mirrors disagree, a probability is
  // out of [0,1], or a self-loop / duplicate survived construction.
  void check_consistency() const;

 private:
  friend class GraphBuilder;

  NodeId n_ = 0;
  std::vector<std::uint32_t> fwd_off_{0};
  std::vector<std::uint32_t> rev_off_{0};
  std::vector<Arc> fwd_arcs_;
  std::vector<Arc> rev_arcs_;
  std::vector<std::int64_t> original_ids_;
  std::unordered_map<std::int64_t, NodeId> dense_ids_;
  LoadStats stats_;
  bool fully_weighted_ = true;
};

// Accumulates edges (original labels), then finalizes into a Graph: dense
// re-indexing in first-appearance order, keep-first dedup, self-loop drop.
class GraphBuilder {
 public:
  // Interns labels 0..count-1 up front so dense ids equal labels (used by
  // the instance generators).
  void ensure_nodes(std::int64_t count);

  // p ignored when has_prob is false (stays as the 0 sentinel).
  void add_edge(std::int64_t u, std::int64_t v, double p, bool has_prob);
  Graph build() &&;

 private:
  NodeId intern(std::int64_t label);

  struct PendingEdge {
    NodeId u, v;
    double p;
  };
  std::vector<PendingEdge> edges_;
  std::vector<std::int64_t> original_ids_;
  std::unordered_map<std::int64_t, NodeId> dense_ids_;
  LoadStats stats_;
  bool fully_weighted_ = true;
};

// Edge-list text format: "u v" or "u v p" per line, `#` starts a comment.
// An undirected load materializes both arcs per line.
Graph load_edge_list(std::istream& in, bool directed);
Graph load_edge_list_file(const std::string& path, bool directed);

// Writes "u v p" lines (original labels), sorted by dense (u, v).
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list_file(const Graph& g, const std::string& path);

// Sorted distinct node ids with a membership bitmap.
class SeedSet {
 public:
  SeedSet() = default;
  SeedSet(std::vector<NodeId> ids, NodeId node_count);

  static SeedSet from_file(const std::string& path, const Graph& g);

  std::span<const NodeId> ids() const { return ids_; }
  bool contains(NodeId v) const { return mask_[v] != 0; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  NodeId node_count() const { return static_cast<NodeId>(mask_.size()); }

  // Copy of this set with one extra node (used by the exact-spread identity).
  SeedSet with(NodeId v) const;

 private:
  std::vector<NodeId> ids_;
  std::vector<std::uint8_t> mask_;
};

void save_seed_file(const Graph& g, const SeedSet& s, const std::string& path);

// Insertable edge from a seed node to an ordinary node.
struct CandidateEdge {
  NodeId u = 0;
  NodeId v = 0;
  double p = 0.0;

  friend bool operator==(const CandidateEdge&, const CandidateEdge&) = default;
};

enum class CandidateMode { kAll, kSample };

// Enumerates or samples candidate pairs from (S x V) \ E, assigning each the
// mean of u's average out-edge probability and v's average in-edge
// probability (global mean fills a missing side). Output sorted by (u, v).
// `clamped`, when given, reports that `limit` exceeded the pool.
std::vector<CandidateEdge> generate_candidates(const Graph& g, const SeedSet& seeds,
                                               CandidateMode mode, std::uint64_t limit,
                                               std::uint64_t rng_seed,
                                               bool* clamped = nullptr);

// Number of pairs generate_candidates(kAll) would emit.
std::uint64_t candidate_pool_size(const Graph& g, const SeedSet& seeds);

// "u v p" lines with original labels; validates every candidate invariant.
std::vector<CandidateEdge> load_candidate_file(const std::string& path, const Graph& g,
                                               const SeedSet& seeds);
void save_candidate_file(const Graph& g, std::span<const CandidateEdge> candidates,
                         const std::string& path);

// Throws ConfigError on the first violated candidate invariant.
void validate_candidates(const Graph& g, const SeedSet& seeds,
                         std::span<const CandidateEdge> candidates);

}  // namespace ima
