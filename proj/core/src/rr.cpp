#include "ima/rr.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "ima/errors.hpp"

namespace ima {

namespace {

// Reverse in-arcs contributed by a virtual edge overlay, keyed by head node.
struct OverlayInArcs {
  std::unordered_map<NodeId, std::vector<Arc>> by_head;

  explicit OverlayInArcs(std::span<const CandidateEdge> added) {
    for (const CandidateEdge& e : added) by_head[e.v].push_back({e.u, e.p});
  }
  bool empty() const { return by_head.empty(); }
};

// Scratch for repeated reverse BFS walks; epoch marks avoid clearing.
struct RrSampler {
  const Graph& g;
  const SeedSet& seeds;
  OverlayInArcs overlay;
  std::vector<std::uint32_t> mark;
  std::uint32_t epoch = 0;
  std::vector<NodeId> queue;

  RrSampler(const Graph& g_in, const SeedSet& seeds_in, std::span<const CandidateEdge> added)
      : g(g_in), seeds(seeds_in), overlay(added), mark(g_in.node_count(), 0) {
    queue.reserve(g_in.node_count());
  }

  // Grows `queue` with the members of one RR set; returns (covered, truncated).
  std::pair<bool, bool> grow(NodeId root, bool truncate, Rng& rng) {
    ++epoch;
    queue.clear();
    queue.push_back(root);
    mark[root] = epoch;
    bool covered = seeds.contains(root);
    if (covered && truncate) return {true, true};

    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId w = queue[head];
      auto try_arc = [&](const Arc& a) -> bool {
        if (mark[a.node] == epoch) return false;
        if (rng.next_unit() < a.prob) {
          mark[a.node] = epoch;
          queue.push_back(a.node);
          if (seeds.contains(a.node)) {
            covered = true;
            if (truncate) return true;  // halt generation immediately
          }
        }
        return false;
      };
      for (const Arc& a : g.in_arcs(w)) {
        if (try_arc(a)) return {true, true};
      }
      if (!overlay.empty()) {
        auto it = overlay.by_head.find(w);
        if (it != overlay.by_head.end()) {
          for (const Arc& a : it->second) {
            if (try_arc(a)) return {true, true};
          }
        }
      }
    }
    return {covered, false};
  }
};

void put_u32(std::ostream& out, std::uint32_t x) {
  unsigned char b[4] = {static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
                        static_cast<unsigned char>(x >> 16),
                        static_cast<unsigned char>(x >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("rr dump: unexpected end of data");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

constexpr std::uint32_t kDumpMagic = 0x52524D49;  // "IMRR"
constexpr std::uint32_t kDumpVersion = 1;

}  // namespace

bool RrCollection::mark_covered(std::uint64_t i) {
  if (covered_[i]) return false;
  covered_[i] = 1;
  lambda_ += 1;
  for (NodeId v : members(i)) delta_[v] -= 1;
  return true;
}

void RrCollection::rebuild_counters() {
  delta_.assign(n_, 0);
  lambda_ = 0;
  for (std::uint64_t i = 0; i < theta(); ++i) {
    if (covered_[i]) {
      lambda_ += 1;
    } else {
      for (NodeId v : members(i)) delta_[v] += 1;
    }
  }
}

void RrCollection::build_inverted_index() {
  inv_off_.assign(n_ + 1, 0);
  for (NodeId v : pool_) inv_off_[v + 1] += 1;
  for (NodeId v = 0; v < n_; ++v) inv_off_[v + 1] += inv_off_[v];
  inv_.resize(pool_.size());
  std::vector<std::uint32_t> pos(inv_off_.begin(), inv_off_.end() - 1);
  for (std::uint64_t i = 0; i < theta(); ++i) {
    for (NodeId v : members(i)) inv_[pos[v]++] = static_cast<std::uint32_t>(i);
  }
}

AuditReport RrCollection::audit() const {
  AuditReport rep;
  std::vector<std::int64_t> delta(n_, 0);
  std::int64_t lambda = 0;
  for (std::uint64_t i = 0; i < theta(); ++i) {
    if (covered_[i]) {
      lambda += 1;
    } else {
      for (NodeId v : members(i)) delta[v] += 1;
    }
  }
  for (NodeId v = 0; v < n_; ++v) {
    if (delta[v] != delta_[v]) rep.delta_mismatches += 1;
  }
  rep.coverage_mismatch = (lambda != lambda_);

  std::vector<std::uint32_t> counts(n_, 0);
  for (NodeId v : pool_) counts[v] += 1;
  for (NodeId v = 0; v < n_; ++v) {
    auto postings = sets_containing(v);
    if (postings.size() != counts[v]) {
      rep.index_mismatch = true;
      break;
    }
    for (std::uint32_t id : postings) {
      auto mem = members(id);
      if (std::find(mem.begin(), mem.end(), v) == mem.end()) {
        rep.index_mismatch = true;
        break;
      }
    }
  }
  rep.ok = rep.delta_mismatches == 0 && !rep.coverage_mismatch && !rep.index_mismatch;
  return rep;
}

RrCollection RrCollection::from_sets(NodeId n, const std::vector<std::vector<NodeId>>& sets,
                                     const SeedSet& seeds) {
  RrCollection c;
  c.n_ = n;
  for (const auto& s : sets) {
    if (s.empty()) throw ConfigError("rr set must contain its root");
    bool covered = false;
    for (NodeId v : s) {
      if (v >= n) throw ConfigError("rr set member out of range");
      c.pool_.push_back(v);
      if (seeds.node_count() > 0 && seeds.contains(v)) covered = true;
    }
    c.set_off_.push_back(static_cast<std::uint32_t>(c.pool_.size()));
    c.covered_.push_back(covered ? 1 : 0);
    c.truncated_.push_back(0);
  }
  c.rebuild_counters();
  c.build_inverted_index();
  return c;
}

void RrCollection::dump(std::ostream& out) const {
  put_u32(out, kDumpMagic);
  put_u32(out, kDumpVersion);
  put_u32(out, n_);
  put_u32(out, static_cast<std::uint32_t>(theta()));
  for (std::uint64_t i = 0; i < theta(); ++i) {
    auto mem = members(i);
    put_u32(out, static_cast<std::uint32_t>(mem.size()));
    for (NodeId v : mem) put_u32(out, v);
  }
}

RrCollection RrCollection::restore(std::istream& in, const SeedSet& seeds) {
  if (get_u32(in) != kDumpMagic) throw IoError("rr dump: bad magic");
  if (get_u32(in) != kDumpVersion) throw IoError("rr dump: unsupported version");
  NodeId n = get_u32(in);
  std::uint32_t theta = get_u32(in);
  std::vector<std::vector<NodeId>> sets(theta);
  for (std::uint32_t i = 0; i < theta; ++i) {
    std::uint32_t len = get_u32(in);
    sets[i].resize(len);
    for (std::uint32_t j = 0; j < len; ++j) sets[i][j] = get_u32(in);
  }
  return from_sets(n, sets, seeds);
}

RrSet sample_rr_set_from_root(const Graph& g, const SeedSet& seeds, NodeId root,
                              bool truncate, Rng& rng) {
  RrSampler sampler(g, seeds, {});
  auto [covered, truncated] = sampler.grow(root, truncate, rng);
  (void)covered;
  return {root, sampler.queue, truncated};
}

RrSet sample_rr_set(const Graph& g, const SeedSet& seeds, bool truncate, Rng& rng) {
  NodeId root = rng.next_below(g.node_count());
  return sample_rr_set_from_root(g, seeds, root, truncate, rng);
}

class RrBuilder {
 public:
  static RrCollection sample(const Graph& g, const SeedSet& seeds, std::uint64_t master_seed,
                             bool truncate, std::span<const CandidateEdge> added,
                             std::int64_t coverage_target, std::uint64_t cap);
};

RrCollection RrBuilder::sample(const Graph& g, const SeedSet& seeds, std::uint64_t master_seed,
                               bool truncate, std::span<const CandidateEdge> added,
                               std::int64_t coverage_target, std::uint64_t cap) {
  if (seeds.empty()) throw ConfigError("rr sampling: seed set is empty");
  if (g.node_count() == 0) throw ConfigError("rr sampling: empty graph");
  if (cap == 0) throw ConfigError("rr sampling: cap must be >= 1");

  RrCollection c;
  c.n_ = g.node_count();
  RrSampler sampler(g, seeds, added);

  std::uint64_t index = 0;
  // coverage_target < 0 means "sample exactly cap sets".
  while (true) {
    if (coverage_target >= 0 && c.lambda_ >= coverage_target) break;
    if (index >= cap) {
      c.cap_exit_ = coverage_target >= 0;
      break;
    }
    Rng rng(Rng::derive(master_seed, stream::kRrSample, index));
    NodeId root = rng.next_below(g.node_count());
    auto [covered, truncated] = sampler.grow(root, truncate, rng);
    if (c.pool_.size() + sampler.queue.size() > 0xFFFFFFFFull) {
      throw CapacityError("rr collection outgrew its 32-bit member arena");
    }
    c.pool_.insert(c.pool_.end(), sampler.queue.begin(), sampler.queue.end());
    c.set_off_.push_back(static_cast<std::uint32_t>(c.pool_.size()));
    c.covered_.push_back(covered ? 1 : 0);
    c.truncated_.push_back(truncated ? 1 : 0);
    if (covered) c.lambda_ += 1;
    ++index;
  }

  // Marginal array per the uncovered sets only.
  c.delta_.assign(c.n_, 0);
  for (std::uint64_t i = 0; i < c.theta(); ++i) {
    if (!c.covered_[i]) {
      for (NodeId v : c.members(i)) c.delta_[v] += 1;
    }
  }
  c.build_inverted_index();
  return c;
}

RrCollection sample_until_coverage(const Graph& g, const SeedSet& seeds, double threshold,
                                   std::uint64_t cap, std::uint64_t master_seed, bool truncate,
                                   std::span<const CandidateEdge> added) {
  if (!(threshold > 0.0)) throw ConfigError("rr sampling: threshold must be positive");
  auto target = static_cast<std::int64_t>(std::ceil(threshold));
  return RrBuilder::sample(g, seeds, master_seed, truncate, added, target, cap);
}

RrCollection sample_fixed(const Graph& g, const SeedSet& seeds, std::uint64_t count,
                          std::uint64_t master_seed, bool truncate,
                          std::span<const CandidateEdge> added) {
  if (count == 0) throw ConfigError("rr sampling: count must be >= 1");
  return RrBuilder::sample(g, seeds, master_seed, truncate, added, -1, count);
}

std::uint64_t coverage(const RrCollection& coll, std::span<const NodeId> nodes) {
  if (nodes.empty() || coll.theta() == 0) return 0;
  std::vector<std::uint8_t> hit(coll.theta(), 0);
  std::uint64_t count = 0;
  for (NodeId v : nodes) {
    if (v >= coll.node_count()) throw Error("coverage: node id out of range");
    for (std::uint32_t id : coll.sets_containing(v)) {
      if (!hit[id]) {
        hit[id] = 1;
        ++count;
      }
    }
  }
  return count;
}

double estimate_spread(const RrCollection& coll, std::span<const NodeId> nodes) {
  if (coll.theta() == 0) throw Error("estimate_spread: empty collection");
  return static_cast<double>(coll.node_count()) *
         static_cast<double>(coverage(coll, nodes)) / static_cast<double>(coll.theta());
}

}  // namespace ima
