#include "ima/baselines.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "ima/errors.hpp"
#include "ima/solver.hpp"

namespace ima {

namespace {

bool lex_less(const CandidateEdge& a, const CandidateEdge& b) {
  return std::pair(a.u, a.v) < std::pair(b.u, b.v);
}

}  // namespace

const char* baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kRand: return "RAND";
    case BaselineKind::kOutdeg: return "OUTDEG";
    case BaselineKind::kProb: return "PROB";
    case BaselineKind::kSinf: return "SINF";
    case BaselineKind::kAisNoProb: return "AIS_NO_PROB";
    case BaselineKind::kAisNoUpdate: return "AIS_NO_UPDATE";
    case BaselineKind::kMcGreedy: return "MC_GREEDY";
  }
  return "UNKNOWN";
}

BaselineResult rand_select(std::span<const CandidateEdge> candidates, std::uint32_t k,
                           Rng& rng) {
  BaselineResult res;
  std::vector<CandidateEdge> pool(candidates.begin(), candidates.end());
  if (k >= pool.size()) {
    res.edges = std::move(pool);
    res.short_selection = k > res.edges.size();
    return res;
  }
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t j = i + rng.next_below(static_cast<std::uint32_t>(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  res.edges = std::move(pool);
  return res;
}

BaselineResult outdeg_select(const Graph& g, std::span<const CandidateEdge> candidates,
                             std::uint32_t k) {
  BaselineResult res;
  std::vector<CandidateEdge> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end(), [&](const CandidateEdge& a, const CandidateEdge& b) {
    std::uint32_t da = g.out_degree(a.v), db = g.out_degree(b.v);
    if (da != db) return da > db;
    return lex_less(a, b);
  });
  if (pool.size() > k) pool.resize(k);
  res.short_selection = pool.size() < k;
  res.edges = std::move(pool);
  return res;
}

BaselineResult prob_select(std::span<const CandidateEdge> candidates, std::uint32_t k) {
  BaselineResult res;
  std::vector<CandidateEdge> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end(), [](const CandidateEdge& a, const CandidateEdge& b) {
    if (a.p != b.p) return a.p > b.p;
    return lex_less(a, b);
  });
  if (pool.size() > k) pool.resize(k);
  res.short_selection = pool.size() < k;
  res.edges = std::move(pool);
  return res;
}

BaselineResult sinf_select(const RrCollection& coll,
                           std::span<const CandidateEdge> candidates, std::uint32_t k) {
  BaselineResult res;
  // Best incident edge per distinct target: highest p, then smaller u.
  std::vector<std::pair<NodeId, CandidateEdge>> best;
  for (const CandidateEdge& e : candidates) {
    auto it = std::find_if(best.begin(), best.end(),
                           [&](const auto& kv) { return kv.first == e.v; });
    if (it == best.end()) {
      best.emplace_back(e.v, e);
    } else if (e.p > it->second.p || (e.p == it->second.p && e.u < it->second.u)) {
      it->second = e;
    }
  }
  std::sort(best.begin(), best.end(), [&](const auto& a, const auto& b) {
    std::int64_t da = coll.marginal(a.first), db = coll.marginal(b.first);
    if (da != db) return da > db;
    return a.first < b.first;
  });
  for (std::uint32_t i = 0; i < k && i < best.size(); ++i) res.edges.push_back(best[i].second);
  res.short_selection = res.edges.size() < k;
  return res;
}

BaselineResult ais_no_prob(RrCollection& coll, std::span<const CandidateEdge> candidates,
                           std::uint32_t k, std::uint64_t master_seed) {
  BaselineResult res;
  std::vector<CandidateEdge> pool(candidates.begin(), candidates.end());
  res.short_selection = pool.size() < k;
  for (std::uint32_t step = 0; step < k && !pool.empty(); ++step) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
      // Delta desc, target asc, p desc, source asc.
      auto key = [&](const CandidateEdge& e) {
        return std::tuple(-coll.marginal(e.v), e.v, -e.p, e.u);
      };
      if (key(pool[i]) < key(pool[best])) best = i;
    }
    CandidateEdge chosen = pool[best];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    res.edges.push_back(chosen);
    soft_update(coll, chosen, master_seed, step);
  }
  return res;
}

BaselineResult ais_no_update(const RrCollection& coll,
                             std::span<const CandidateEdge> candidates, std::uint32_t k) {
  BaselineResult res;
  std::vector<CandidateEdge> pool(candidates.begin(), candidates.end());
  res.short_selection = pool.size() < k;
  for (std::uint32_t step = 0; step < k && !pool.empty(); ++step) {
    std::size_t best = 0;
    double best_score = pool[0].p * static_cast<double>(coll.marginal(pool[0].v));
    for (std::size_t i = 1; i < pool.size(); ++i) {
      double score = pool[i].p * static_cast<double>(coll.marginal(pool[i].v));
      if (score > best_score || (score == best_score && lex_less(pool[i], pool[best]))) {
        best_score = score;
        best = i;
      }
    }
    res.edges.push_back(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return res;
}

WorldEnsemble::WorldEnsemble(const Graph& g, const SeedSet& seeds,
                             std::span<const CandidateEdge> pool, std::uint64_t r,
                             std::uint64_t master_seed)
    : g_(g), pool_(pool.begin(), pool.end()), r_(r), m_(g.edge_count()) {
  if (r == 0) throw ConfigError("world ensemble: r must be >= 1");
  const NodeId n = g.node_count();
  base_words_ = (m_ + 63) / 64;
  cand_words_ = (pool_.size() + 63) / 64;
  node_words_ = (n + 63) / 64;
  base_bits_.assign(r_ * base_words_, 0);
  cand_bits_.assign(r_ * cand_words_, 0);
  active_bits_.assign(r_ * node_words_, 0);

  edge_index_offset_.assign(n + 1, 0);
  for (NodeId u = 0; u < n; ++u) {
    edge_index_offset_[u + 1] = edge_index_offset_[u] + g.out_degree(u);
  }

  scratch_mark_.assign(n, 0);
  stack_.reserve(n);

  // One coin per base edge and per candidate edge per world; the stream is
  // keyed by world index alone so a world can be regenerated independently.
  for (std::uint64_t w = 0; w < r_; ++w) {
    Rng rng(Rng::derive(master_seed, stream::kWorldSample, w));
    std::uint64_t e = 0;
    for (NodeId u = 0; u < n; ++u) {
      for (const Arc& a : g.out_arcs(u)) {
        if (rng.next_unit() < a.prob) {
          base_bits_[w * base_words_ + e / 64] |= std::uint64_t{1} << (e % 64);
        }
        ++e;
      }
    }
    for (std::size_t c = 0; c < pool_.size(); ++c) {
      if (rng.next_unit() < pool_[c].p) {
        cand_bits_[w * cand_words_ + c / 64] |= std::uint64_t{1} << (c % 64);
      }
    }
  }

  // Committed activation starts as the closure of the seeds.
  for (std::uint64_t w = 0; w < r_; ++w) {
    for (NodeId s : seeds.ids()) {
      if (!active(w, s)) {
        active_bits_[w * node_words_ + s / 64] |= std::uint64_t{1} << (s % 64);
        total_active_ += 1;
        total_active_ += bfs(w, s, true);
      }
    }
  }
}

bool WorldEnsemble::base_live(std::uint64_t world, std::uint64_t edge) const {
  return base_bits_[world * base_words_ + edge / 64] >> (edge % 64) & 1;
}

bool WorldEnsemble::cand_live(std::uint64_t world, std::size_t cand) const {
  return cand_bits_[world * cand_words_ + cand / 64] >> (cand % 64) & 1;
}

bool WorldEnsemble::active(std::uint64_t world, NodeId v) const {
  return active_bits_[world * node_words_ + v / 64] >> (v % 64) & 1;
}

// Walks live base out-edges from `start` (already counted by the caller),
// returning the number of new nodes found beyond it. Candidate edges never
// fire here: their sources are seeds, active from the start.
std::int64_t WorldEnsemble::bfs(std::uint64_t world, NodeId start, bool commit_mode) {
  std::int64_t found = 0;
  stack_.clear();
  stack_.push_back(start);
  if (!commit_mode) {
    ++scratch_epoch_;
    scratch_mark_[start] = scratch_epoch_;
  }
  while (!stack_.empty()) {
    NodeId u = stack_.back();
    stack_.pop_back();
    std::uint64_t e = edge_index_offset_[u];
    for (const Arc& a : g_.out_arcs(u)) {
      if (base_live(world, e)) {
        NodeId v = a.node;
        bool fresh;
        if (commit_mode) {
          fresh = !active(world, v);
          if (fresh) {
            active_bits_[world * node_words_ + v / 64] |= std::uint64_t{1} << (v % 64);
          }
        } else {
          fresh = !active(world, v) && scratch_mark_[v] != scratch_epoch_;
          if (fresh) scratch_mark_[v] = scratch_epoch_;
        }
        if (fresh) {
          ++found;
          stack_.push_back(v);
        }
      }
      ++e;
    }
  }
  return found;
}

std::int64_t WorldEnsemble::marginal_total(std::size_t cand) {
  const NodeId v = pool_[cand].v;
  std::int64_t total = 0;
  for (std::uint64_t w = 0; w < r_; ++w) {
    if (!cand_live(w, cand) || active(w, v)) continue;
    total += 1 + bfs(w, v, false);
  }
  return total;
}

void WorldEnsemble::commit(std::size_t cand) {
  const NodeId v = pool_[cand].v;
  for (std::uint64_t w = 0; w < r_; ++w) {
    if (!cand_live(w, cand) || active(w, v)) continue;
    active_bits_[w * node_words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    total_active_ += 1;
    total_active_ += bfs(w, v, true);
  }
}

double WorldEnsemble::estimate() const {
  return static_cast<double>(total_active_) / static_cast<double>(r_);
}

BaselineResult mc_greedy(const Graph& g, const SeedSet& seeds,
                         std::span<const CandidateEdge> candidates, std::uint32_t k,
                         std::uint64_t r, std::uint64_t master_seed) {
  if (r == 0) throw ConfigError("mc_greedy: r must be >= 1");
  validate_candidates(g, seeds, candidates);

  BaselineResult res;
  WorldEnsemble worlds(g, seeds, candidates, r, master_seed);

  struct Entry {
    std::int64_t gain;
    std::uint32_t idx;
    std::int32_t eval_round;
  };
  // Pop order: gain desc, then (u, v) asc. Stale gains are upper bounds
  // (the fixed-world objective is submodular), so a freshly evaluated top
  // entry is the exact argmax, ties included.
  auto worse = [&](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return lex_less(candidates[b.idx], candidates[a.idx]);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  for (std::uint32_t i = 0; i < candidates.size(); ++i) {
    queue.push({std::numeric_limits<std::int64_t>::max(), i, -1});
  }

  for (std::uint32_t round = 0; round < k && !queue.empty();) {
    Entry top = queue.top();
    queue.pop();
    if (top.eval_round == static_cast<std::int32_t>(round)) {
      worlds.commit(top.idx);
      res.edges.push_back(candidates[top.idx]);
      ++round;
    } else {
      top.gain = worlds.marginal_total(top.idx);
      top.eval_round = static_cast<std::int32_t>(round);
      queue.push(top);
    }
  }
  res.short_selection = res.edges.size() < k;
  return res;
}

}  // namespace ima
