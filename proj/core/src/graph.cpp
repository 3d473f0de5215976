#include "ima/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ima/errors.hpp"
#include "ima/rng.hpp"

namespace ima {

namespace {

std::uint64_t pack_pair(NodeId u, NodeId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::string_view strip(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto arcs = out_arcs(u);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), v,
                             [](const Arc& a, NodeId id) { return a.node < id; });
  return it != arcs.end() && it->node == v;
}

double Graph::global_mean_probability() const {
  if (fwd_arcs_.empty()) return 0.0;
  double sum = 0.0;
  for (const Arc& a : fwd_arcs_) sum += a.prob;
  return sum / static_cast<double>(fwd_arcs_.size());
}

std::optional<NodeId> Graph::dense_id(std::int64_t original) const {
  auto it = dense_ids_.find(original);
  if (it == dense_ids_.end()) return std::nullopt;
  return it->second;
}

void Graph::assign_wic_probabilities() {
  for (Arc& a : rev_arcs_) a.prob = 0.0;  // recomputed below
  for (NodeId v = 0; v < n_; ++v) {
    std::uint32_t deg = in_degree(v);
    if (deg == 0) continue;
    double p = 1.0 / static_cast<double>(deg);
    for (std::uint32_t i = rev_off_[v]; i < rev_off_[v + 1]; ++i) rev_arcs_[i].prob = p;
  }
  for (NodeId u = 0; u < n_; ++u) {
    for (std::uint32_t i = fwd_off_[u]; i < fwd_off_[u + 1]; ++i) {
      fwd_arcs_[i].prob = 1.0 / static_cast<double>(in_degree(fwd_arcs_[i].node));
    }
  }
  fully_weighted_ = true;
}

void Graph::check_consistency() const {
  auto fail = [](const std::string& what) { throw Error("graph consistency: " + what); };
  if (fwd_arcs_.size() != rev_arcs_.size()) fail("arc count mismatch between directions");
  std::vector<std::uint64_t> fwd, rev;
  fwd.reserve(fwd_arcs_.size());
  rev.reserve(rev_arcs_.size());
  for (NodeId u = 0; u < n_; ++u) {
    NodeId prev = 0;
    bool first = true;
    for (const Arc& a : out_arcs(u)) {
      if (a.node >= n_) fail("arc head out of range");
      if (a.node == u) fail("self-loop present");
      if (!first && a.node <= prev) fail("forward adjacency not strictly sorted");
      if (a.prob < 0.0 || a.prob > 1.0) fail("probability out of [0,1]");
      prev = a.node;
      first = false;
      fwd.push_back(pack_pair(u, a.node));
    }
  }
  for (NodeId v = 0; v < n_; ++v) {
    for (const Arc& a : in_arcs(v)) {
      if (a.node >= n_) fail("arc tail out of range");
      rev.push_back(pack_pair(a.node, v));
    }
  }
  std::sort(fwd.begin(), fwd.end());
  std::sort(rev.begin(), rev.end());
  if (fwd != rev) fail("forward and reverse adjacency describe different edge multisets");
}

void GraphBuilder::ensure_nodes(std::int64_t count) {
  for (std::int64_t i = 0; i < count; ++i) intern(i);
}

NodeId GraphBuilder::intern(std::int64_t label) {
  auto [it, inserted] = dense_ids_.try_emplace(label, static_cast<NodeId>(original_ids_.size()));
  if (inserted) original_ids_.push_back(label);
  return it->second;
}

void GraphBuilder::add_edge(std::int64_t u, std::int64_t v, double p, bool has_prob) {
  if (has_prob && (p < 0.0 || p > 1.0)) {
    throw ParseError("edge probability " + std::to_string(p) + " out of [0,1]");
  }
  if (!has_prob) {
    p = 0.0;
    fully_weighted_ = false;
  }
  stats_.lines += 1;
  NodeId du = intern(u);
  NodeId dv = intern(v);
  if (du == dv) {
    stats_.self_loops += 1;
    return;
  }
  edges_.push_back({du, dv, p});
}

Graph GraphBuilder::build() && {
  Graph g;
  g.n_ = static_cast<NodeId>(original_ids_.size());
  g.original_ids_ = std::move(original_ids_);
  g.dense_ids_ = std::move(dense_ids_);
  g.fully_weighted_ = fully_weighted_;
  g.stats_ = stats_;

  // Keep-first dedup, order-stable.
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  std::vector<PendingEdge> kept;
  kept.reserve(edges_.size());
  for (const PendingEdge& e : edges_) {
    if (seen.insert(pack_pair(e.u, e.v)).second) {
      kept.push_back(e);
    } else {
      g.stats_.duplicate_edges += 1;
    }
  }

  g.fwd_off_.assign(g.n_ + 1, 0);
  g.rev_off_.assign(g.n_ + 1, 0);
  for (const PendingEdge& e : kept) {
    g.fwd_off_[e.u + 1] += 1;
    g.rev_off_[e.v + 1] += 1;
  }
  for (NodeId i = 0; i < g.n_; ++i) {
    g.fwd_off_[i + 1] += g.fwd_off_[i];
    g.rev_off_[i + 1] += g.rev_off_[i];
  }
  g.fwd_arcs_.resize(kept.size());
  g.rev_arcs_.resize(kept.size());
  std::vector<std::uint32_t> fpos(g.fwd_off_.begin(), g.fwd_off_.end() - 1);
  std::vector<std::uint32_t> rpos(g.rev_off_.begin(), g.rev_off_.end() - 1);
  for (const PendingEdge& e : kept) {
    g.fwd_arcs_[fpos[e.u]++] = {e.v, e.p};
    g.rev_arcs_[rpos[e.v]++] = {e.u, e.p};
  }
  auto by_node = [](const Arc& a, const Arc& b) { return a.node < b.node; };
  for (NodeId i = 0; i < g.n_; ++i) {
    std::sort(g.fwd_arcs_.begin() + g.fwd_off_[i], g.fwd_arcs_.begin() + g.fwd_off_[i + 1],
              by_node);
    std::sort(g.rev_arcs_.begin() + g.rev_off_[i], g.rev_arcs_.begin() + g.rev_off_[i + 1],
              by_node);
  }
  return g;
}

Graph load_edge_list(std::istream& in, bool directed) {
  GraphBuilder b;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = strip(s);
    if (s.empty()) continue;

    std::int64_t u = 0, v = 0;
    double p = 0.0;
    bool has_prob = false;

    const char* cur = s.data();
    const char* end = s.data() + s.size();
    auto skip_ws = [&] {
      while (cur != end && (*cur == ' ' || *cur == '\t')) ++cur;
    };
    auto bad = [&](const char* what) {
      throw ParseError("line " + std::to_string(lineno) + ": " + what);
    };

    auto r1 = std::from_chars(cur, end, u);
    if (r1.ec != std::errc{}) bad("expected integer source id");
    cur = r1.ptr;
    skip_ws();
    auto r2 = std::from_chars(cur, end, v);
    if (r2.ec != std::errc{}) bad("expected integer target id");
    cur = r2.ptr;
    skip_ws();
    if (cur != end) {
      auto r3 = std::from_chars(cur, end, p);
      if (r3.ec != std::errc{}) bad("expected probability");
      cur = r3.ptr;
      skip_ws();
      if (cur != end) bad("trailing characters");
      if (p < 0.0 || p > 1.0) {
        throw ParseError("line " + std::to_string(lineno) + ": probability out of [0,1]");
      }
      has_prob = true;
    }

    b.add_edge(u, v, p, has_prob);
    if (!directed && u != v) b.add_edge(v, u, p, has_prob);
  }
  return std::move(b).build();
}

Graph load_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  return load_edge_list(in, directed);
}

void save_edge_list(const Graph& g, std::ostream& out) {
  char buf[64];
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const Arc& a : g.out_arcs(u)) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.prob);
      out << g.original_id(u) << ' ' << g.original_id(a.node) << ' ' << buf << '\n';
    }
  }
}

void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write graph file: " + path);
  save_edge_list(g, out);
}

SeedSet::SeedSet(std::vector<NodeId> ids, NodeId node_count) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw ConfigError("duplicate seed id");
  }
  if (!ids_.empty() && ids_.back() >= node_count) {
    throw ConfigError("seed id out of range");
  }
  mask_.assign(node_count, 0);
  for (NodeId v : ids_) mask_[v] = 1;
}

SeedSet SeedSet::from_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open seed file: " + path);
  std::vector<NodeId> ids;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = strip(s);
    if (s.empty()) continue;
    std::int64_t label = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), label);
    if (r.ec != std::errc{}) {
      throw ParseError("seed file line " + std::to_string(lineno) + ": expected integer id");
    }
    auto dense = g.dense_id(label);
    if (!dense) {
      throw ConfigError("seed id " + std::to_string(label) + " not present in graph");
    }
    ids.push_back(*dense);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return SeedSet(std::move(ids), g.node_count());
}

SeedSet SeedSet::with(NodeId v) const {
  std::vector<NodeId> ids(ids_.begin(), ids_.end());
  if (!contains(v)) ids.push_back(v);
  return SeedSet(std::move(ids), node_count());
}

void save_seed_file(const Graph& g, const SeedSet& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write seed file: " + path);
  for (NodeId v : s.ids()) out << g.original_id(v) << '\n';
}

namespace {

struct CandidateProbModel {
  std::vector<double> out_avg;  // NaN when the node has no out-edges
  std::vector<double> in_avg;   // NaN when the node has no in-edges
  double global_mean;

  explicit CandidateProbModel(const Graph& g) : global_mean(g.global_mean_probability()) {
    NodeId n = g.node_count();
    out_avg.assign(n, std::nan(""));
    in_avg.assign(n, std::nan(""));
    for (NodeId v = 0; v < n; ++v) {
      auto outs = g.out_arcs(v);
      if (!outs.empty()) {
        double s = 0.0;
        for (const Arc& a : outs) s += a.prob;
        out_avg[v] = s / static_cast<double>(outs.size());
      }
      auto ins = g.in_arcs(v);
      if (!ins.empty()) {
        double s = 0.0;
        for (const Arc& a : ins) s += a.prob;
        in_avg[v] = s / static_cast<double>(ins.size());
      }
    }
  }

  double prob(NodeId u, NodeId v) const {
    double a = std::isnan(out_avg[u]) ? global_mean : out_avg[u];
    double b = std::isnan(in_avg[v]) ? global_mean : in_avg[v];
    return 0.5 * (a + b);
  }
};

}  // namespace

std::uint64_t candidate_pool_size(const Graph& g, const SeedSet& seeds) {
  std::uint64_t pool = 0;
  NodeId n = g.node_count();
  for (NodeId u : seeds.ids()) {
    std::uint64_t existing_to_nonseed = 0;
    for (const Arc& a : g.out_arcs(u)) {
      if (!seeds.contains(a.node)) ++existing_to_nonseed;
    }
    pool += (n - seeds.size()) - existing_to_nonseed;
  }
  return pool;
}

std::vector<CandidateEdge> generate_candidates(const Graph& g, const SeedSet& seeds,
                                               CandidateMode mode, std::uint64_t limit,
                                               std::uint64_t rng_seed, bool* clamped) {
  if (seeds.empty()) throw ConfigError("generate_candidates: seed set is empty");
  if (clamped) *clamped = false;

  CandidateProbModel model(g);
  NodeId n = g.node_count();
  std::vector<CandidateEdge> all;

  auto emit_all = [&] {
    for (NodeId u : seeds.ids()) {
      for (NodeId v = 0; v < n; ++v) {
        if (seeds.contains(v) || g.has_edge(u, v)) continue;
        all.push_back({u, v, model.prob(u, v)});
      }
    }
  };

  if (mode == CandidateMode::kAll) {
    emit_all();
    return all;
  }

  std::uint64_t pool = candidate_pool_size(g, seeds);
  if (limit >= pool) {
    if (clamped) *clamped = true;
    emit_all();
    return all;
  }

  Rng rng(Rng::derive(rng_seed, stream::kCandidateGen));
  if (limit * 2 >= pool) {
    // Dense request: enumerate and take a Fisher-Yates prefix.
    emit_all();
    for (std::uint64_t i = 0; i < limit; ++i) {
      std::uint64_t j = i + rng.next_below(static_cast<std::uint32_t>(all.size() - i));
      std::swap(all[i], all[j]);
    }
    all.resize(limit);
  } else {
    // Sparse request: rejection-sample (seed, node) pairs.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(limit * 2);
    auto seed_ids = seeds.ids();
    while (all.size() < limit) {
      NodeId u = seed_ids[rng.next_below(static_cast<std::uint32_t>(seed_ids.size()))];
      NodeId v = rng.next_below(n);
      if (seeds.contains(v) || g.has_edge(u, v)) continue;
      if (!chosen.insert((static_cast<std::uint64_t>(u) << 32) | v).second) continue;
      all.push_back({u, v, model.prob(u, v)});
    }
  }
  std::sort(all.begin(), all.end(),
            [](const CandidateEdge& a, const CandidateEdge& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
  return all;
}

void validate_candidates(const Graph& g, const SeedSet& seeds,
                         std::span<const CandidateEdge> candidates) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(candidates.size() * 2);
  for (const CandidateEdge& e : candidates) {
    if (e.u >= g.node_count() || e.v >= g.node_count()) {
      throw ConfigError("candidate endpoint out of range");
    }
    if (!seeds.contains(e.u)) throw ConfigError("candidate source is not a seed");
    if (seeds.contains(e.v)) throw ConfigError("candidate target is a seed");
    if (e.u == e.v) throw ConfigError("candidate is a self-loop");
    if (g.has_edge(e.u, e.v)) throw ConfigError("candidate duplicates an existing edge");
    if (e.p < 0.0 || e.p > 1.0) throw ConfigError("candidate probability out of [0,1]");
    if (!seen.insert(pack_pair(e.u, e.v)).second) {
      throw ConfigError("duplicate candidate pair");
    }
  }
}

std::vector<CandidateEdge> load_candidate_file(const std::string& path, const Graph& g,
                                               const SeedSet& seeds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open candidate file: " + path);
  std::vector<CandidateEdge> out;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = strip(s);
    if (s.empty()) continue;
    std::istringstream ls{std::string(s)};
    std::int64_t lu, lv;
    double p;
    std::string extra;
    if (!(ls >> lu >> lv >> p) || (ls >> extra)) {
      throw ParseError("candidate file line " + std::to_string(lineno) +
                       ": expected 'u v p'");
    }
    auto du = g.dense_id(lu);
    auto dv = g.dense_id(lv);
    if (!du || !dv) {
      throw ConfigError("candidate file line " + std::to_string(lineno) +
                        ": endpoint not present in graph");
    }
    out.push_back({*du, *dv, p});
  }
  validate_candidates(g, seeds, out);
  return out;
}

void save_candidate_file(const Graph& g, std::span<const CandidateEdge> candidates,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write candidate file: " + path);
  char buf[64];
  for (const CandidateEdge& e : candidates) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.p);
    out << g.original_id(e.u) << ' ' << g.original_id(e.v) << ' ' << buf << '\n';
  }
}

}  // namespace ima
