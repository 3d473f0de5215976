#include "ima/instance_gen.hpp"

#include <algorithm>
#include <set>

#include "ima/errors.hpp"
#include "ima/rng.hpp"

namespace ima {

namespace {

// Pre-registers 0..n-1 so dense ids match the construction labels.
Graph graph_from_edges(NodeId n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  GraphBuilder b;
  b.ensure_nodes(n);
  for (auto [u, v, p] : edges) b.add_edge(u, v, p, true);
  return std::move(b).build();
}

void check_params(const std::map<std::string, double>& params,
                  const std::set<std::string>& known) {
  for (const auto& [key, value] : params) {
    if (!known.contains(key)) throw ConfigError("unknown instance parameter: " + key);
  }
}

double param(const std::map<std::string, double>& params, const std::string& key,
             double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

InstanceKind parse_instance_kind(const std::string& name) {
  if (name == "path") return InstanceKind::kPath;
  if (name == "star") return InstanceKind::kStar;
  if (name == "erdos_renyi") return InstanceKind::kErdosRenyi;
  if (name == "two_cluster") return InstanceKind::kTwoCluster;
  throw ConfigError("unknown instance kind: " + name);
}

Instance make_path(std::uint32_t n, double p) {
  if (n < 2) throw ConfigError("path instance needs n >= 2");
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, p);
  Instance inst;
  inst.graph = graph_from_edges(n, edges);
  inst.seed_ids = {0};
  inst.candidates = generate_candidates(inst.graph, inst.seeds(), CandidateMode::kAll, 0, 0);
  return inst;
}

Instance make_star(std::uint32_t n, double p) {
  if (n < 2) throw ConfigError("star instance needs n >= 2");
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId i = 1; i < n; ++i) edges.emplace_back(0, i, p);
  Instance inst;
  inst.graph = graph_from_edges(n, edges);
  inst.seed_ids = {0};
  inst.candidates = generate_candidates(inst.graph, inst.seeds(), CandidateMode::kAll, 0, 0);
  return inst;
}

Instance make_erdos_renyi(std::uint32_t n, double p_edge, std::uint64_t seed) {
  if (n < 2) throw ConfigError("erdos_renyi instance needs n >= 2");
  if (!(p_edge > 0.0 && p_edge <= 1.0)) throw ConfigError("p_edge must lie in (0,1]");
  Rng rng(Rng::derive(seed, stream::kInstanceGen));
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && rng.next_unit() < p_edge) edges.emplace_back(u, v, 0.0);
    }
  }
  if (edges.empty()) edges.emplace_back(0, 1, 0.0);  // keep the instance non-degenerate
  Instance inst;
  inst.graph = graph_from_edges(n, edges);
  inst.graph.assign_wic_probabilities();

  NodeId best = 0;
  for (NodeId v = 1; v < inst.graph.node_count(); ++v) {
    if (inst.graph.out_degree(v) > inst.graph.out_degree(best)) best = v;
  }
  inst.seed_ids = {best};

  std::uint64_t pool = candidate_pool_size(inst.graph, inst.seeds());
  CandidateMode mode = pool > 10000 ? CandidateMode::kSample : CandidateMode::kAll;
  inst.candidates =
      generate_candidates(inst.graph, inst.seeds(), mode, 10000, Rng::derive(seed, 1));
  return inst;
}

Instance make_two_cluster(std::uint32_t fan, std::uint32_t tail, std::uint32_t decoys) {
  if (fan < 1 || tail < 1 || decoys < 1) {
    throw ConfigError("two_cluster needs fan, tail, decoys >= 1");
  }
  // Layout: s0, fan nodes, hub, decoys, per-decoy sinks, gateway, tail chain.
  NodeId next = 0;
  NodeId s0 = next++;
  std::vector<NodeId> fan_nodes;
  for (std::uint32_t i = 0; i < fan; ++i) fan_nodes.push_back(next++);
  NodeId hub = next++;
  std::vector<NodeId> decoy_nodes;
  for (std::uint32_t i = 0; i < decoys; ++i) decoy_nodes.push_back(next++);
  std::vector<NodeId> sink_nodes;
  for (std::uint32_t i = 0; i < decoys; ++i) sink_nodes.push_back(next++);
  NodeId gateway = next++;
  std::vector<NodeId> tail_nodes;
  for (std::uint32_t i = 0; i < tail; ++i) tail_nodes.push_back(next++);

  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId f : fan_nodes) {
    edges.emplace_back(s0, f, 0.9);
    edges.emplace_back(hub, f, 0.9);
  }
  for (std::uint32_t i = 0; i < decoys; ++i) {
    edges.emplace_back(decoy_nodes[i], sink_nodes[i], 1.0);
  }
  NodeId prev = gateway;
  for (NodeId t : tail_nodes) {
    edges.emplace_back(prev, t, 1.0);
    prev = t;
  }

  Instance inst;
  inst.graph = graph_from_edges(next, edges);
  inst.seed_ids = {s0};
  inst.candidates.push_back({s0, hub, 0.8});
  for (NodeId d : decoy_nodes) inst.candidates.push_back({s0, d, 0.95});
  inst.candidates.push_back({s0, gateway, 0.5});
  std::sort(inst.candidates.begin(), inst.candidates.end(),
            [](const CandidateEdge& a, const CandidateEdge& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
  return inst;
}

Instance make_instance(InstanceKind kind, const std::map<std::string, double>& params,
                       std::uint64_t seed) {
  switch (kind) {
    case InstanceKind::kPath:
      check_params(params, {"n", "p"});
      return make_path(static_cast<std::uint32_t>(param(params, "n", 3)),
                       param(params, "p", 1.0));
    case InstanceKind::kStar:
      check_params(params, {"n", "p"});
      return make_star(static_cast<std::uint32_t>(param(params, "n", 4)),
                       param(params, "p", 1.0));
    case InstanceKind::kErdosRenyi:
      check_params(params, {"n", "p"});
      return make_erdos_renyi(static_cast<std::uint32_t>(param(params, "n", 10)),
                              param(params, "p", 0.2), seed);
    case InstanceKind::kTwoCluster:
      check_params(params, {"fan", "tail", "decoys"});
      return make_two_cluster(static_cast<std::uint32_t>(param(params, "fan", 4)),
                              static_cast<std::uint32_t>(param(params, "tail", 5)),
                              static_cast<std::uint32_t>(param(params, "decoys", 2)));
  }
  throw ConfigError("unknown instance kind");
}

InstanceFiles gen_instance(InstanceKind kind, const std::map<std::string, double>& params,
                           std::uint64_t seed, const std::string& prefix) {
  Instance inst = make_instance(kind, params, seed);
  InstanceFiles files{prefix + ".edges", prefix + ".seeds", prefix + ".cands"};
  save_edge_list_file(inst.graph, files.edges);
  save_seed_file(inst.graph, inst.seeds(), files.seeds);
  save_candidate_file(inst.graph, inst.candidates, files.candidates);
  return files;
}

}  // namespace ima
