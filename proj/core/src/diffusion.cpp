#include "ima/diffusion.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "ima/errors.hpp"

namespace ima {

Simulator::Simulator(const Graph& g, std::span<const CandidateEdge> added)
    : g_(g), mark_(g.node_count(), 0) {
  for (const CandidateEdge& e : added) extra_out_[e.u].push_back({e.v, e.p});
  queue_.reserve(g.node_count());
}

std::uint32_t Simulator::run(const SeedSet& seeds, Rng& rng) {
  ++epoch_;
  queue_.clear();
  for (NodeId s : seeds.ids()) {
    mark_[s] = epoch_;
    queue_.push_back(s);
  }
  // Each newly activated node gets one coin per out-edge.
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    NodeId u = queue_[head];
    for (const Arc& a : g_.out_arcs(u)) {
      if (mark_[a.node] != epoch_ && rng.next_unit() < a.prob) {
        mark_[a.node] = epoch_;
        queue_.push_back(a.node);
      }
    }
    if (!extra_out_.empty()) {
      auto it = extra_out_.find(u);
      if (it != extra_out_.end()) {
        for (const Arc& a : it->second) {
          if (mark_[a.node] != epoch_ && rng.next_unit() < a.prob) {
            mark_[a.node] = epoch_;
            queue_.push_back(a.node);
          }
        }
      }
    }
  }
  return static_cast<std::uint32_t>(queue_.size());
}

std::uint32_t simulate_ic(const Graph& g, std::span<const CandidateEdge> added,
                          const SeedSet& seeds, Rng& rng) {
  Simulator sim(g, added);
  return sim.run(seeds, rng);
}

SpreadEstimate monte_carlo_spread(const Graph& g, std::span<const CandidateEdge> added,
                                  const SeedSet& seeds, std::uint64_t r,
                                  std::uint64_t master_seed) {
  if (r == 0) throw ConfigError("monte_carlo_spread: r must be >= 1");
  Simulator sim(g, added);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < r; ++i) {
    Rng rng(Rng::derive(master_seed, stream::kSimulation, i));
    auto count = static_cast<double>(sim.run(seeds, rng));
    sum += count;
    sumsq += count * count;
  }
  SpreadEstimate est;
  est.value = sum / static_cast<double>(r);
  est.sample_count = r;
  if (r >= 2) {
    double var = (sumsq - sum * sum / static_cast<double>(r)) / static_cast<double>(r - 1);
    if (var < 0.0) var = 0.0;
    est.half_width = 1.96 * std::sqrt(var / static_cast<double>(r));
  }
  return est;
}

namespace {

struct StochasticEdge {
  NodeId u, v;
  double p;
};

struct ExactInstance {
  NodeId n;
  std::vector<std::uint64_t> det_adj;  // p == 1 edges, fixed live
  std::vector<StochasticEdge> stochastic;

  ExactInstance(const Graph& g, std::span<const CandidateEdge> added) : n(g.node_count()) {
    if (n > kMaxExactNodes) {
      throw CapacityError("exact_spread: node count " + std::to_string(n) +
                          " exceeds the bound of " + std::to_string(kMaxExactNodes));
    }
    det_adj.assign(n, 0);
    auto classify = [&](NodeId u, NodeId v, double p) {
      if (p <= 0.0) return;
      if (p >= 1.0) {
        det_adj[u] |= std::uint64_t{1} << v;
      } else {
        stochastic.push_back({u, v, p});
      }
    };
    for (NodeId u = 0; u < n; ++u) {
      for (const Arc& a : g.out_arcs(u)) classify(u, a.node, a.prob);
    }
    for (const CandidateEdge& e : added) classify(e.u, e.v, e.p);
    if (stochastic.size() > static_cast<std::size_t>(kMaxStochasticEdges)) {
      throw CapacityError("exact_spread: " + std::to_string(stochastic.size()) +
                          " stochastic edges exceed the bound of " +
                          std::to_string(kMaxStochasticEdges));
    }
  }
};

std::uint32_t reachable_count(const std::vector<std::uint64_t>& adj, std::uint64_t seed_mask) {
  std::uint64_t reached = seed_mask;
  std::uint64_t frontier = seed_mask;
  while (frontier != 0) {
    std::uint64_t next = 0;
    std::uint64_t f = frontier;
    while (f != 0) {
      int u = std::countr_zero(f);
      f &= f - 1;
      next |= adj[u];
    }
    frontier = next & ~reached;
    reached |= frontier;
  }
  return static_cast<std::uint32_t>(std::popcount(reached));
}

}  // namespace

double exact_spread(const Graph& g, std::span<const CandidateEdge> added,
                    const SeedSet& seeds) {
  ExactInstance inst(g, added);
  std::uint64_t seed_mask = 0;
  for (NodeId s : seeds.ids()) seed_mask |= std::uint64_t{1} << s;

  const int ms = static_cast<int>(inst.stochastic.size());
  const int lo_bits = ms / 2;
  const int hi_bits = ms - lo_bits;

  // World probabilities factor into the two halves of the edge list.
  auto half_table = [&](int offset, int bits) {
    std::vector<double> table(std::size_t{1} << bits);
    for (std::uint64_t m = 0; m < table.size(); ++m) {
      double p = 1.0;
      for (int i = 0; i < bits; ++i) {
        const StochasticEdge& e = inst.stochastic[offset + i];
        p *= (m >> i & 1) ? e.p : (1.0 - e.p);
      }
      table[m] = p;
    }
    return table;
  };
  std::vector<double> lo_prob = half_table(0, lo_bits);
  std::vector<double> hi_prob = half_table(lo_bits, hi_bits);

  std::vector<std::uint64_t> adj(inst.n);
  double total = 0.0;
  const std::uint64_t worlds = std::uint64_t{1} << ms;
  for (std::uint64_t mask = 0; mask < worlds; ++mask) {
    adj.assign(inst.det_adj.begin(), inst.det_adj.end());
    for (int i = 0; i < ms; ++i) {
      if (mask >> i & 1) {
        const StochasticEdge& e = inst.stochastic[i];
        adj[e.u] |= std::uint64_t{1} << e.v;
      }
    }
    double pw = lo_prob[mask & ((std::uint64_t{1} << lo_bits) - 1)] * hi_prob[mask >> lo_bits];
    total += pw * reachable_count(adj, seed_mask);
  }
  return total;
}

std::pair<double, double> exact_augmented_identity_check(const Graph& g,
                                                         std::span<const CandidateEdge> added,
                                                         const SeedSet& seeds,
                                                         const CandidateEdge& e) {
  std::vector<CandidateEdge> with_e(added.begin(), added.end());
  with_e.push_back(e);
  double lhs = exact_spread(g, with_e, seeds);
  double rhs = e.p * exact_spread(g, added, seeds.with(e.v)) +
               (1.0 - e.p) * exact_spread(g, added, seeds);
  return {lhs, rhs};
}

}  // namespace ima
