#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ima/errors.hpp"
#include "ima/graph.hpp"
#include "test_util.hpp"

using namespace ima;

namespace {

Graph from_text(const std::string& text, bool directed = true) {
  std::istringstream in(text);
  return load_edge_list(in, directed);
}

std::multiset<std::tuple<std::int64_t, std::int64_t, double>> edge_multiset(const Graph& g) {
  std::multiset<std::tuple<std::int64_t, std::int64_t, double>> out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const Arc& a : g.out_arcs(u)) {
      out.insert({g.original_id(u), g.original_id(a.node), a.prob});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("load_edge_list basic directed construction") {
  Graph g = from_text("0 1\n1 2\n");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  REQUIRE(g.out_arcs(0).size() == 1);
  CHECK(g.out_arcs(0)[0].node == 1);
  CHECK_FALSE(g.fully_weighted());
  g.check_consistency();
}

TEST_CASE("load_edge_list keeps the first duplicate") {
  Graph g = from_text("0 1 0.5\n0 1 0.9\n");
  CHECK(g.edge_count() == 1);
  CHECK(g.out_arcs(0)[0].prob == doctest::Approx(0.5));
  CHECK(g.load_stats().duplicate_edges == 1);
}

TEST_CASE("load_edge_list drops self-loops") {
  Graph g = from_text("0 0 1.0\n");
  CHECK(g.edge_count() == 0);
  CHECK(g.load_stats().self_loops == 1);
}

TEST_CASE("load_edge_list undirected materializes both arcs") {
  Graph g = from_text("0 1 0.25\n", /*directed=*/false);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
}

TEST_CASE("load_edge_list comments and blank lines") {
  Graph g = from_text("# header\n0 1 0.5 # trailing comment\n\n  \n1 2 0.5\n");
  CHECK(g.edge_count() == 2);
}

TEST_CASE("load_edge_list reports malformed line numbers") {
  CHECK_THROWS_WITH_AS(from_text("0 1\nnope\n"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(from_text("0 1 1.5\n"), ParseError);
  CHECK_THROWS_AS(from_text("0\n"), ParseError);
}

TEST_CASE("original ids are preserved through densification") {
  Graph g = from_text("42 7\n7 100\n");
  CHECK(g.node_count() == 3);
  CHECK(g.original_id(0) == 42);
  CHECK(g.original_id(1) == 7);
  CHECK(g.original_id(2) == 100);
  CHECK(g.dense_id(100).value() == 2);
  CHECK_FALSE(g.dense_id(5).has_value());
}

TEST_CASE("assign_wic_probabilities uses in-degree") {
  SUBCASE("two in-edges") {
    Graph g = test::make_graph(3, {{0, 2, 0.0}, {1, 2, 0.0}});
    g.assign_wic_probabilities();
    CHECK(g.out_arcs(0)[0].prob == doctest::Approx(0.5));
    CHECK(g.out_arcs(1)[0].prob == doctest::Approx(0.5));
  }
  SUBCASE("single edge gets 1.0") {
    Graph g = test::make_graph(2, {{0, 1, 0.3}});
    g.assign_wic_probabilities();
    CHECK(g.out_arcs(0)[0].prob == doctest::Approx(1.0));
  }
  SUBCASE("four edges into one node get 0.25") {
    Graph g = test::make_graph(10,
                               {{0, 9, 0.0}, {1, 9, 0.0}, {2, 9, 0.0}, {3, 9, 0.0}});
    g.assign_wic_probabilities();
    for (NodeId u = 0; u < 4; ++u) CHECK(g.out_arcs(u)[0].prob == doctest::Approx(0.25));
  }
}

TEST_CASE("wic probabilities into any node sum to one") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = test::random_oracle_instance(rng);
    Graph g = inst.graph;
    g.assign_wic_probabilities();
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.in_degree(v) == 0) continue;
      double sum = 0.0;
      for (const Arc& a : g.in_arcs(v)) sum += a.prob;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("save/load round-trips the deduped edge multiset") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = test::random_oracle_instance(rng);
    std::ostringstream out;
    save_edge_list(inst.graph, out);
    Graph back = from_text(out.str());
    CHECK(edge_multiset(inst.graph) == edge_multiset(back));
    CHECK(back.edge_count() == inst.graph.edge_count());
  }
}

TEST_CASE("generate_candidates all mode excludes seeds, loops, existing edges") {
  // E = {a->b}, S = {a}, V = {a,b,c}: only (a,c) remains.
  Graph g = test::make_graph(3, {{0, 1, 1.0}});
  SeedSet seeds({0}, 3);
  auto cands = generate_candidates(g, seeds, CandidateMode::kAll, 0, 0);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].u == 0);
  CHECK(cands[0].v == 2);
}

TEST_CASE("candidate probability is the mean of the two side averages") {
  // out_avg(0) = 0.5 via {0.4, 0.6}; in_avg(3) = 0.25 via one in-edge.
  Graph g = test::make_graph(5, {{0, 1, 0.4}, {0, 2, 0.6}, {4, 3, 0.25}});
  SeedSet seeds({0}, 5);
  auto cands = generate_candidates(g, seeds, CandidateMode::kAll, 0, 0);
  for (const CandidateEdge& e : cands) {
    if (e.v == 3) CHECK(e.p == doctest::Approx(0.375));
  }
}

TEST_CASE("candidate probability falls back to the global mean") {
  // Graph {a->x, p=1}; candidate (a,y): y has no in-edges, global mean = 1.
  Graph g = test::make_graph(3, {{0, 1, 1.0}});
  SeedSet seeds({0}, 3);
  auto cands = generate_candidates(g, seeds, CandidateMode::kAll, 0, 0);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].p == doctest::Approx(1.0));
}

TEST_CASE("generate_candidates pool size formula") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = test::random_oracle_instance(rng);
    SeedSet seeds = inst.seeds();
    auto cands = generate_candidates(inst.graph, seeds, CandidateMode::kAll, 0, 0);
    std::uint64_t existing = 0;
    for (NodeId u : seeds.ids()) {
      for (const Arc& a : inst.graph.out_arcs(u)) {
        if (!seeds.contains(a.node)) ++existing;
      }
    }
    std::uint64_t expected =
        seeds.size() * (inst.graph.node_count() - seeds.size()) - existing;
    CHECK(cands.size() == expected);
    CHECK(candidate_pool_size(inst.graph, seeds) == expected);
    CHECK_NOTHROW(validate_candidates(inst.graph, seeds, cands));
  }
}

TEST_CASE("generate_candidates sample mode") {
  Rng rng(5);
  auto inst = test::random_oracle_instance(rng, 8, 10, 2, 6);
  SeedSet seeds = inst.seeds();
  std::uint64_t pool = candidate_pool_size(inst.graph, seeds);
  if (pool < 3) return;

  SUBCASE("draws the requested count without replacement") {
    auto cands = generate_candidates(inst.graph, seeds, CandidateMode::kSample, 2, 99);
    CHECK(cands.size() == 2);
    CHECK_NOTHROW(validate_candidates(inst.graph, seeds, cands));
    auto again = generate_candidates(inst.graph, seeds, CandidateMode::kSample, 2, 99);
    CHECK(cands == again);  // deterministic for a fixed seed
  }
  SUBCASE("limit above the pool clamps with a warning") {
    bool clamped = false;
    auto cands =
        generate_candidates(inst.graph, seeds, CandidateMode::kSample, pool + 5, 1, &clamped);
    CHECK(clamped);
    CHECK(cands.size() == pool);
  }
}

TEST_CASE("generate_candidates rejects an empty seed set") {
  Graph g = test::make_graph(3, {{0, 1, 1.0}});
  SeedSet empty({}, 3);
  CHECK_THROWS_AS(generate_candidates(g, empty, CandidateMode::kAll, 0, 0), ConfigError);
}

TEST_CASE("seed set validation") {
  CHECK_THROWS_AS(SeedSet({1, 1}, 3), ConfigError);
  CHECK_THROWS_AS(SeedSet({5}, 3), ConfigError);
  SeedSet s({2, 0}, 3);
  CHECK(s.ids()[0] == 0);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
}

TEST_CASE("graph consistency check accepts built graphs") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = test::random_oracle_instance(rng);
    CHECK_NOTHROW(inst.graph.check_consistency());
  }
}
