#include "ima/solver.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "ima/errors.hpp"

namespace ima {

void SolverConfig::validate(std::size_t candidate_count) const {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(beta >= 1.0)) throw ConfigError("beta must be >= 1");
  if (cap < 1) throw ConfigError("cap must be >= 1");
  if (candidate_count == 0) throw ConfigError("candidate pool is empty");
  double lambda = derive_lambda(eps, k);
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("derived lambda out of (0,1)");
  double scaled = delta / (static_cast<double>(k) * static_cast<double>(candidate_count));
  if (!(scaled > 0.0 && scaled < 1.0)) throw ConfigError("scaled delta out of (0,1)");
}

double derive_lambda(double eps, std::uint32_t k) {
  double ratio = eps / static_cast<double>(k);
  return ratio / (2.0 + ratio);
}

double coverage_threshold(double lambda, double delta_scaled, double beta) {
  double base = 2.0 * (1.0 + lambda) * (1.0 + lambda / 3.0) * std::log(2.0 / delta_scaled) /
                (lambda * lambda);
  return base / beta;
}

std::uint64_t mc_greedy_theoretical_r(std::uint32_t k, NodeId n, std::size_t pool_size,
                                      double eps, double delta) {
  double lambda = derive_lambda(eps, k);
  double r = 3.0 * static_cast<double>(n) *
             std::log(2.0 * static_cast<double>(k) * static_cast<double>(pool_size) / delta) /
             (lambda * lambda);
  return static_cast<std::uint64_t>(std::ceil(r));
}

bool SolutionReport::equivalent_to(const SolutionReport& o) const {
  return selected == o.selected && step_scores == o.step_scores && theta == o.theta &&
         coverage_initial == o.coverage_initial && coverage_final == o.coverage_final &&
         sigma_before == o.sigma_before && sigma_after == o.sigma_after &&
         lambda == o.lambda && delta_scaled == o.delta_scaled && threshold == o.threshold &&
         beta == o.beta && cap_exit == o.cap_exit && degenerate_fill == o.degenerate_fill &&
         short_solution == o.short_solution;
}

std::uint64_t soft_update(RrCollection& coll, const CandidateEdge& e,
                          std::uint64_t master_seed, std::uint32_t step) {
  std::uint64_t flipped = 0;
  for (std::uint32_t id : coll.sets_containing(e.v)) {
    if (coll.covered(id)) continue;
    Rng rng(Rng::derive(master_seed, stream::kSoftUpdate, step, id));
    if (rng.next_unit() < e.p) {
      coll.mark_covered(id);
      ++flipped;
    }
  }
  return flipped;
}

namespace {

bool lex_less(const CandidateEdge& a, const CandidateEdge& b) {
  return std::pair(a.u, a.v) < std::pair(b.u, b.v);
}

}  // namespace

SolutionReport select_edges(RrCollection& coll, std::span<const CandidateEdge> candidates,
                            std::uint32_t k, std::uint64_t master_seed) {
  SolutionReport rep;
  rep.theta = coll.theta();
  rep.coverage_initial = coll.seed_coverage();

  std::vector<CandidateEdge> pool(candidates.begin(), candidates.end());
  if (k > pool.size()) rep.short_solution = true;

  [[maybe_unused]] double prev_best = std::numeric_limits<double>::infinity();
  for (std::uint32_t step = 0; step < k && !pool.empty(); ++step) {
    std::size_t best_idx = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      double score = pool[i].p * static_cast<double>(coll.marginal(pool[i].v));
      if (score > best_score ||
          (score == best_score && lex_less(pool[i], pool[best_idx]))) {
        best_score = score;
        best_idx = i;
      }
    }
    // Soft updates only shrink Delta, so the running maximum cannot rise.
    assert(best_score <= prev_best);
    prev_best = best_score;

    if (best_score == 0.0) {
      // No candidate covers an uncovered set; fill the remaining slots with
      // the highest-probability edges left.
      rep.degenerate_fill = true;
      std::sort(pool.begin(), pool.end(), [](const CandidateEdge& a, const CandidateEdge& b) {
        if (a.p != b.p) return a.p > b.p;
        return lex_less(a, b);
      });
      std::uint32_t remaining = k - step;
      for (std::uint32_t i = 0; i < remaining && i < pool.size(); ++i) {
        rep.selected.push_back(pool[i]);
        rep.step_scores.push_back(0.0);
      }
      break;
    }

    CandidateEdge chosen = pool[best_idx];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_idx));
    rep.selected.push_back(chosen);
    rep.step_scores.push_back(best_score);
    soft_update(coll, chosen, master_seed, step);
  }

  rep.coverage_final = coll.seed_coverage();
  return rep;
}

SolutionReport solve(const Graph& g, const SeedSet& seeds,
                     std::span<const CandidateEdge> candidates, const SolverConfig& config) {
  config.validate(candidates.size());
  if (seeds.empty()) throw ConfigError("solve: seed set is empty");
  validate_candidates(g, seeds, candidates);

  double lambda = derive_lambda(config.eps, config.k);
  double delta_scaled = config.delta / (static_cast<double>(config.k) *
                                        static_cast<double>(candidates.size()));
  double threshold = coverage_threshold(lambda, delta_scaled, config.beta);

  auto t0 = std::chrono::steady_clock::now();
  RrCollection coll =
      sample_until_coverage(g, seeds, threshold, config.cap, config.master_seed, true);
  auto t1 = std::chrono::steady_clock::now();
  SolutionReport rep = select_edges(coll, candidates, config.k, config.master_seed);
  auto t2 = std::chrono::steady_clock::now();

  rep.lambda = lambda;
  rep.delta_scaled = delta_scaled;
  rep.threshold = threshold;
  rep.beta = config.beta;
  rep.cap_exit = coll.cap_exit();
  double n = static_cast<double>(g.node_count());
  double theta = static_cast<double>(coll.theta());
  rep.sigma_before = n * static_cast<double>(rep.coverage_initial) / theta;
  rep.sigma_after = n * static_cast<double>(rep.coverage_final) / theta;
  rep.ms_sampling = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.ms_selection = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return rep;
}

}  // namespace ima
