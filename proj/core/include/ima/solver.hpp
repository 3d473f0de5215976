#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ima/graph.hpp"
#include "ima/rr.hpp"

namespace ima {

struct SolverConfig {
  double eps = 0.5;
  double delta = 0.001;
  std::uint32_t k = 50;
  double beta = 1.0;  // sample-reduction divisor; > 1 waives the guarantee
  std::uint64_t master_seed = 0;
  std::uint64_t cap = 50'000'000;

  // Throws ConfigError when a field or a derived quantity leaves its range.
  void validate(std::size_t candidate_count) const;
};

// lambda = (eps/k) / (2 + eps/k), the estimator error that keeps the greedy
// output within (1 - 1/e - eps) of optimal.
double derive_lambda(double eps, std::uint32_t k);

// Seed-coverage target 2(1+lambda)(1+lambda/3) ln(2/delta_scaled) / lambda^2,
// divided by beta when sample reduction is active.
double coverage_threshold(double lambda, double delta_scaled, double beta = 1.0);

// Number of cascades per estimate that would give MC greedy the same
// guarantee (union bound over k * pool estimates, spread lower-bounded by 1).
std::uint64_t mc_greedy_theoretical_r(std::uint32_t k, NodeId n, std::size_t pool_size,
                                      double eps, double delta);

struct SolutionReport {
  std::vector<CandidateEdge> selected;  // selection order
  std::vector<double> step_scores;      // p * Delta(v) at pick time
  std::uint64_t theta = 0;
  std::int64_t coverage_initial = 0;
  std::int64_t coverage_final = 0;
  double sigma_before = 0.0;  // n * Lambda_initial / theta
  double sigma_after = 0.0;   // n * Lambda_final / theta
  double lambda = 0.0;
  double delta_scaled = 0.0;
  double threshold = 0.0;
  double beta = 1.0;
  bool cap_exit = false;
  bool degenerate_fill = false;
  bool short_solution = false;
  double ms_sampling = 0.0;
  double ms_selection = 0.0;

  // Field-exact comparison ignoring wall-clock timings.
  bool equivalent_to(const SolutionReport& other) const;
};

// Soft update after selecting e = <u*, v*> at `step`: every uncovered set
// containing v* becomes covered with probability p, decrementing Delta for
// its members. Coins draw from (master_seed, step, set id). Returns the
// number of sets flipped.
std::uint64_t soft_update(RrCollection& coll, const CandidateEdge& e,
                          std::uint64_t master_seed, std::uint32_t step);

// Greedy selection of k edges maximizing p * Delta(v), ties by smallest
// (u, v); applies a soft update after each pick. Once every remaining score
// is zero the rest is filled by highest-p candidates and the degenerate
// flag is set.
SolutionReport select_edges(RrCollection& coll, std::span<const CandidateEdge> candidates,
                            std::uint32_t k, std::uint64_t master_seed);

// Full pipeline: derive lambda and the scaled failure probability, sample
// truncated RR sets to the coverage threshold, then greedy-select with soft
// updates.
SolutionReport solve(const Graph& g, const SeedSet& seeds,
                     std::span<const CandidateEdge> candidates, const SolverConfig& config);

}  // namespace ima
