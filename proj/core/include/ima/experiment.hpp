#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ima/baselines.hpp"
#include "ima/diffusion.hpp"
#include "ima/graph.hpp"
#include "ima/solver.hpp"

namespace ima {

enum class Method {
  kAis,
  kRand,
  kOutdeg,
  kProb,
  kSinf,
  kAisNoProb,
  kAisNoUpdate,
  kMcGreedy,
};

const char* method_name(Method m);
Method parse_method(const std::string& name);

// Seed spec: a file path, "top_outdeg:N", or "random:N".
SeedSet resolve_seed_spec(const Graph& g, const std::string& spec,
                          std::uint64_t master_seed);

struct ExperimentConfig {
  std::string graph_path;
  bool undirected = false;
  bool force_wic = false;       // reassign 1/indeg even if the file has probabilities
  std::string seed_spec;        // "<file>" | "top_outdeg:N" | "random:N"
  std::string candidate_spec;   // "<file>" | "all" | "sample:N"
  Method method = Method::kAis;
  std::uint32_t k = 50;
  double eps = 0.5;
  double delta = 0.001;
  double beta = 1.0;
  std::uint64_t r = 10000;      // MC greedy cascades per estimate
  double eval_eps = 0.1;
  double eval_delta = 0.01;
  std::uint64_t master_seed = 0;
  std::uint64_t cap = 50'000'000;
  bool include_timings = true;  // false zeroes the timing block for byte-stable reports
};

struct RunReport {
  ExperimentConfig config;
  std::vector<CandidateEdge> solution;               // dense ids
  std::vector<std::pair<std::int64_t, std::int64_t>> solution_labels;  // original ids
  std::vector<double> solution_probs;
  SpreadEstimate before;
  SpreadEstimate after;
  std::uint64_t theta_solve = 0;
  std::optional<SolutionReport> solver;  // AIS only
  std::uint64_t mc_theoretical_r = 0;    // MC greedy only
  bool cap_exit = false;
  bool degenerate = false;
  bool short_solution = false;
  double ms_load = 0.0;
  double ms_prepare = 0.0;
  double ms_solve = 0.0;
  double ms_eval = 0.0;

  // Versioned JSON document ("schema": 1). Deterministic for a fixed
  // config and master seed when timings are suppressed.
  std::string to_json() const;

  static std::string csv_header();
  std::string to_csv_row() const;
};

// Loads inputs, resolves seeds and candidates, dispatches the method, and
// evaluates the spread before/after with the (eval_eps, eval_delta) stopping
// rule.
RunReport run_experiment(const ExperimentConfig& config);

struct SweepConfig {
  ExperimentConfig base;
  std::vector<Method> methods;
  std::vector<std::uint32_t> ks;
  std::uint32_t repeats = 1;
  bool median = false;  // aggregation: mean by default
};

// One CSV row per (method, k) with aggregated spreads across repeats.
// Repeat i runs with master seed derived from (base seed, i).
std::string run_sweep(const SweepConfig& config);

}  // namespace ima
