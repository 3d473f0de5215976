#include "ima/evaluate.hpp"

#include "ima/errors.hpp"
#include "ima/rr.hpp"
#include "ima/solver.hpp"

namespace ima {

SpreadEstimate evaluate_solution(const Graph& g, std::span<const CandidateEdge> solution,
                                 const SeedSet& seeds, double eval_eps, double eval_delta,
                                 std::uint64_t master_seed, std::uint64_t cap) {
  if (!(eval_eps > 0.0 && eval_eps < 1.0)) throw ConfigError("eval eps must lie in (0,1)");
  if (!(eval_delta > 0.0 && eval_delta < 1.0)) {
    throw ConfigError("eval delta must lie in (0,1)");
  }
  if (seeds.empty()) throw ConfigError("evaluate_solution: seed set is empty");

  double threshold = coverage_threshold(eval_eps, eval_delta);
  std::uint64_t eval_seed = Rng::derive(master_seed, stream::kEvaluation);
  RrCollection coll =
      sample_until_coverage(g, seeds, threshold, cap, eval_seed, /*truncate=*/false, solution);

  SpreadEstimate est;
  est.value = static_cast<double>(g.node_count()) *
              static_cast<double>(coll.seed_coverage()) / static_cast<double>(coll.theta());
  est.sample_count = coll.theta();
  est.half_width = eval_eps * est.value;
  est.guaranteed = !coll.cap_exit();
  return est;
}

}  // namespace ima
