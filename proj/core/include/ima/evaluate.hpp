#pragma once

#include <cstdint>
#include <span>

#include "ima/diffusion.hpp"
#include "ima/graph.hpp"

namespace ima {

// (eps, delta)-estimate of the spread of S on the augmented graph G(A):
// untruncated RR sampling over a virtual overlay of A until the seed
// coverage reaches the stopping threshold, then n * Lambda / theta.
// half_width is the guarantee radius eps * value. A cap exit clears
// `guaranteed`.
SpreadEstimate evaluate_solution(const Graph& g, std::span<const CandidateEdge> solution,
                                 const SeedSet& seeds, double eval_eps, double eval_delta,
                                 std::uint64_t master_seed,
                                 std::uint64_t cap = 50'000'000);

}  // namespace ima
