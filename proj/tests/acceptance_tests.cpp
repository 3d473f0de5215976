// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Statistical criteria run with fixed seeds so the outcome is
// reproducible.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "ima/baselines.hpp"
#include "ima/diffusion.hpp"
#include "ima/evaluate.hpp"
#include "ima/experiment.hpp"
#include "ima/instance_gen.hpp"
#include "ima/rr.hpp"
#include "ima/solver.hpp"

#include "test_util.hpp"

using namespace ima;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

// Criterion 10 evidence gathered while the other criteria run.
bool g_replay_audits_ok = false;   // from criterion 3's 200 replays
int g_solver_audits_ok = 0;        // from criterion 4's 50 solver runs
bool g_ordering_audit_ok = false;  // from criterion 6's update replay

void report(int number, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %2d: %-34s %s (%.1fs)\n", pass ? "PASS" : "FAIL", number, name,
              detail.c_str(), seconds);
  if (!pass) ++g_failures;
}

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

double brute_force_opt(const Graph& g, const SeedSet& seeds,
                       const std::vector<CandidateEdge>& pool, std::uint32_t k) {
  double opt = 0.0;
  const std::size_t target = std::min<std::size_t>(k, pool.size());
  for (std::size_t mask = 0; mask < (std::size_t{1} << pool.size()); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != target) continue;
    std::vector<CandidateEdge> subset;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask >> i & 1) subset.push_back(pool[i]);
    }
    opt = std::max(opt, exact_spread(g, subset, seeds));
  }
  return opt;
}

// 1. Augmented-spread identity at 1e-10 over 1000 random instances.
void criterion_identity() {
  Timer timer;
  Rng rng(10001);
  int done = 0;
  double worst = 0.0;
  while (done < 1000) {
    auto inst = test::random_oracle_instance(rng, 8, 12, 2, 6);
    if (inst.candidates.empty()) continue;
    SeedSet seeds = inst.seeds();
    std::vector<CandidateEdge> base;
    if (inst.candidates.size() > 1 && rng.next_unit() < 0.5) {
      base.push_back(inst.candidates.back());
    }
    auto [lhs, rhs] = exact_augmented_identity_check(inst.graph, base, seeds,
                                                     inst.candidates.front());
    worst = std::max(worst, std::abs(lhs - rhs));
    ++done;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max |lhs-rhs| = %.3e over 1000 instances", worst);
  report(1, "augmented-spread identity", worst <= 1e-10, buf, timer.seconds());
}

// 2. RR estimator unbiasedness at theta = 100000 on 20 instances.
void criterion_unbiased() {
  Timer timer;
  Rng rng(20002);
  const std::uint64_t theta = 100000;
  int misses = 0;
  for (int t = 0; t < 20; ++t) {
    auto inst = test::random_oracle_instance(rng, 8, 12, 2, 6);
    SeedSet seeds = inst.seeds();
    double exact = exact_spread(inst.graph, {}, seeds);
    auto coll = sample_fixed(inst.graph, seeds, theta, 777 + t, false);
    double est = static_cast<double>(inst.graph.node_count()) *
                 static_cast<double>(coll.seed_coverage()) / static_cast<double>(theta);
    double q = exact / inst.graph.node_count();
    double sd = inst.graph.node_count() * std::sqrt(q * (1.0 - q) / theta);
    if (std::abs(est - exact) > 3.0 * sd + 1e-12) ++misses;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d/20 outside 3 half-widths (<=1 allowed)", misses);
  report(2, "rr estimator unbiasedness", misses <= 1, buf, timer.seconds());
}

// 3. Soft updates keep n*Lambda/theta an unbiased estimate of sigma(A,S).
void criterion_soft_update() {
  Timer timer;
  Rng rng(30003);
  auto inst = test::random_oracle_instance(rng, 8, 10, 1, 5);
  while (inst.candidates.size() < 2) {
    inst = test::random_oracle_instance(rng, 8, 10, 1, 5);
  }
  SeedSet seeds = inst.seeds();

  SolverConfig cfg;
  cfg.eps = 0.3;
  cfg.delta = 0.1;
  cfg.k = 2;
  cfg.master_seed = 4242;
  auto fixed = solve(inst.graph, seeds, inst.candidates, cfg);
  double exact = exact_spread(inst.graph, fixed.selected, seeds);

  const int replays = 200;
  const std::uint64_t theta = 20000;
  std::vector<double> estimates;
  estimates.reserve(replays);
  int audits_ok = 0;
  for (int repl = 0; repl < replays; ++repl) {
    auto coll = sample_fixed(inst.graph, seeds, theta, 90000 + repl, true);
    for (std::uint32_t step = 0; step < fixed.selected.size(); ++step) {
      soft_update(coll, fixed.selected[step], 90000 + repl, step);
    }
    if (coll.audit().ok) ++audits_ok;
    estimates.push_back(static_cast<double>(inst.graph.node_count()) *
                        static_cast<double>(coll.seed_coverage()) /
                        static_cast<double>(theta));
  }
  g_replay_audits_ok = (audits_ok == replays);
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= replays;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= (replays - 1);
  double se = std::sqrt(var / replays);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "mean %.4f vs exact %.4f (3se = %.4f)", mean, exact,
                3.0 * se);
  report(3, "soft-update statistical correctness", std::abs(mean - exact) <= 3.0 * se, buf,
         timer.seconds());
}

// 4. (1 - 1/e - eps) approximation against brute-force OPT, 50 instances.
void criterion_approximation() {
  Timer timer;
  Rng rng(40004);
  const double bound = 1.0 - 1.0 / std::exp(1.0) - 0.3;
  int passes = 0;
  for (int t = 0; t < 50; ++t) {
    auto inst = test::random_oracle_instance(rng, 8, 12, 2, 6);
    while (inst.candidates.empty()) inst = test::random_oracle_instance(rng, 8, 12, 2, 6);
    SeedSet seeds = inst.seeds();
    std::uint32_t k = 1 + rng.next_below(3);

    SolverConfig cfg;
    cfg.eps = 0.3;
    cfg.delta = 0.1;
    cfg.k = k;
    cfg.master_seed = 50000 + t;
    auto rep = solve(inst.graph, seeds, inst.candidates, cfg);
    double achieved = exact_spread(inst.graph, rep.selected, seeds);
    double opt = brute_force_opt(inst.graph, seeds, inst.candidates, k);
    if (achieved >= bound * opt - 1e-9) ++passes;

    // criterion 10 gathers evidence from every solver run
    auto coll = sample_until_coverage(inst.graph, seeds, rep.threshold, cfg.cap,
                                      cfg.master_seed, true);
    select_edges(coll, inst.candidates, k, cfg.master_seed);
    if (coll.audit().ok) ++g_solver_audits_ok;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d/50 within bound (>=48 required)", passes);
  report(4, "approximation quality", passes >= 48, buf, timer.seconds());
}

// 5. Lazy == naive greedy; deterministic probabilities match the oracle.
void criterion_mc_greedy() {
  Timer timer;
  Rng rng(50005);
  bool lazy_ok = true;
  int done = 0;
  while (done < 30) {
    auto inst = test::random_oracle_instance(rng, 8, 12, 2, 6);
    if (inst.candidates.size() < 2) continue;
    SeedSet seeds = inst.seeds();
    std::uint32_t k = std::min<std::uint32_t>(3, static_cast<std::uint32_t>(
                                                     inst.candidates.size()));
    const std::uint64_t r = 400;
    const std::uint64_t master = 61000 + done;
    auto lazy = mc_greedy(inst.graph, seeds, inst.candidates, k, r, master);

    WorldEnsemble worlds(inst.graph, seeds, inst.candidates, r, master);
    std::vector<bool> taken(inst.candidates.size(), false);
    std::vector<CandidateEdge> naive;
    for (std::uint32_t round = 0; round < k; ++round) {
      std::int64_t best_gain = -1;
      std::size_t best = inst.candidates.size();
      for (std::size_t i = 0; i < inst.candidates.size(); ++i) {
        if (taken[i]) continue;
        std::int64_t gain = worlds.marginal_total(i);
        const auto& e = inst.candidates[i];
        bool better = gain > best_gain;
        bool tie = best < inst.candidates.size() && gain == best_gain &&
                   std::pair(e.u, e.v) < std::pair(inst.candidates[best].u,
                                                   inst.candidates[best].v);
        if (better || tie) {
          best_gain = gain;
          best = i;
        }
      }
      taken[best] = true;
      worlds.commit(best);
      naive.push_back(inst.candidates[best]);
    }
    lazy_ok = lazy_ok && lazy.edges == naive;
    ++done;
  }

  // Deterministic probabilities: shared worlds are exact, so the output
  // spread equals the exact-oracle greedy's spread.
  bool det_ok = true;
  int det_done = 0;
  while (det_done < 10) {
    auto inst = test::random_oracle_instance(rng, 7, 10, 1, 5);
    if (inst.candidates.size() < 2) continue;
    GraphBuilder b;
    b.ensure_nodes(inst.graph.node_count());
    for (NodeId u = 0; u < inst.graph.node_count(); ++u) {
      for (const Arc& a : inst.graph.out_arcs(u)) {
        b.add_edge(u, a.node, a.prob >= 0.5 ? 1.0 : 0.0, true);
      }
    }
    Graph g = std::move(b).build();
    auto cands = inst.candidates;
    for (auto& e : cands) e.p = e.p >= 0.5 ? 1.0 : 0.0;
    SeedSet seeds = inst.seeds();

    auto mc = mc_greedy(g, seeds, cands, 2, 1, 123);
    std::vector<CandidateEdge> pool = cands, ref;
    for (int step = 0; step < 2 && !pool.empty(); ++step) {
      std::size_t best = 0;
      double best_val = -1.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        auto trial = ref;
        trial.push_back(pool[i]);
        double val = exact_spread(g, trial, seeds);
        if (val > best_val + 1e-12) {
          best_val = val;
          best = i;
        }
      }
      ref.push_back(pool[best]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    }
    det_ok = det_ok && std::abs(exact_spread(g, mc.edges, seeds) -
                                exact_spread(g, ref, seeds)) <= 1e-9;
    ++det_done;
  }
  report(5, "mc-greedy equivalences", lazy_ok && det_ok,
         lazy_ok ? (det_ok ? "lazy==naive x30, deterministic==oracle x10"
                           : "deterministic mismatch")
                 : "lazy/naive mismatch",
         timer.seconds());
}

// 6. Qualitative ordering on the two-cluster instance, exact oracle, k=3.
void criterion_ordering() {
  Timer timer;
  Instance inst = make_two_cluster();
  SeedSet seeds = inst.seeds();
  const std::uint32_t k = 3;

  SolverConfig cfg;
  cfg.eps = 0.3;
  cfg.delta = 0.1;
  cfg.k = k;
  cfg.master_seed = 606;
  auto ais = solve(inst.graph, seeds, inst.candidates, cfg);
  double s_ais = exact_spread(inst.graph, ais.selected, seeds);

  auto coll = sample_until_coverage(inst.graph, seeds, ais.threshold, cfg.cap, 606, true);
  double s_sinf =
      exact_spread(inst.graph, sinf_select(coll, inst.candidates, k).edges, seeds);
  select_edges(coll, inst.candidates, k, 606);  // replay the update sequence
  g_ordering_audit_ok = coll.audit().ok;

  Rng rr(Rng::derive(606, stream::kRandBaseline));
  double s_rand = exact_spread(inst.graph, rand_select(inst.candidates, k, rr).edges, seeds);
  double s_outdeg =
      exact_spread(inst.graph, outdeg_select(inst.graph, inst.candidates, k).edges, seeds);

  bool pass = s_ais >= s_sinf - 1e-9 && s_sinf >= s_rand - 1e-9 && s_ais > s_outdeg + 1e-9;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "AIS %.3f >= SINF %.3f >= RAND %.3f, AIS > OUTDEG %.3f",
                s_ais, s_sinf, s_rand, s_outdeg);
  report(6, "two-cluster qualitative ordering", pass, buf, timer.seconds());
}

// 7. Truncated vs untruncated marginal estimates within 3 sigma.
void criterion_truncation() {
  Timer timer;
  Rng rng(70007);
  const std::uint64_t theta = 50000;
  int instances_ok = 0;
  for (int t = 0; t < 10; ++t) {
    auto inst = test::random_oracle_instance(rng, 8, 12, 1, 4);
    SeedSet seeds = inst.seeds();
    auto trunc = sample_fixed(inst.graph, seeds, theta, 2000 + t, true);
    auto plain = sample_fixed(inst.graph, seeds, theta, 3000 + t, false);
    double n = inst.graph.node_count();
    bool ok = true;
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
      if (seeds.contains(v)) continue;
      double qt = static_cast<double>(trunc.marginal(v)) / static_cast<double>(theta);
      double qu = static_cast<double>(plain.marginal(v)) / static_cast<double>(theta);
      double sd = n * std::sqrt((qt * (1 - qt) + qu * (1 - qu)) / theta);
      if (std::abs(n * qt - n * qu) > 3.0 * sd + 1e-12) ok = false;
    }
    if (ok) ++instances_ok;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%d/10 instances agree", instances_ok);
  report(7, "truncation neutrality", instances_ok == 10, buf, timer.seconds());
}

// 8. Byte-identical reports for solve and every baseline.
void criterion_determinism() {
  Timer timer;
  auto dir = std::filesystem::temp_directory_path() / "ima_acceptance";
  std::filesystem::create_directories(dir);
  auto files = gen_instance(InstanceKind::kTwoCluster, {}, 1, (dir / "det").string());

  ExperimentConfig cfg;
  cfg.graph_path = files.edges;
  cfg.seed_spec = files.seeds;
  cfg.candidate_spec = files.candidates;
  cfg.k = 3;
  cfg.eps = 0.3;
  cfg.delta = 0.1;
  cfg.r = 500;
  cfg.eval_eps = 0.15;
  cfg.eval_delta = 0.05;
  cfg.master_seed = 88;
  cfg.include_timings = false;  // timings are the one nondeterministic field

  bool all_ok = true;
  std::string failing;
  for (Method m : {Method::kAis, Method::kRand, Method::kOutdeg, Method::kProb, Method::kSinf,
                   Method::kAisNoProb, Method::kAisNoUpdate, Method::kMcGreedy}) {
    cfg.method = m;
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    if (a.to_json() != b.to_json()) {
      all_ok = false;
      failing += std::string(method_name(m)) + " ";
    }
  }
  report(8, "report determinism", all_ok,
         all_ok ? "8/8 methods byte-identical" : "differs: " + failing, timer.seconds());
}

// 9. Sample-reduction knob: quality holds, theta scales like 1/beta.
void criterion_beta() {
  Timer timer;
  Instance inst = make_two_cluster();
  SeedSet seeds = inst.seeds();

  SolverConfig cfg;
  cfg.eps = 0.3;
  cfg.delta = 0.1;
  cfg.k = 3;
  cfg.master_seed = 99;

  double spread1 = 0.0;
  std::uint64_t theta1 = 0;
  bool pass = true;
  std::string detail;
  for (double beta : {1.0, 2.0, 4.0}) {
    cfg.beta = beta;
    auto rep = solve(inst.graph, seeds, inst.candidates, cfg);
    double spread = exact_spread(inst.graph, rep.selected, seeds);
    if (beta == 1.0) {
      spread1 = spread;
      theta1 = rep.theta;
    } else {
      double quality = spread / spread1;
      double scale = static_cast<double>(rep.theta) * beta / static_cast<double>(theta1);
      if (quality < 0.95) pass = false;
      if (scale < 0.8 || scale > 1.2) pass = false;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "beta=%g: quality %.3f, theta scale %.2f; ", beta,
                    quality, scale);
      detail += buf;
    }
  }
  report(9, "beta sample reduction", pass, detail, timer.seconds());
}

// 10. Full recounts of Delta/Lambda match the maintained counters across
// every mutated collection the suite produced.
void criterion_audits() {
  Timer timer;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/50 solver runs, 200 replays, ordering replay exact",
                g_solver_audits_ok);
  report(10, "structural audits",
         g_solver_audits_ok == 50 && g_replay_audits_ok && g_ordering_audit_ok, buf,
         timer.seconds());
}

}  // namespace

int main() {
  criterion_identity();
  criterion_unbiased();
  criterion_soft_update();
  criterion_approximation();
  criterion_mc_greedy();
  criterion_ordering();
  criterion_truncation();
  criterion_determinism();
  criterion_beta();
  criterion_audits();

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
