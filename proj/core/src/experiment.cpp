#include "ima/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <sstream>

#include <json.hpp>

#include "ima/errors.hpp"
#include "ima/evaluate.hpp"
#include "ima/rr.hpp"

namespace ima {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t parse_count_suffix(const std::string& spec, const std::string& prefix) {
  std::string tail = spec.substr(prefix.size());
  std::uint64_t count = 0;
  auto r = std::from_chars(tail.data(), tail.data() + tail.size(), count);
  if (r.ec != std::errc{} || r.ptr != tail.data() + tail.size() || count == 0) {
    throw ConfigError("bad count in spec: " + spec);
  }
  return count;
}

std::vector<CandidateEdge> resolve_candidates(const Graph& g, const SeedSet& seeds,
                                              const ExperimentConfig& cfg, bool* clamped) {
  if (cfg.candidate_spec.empty()) throw ConfigError("no candidate file or mode given");
  if (cfg.candidate_spec == "all") {
    return generate_candidates(g, seeds, CandidateMode::kAll, 0, cfg.master_seed, clamped);
  }
  if (cfg.candidate_spec.starts_with("sample:")) {
    std::uint64_t limit = parse_count_suffix(cfg.candidate_spec, "sample:");
    return generate_candidates(g, seeds, CandidateMode::kSample, limit, cfg.master_seed,
                               clamped);
  }
  return load_candidate_file(cfg.candidate_spec, g, seeds);
}

nlohmann::ordered_json estimate_json(const SpreadEstimate& est) {
  return {{"value", est.value},
          {"half_width", est.half_width},
          {"samples", est.sample_count},
          {"guaranteed", est.guaranteed}};
}

}  // namespace

SeedSet resolve_seed_spec(const Graph& g, const std::string& spec,
                          std::uint64_t master_seed) {
  if (spec.empty()) throw ConfigError("no seed file or strategy given");
  if (spec.starts_with("top_outdeg:")) {
    std::uint64_t count = parse_count_suffix(spec, "top_outdeg:");
    if (count > g.node_count()) throw ConfigError("top_outdeg count exceeds node count");
    std::vector<NodeId> order(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      if (g.out_degree(a) != g.out_degree(b)) return g.out_degree(a) > g.out_degree(b);
      return a < b;
    });
    order.resize(count);
    return SeedSet(std::move(order), g.node_count());
  }
  if (spec.starts_with("random:")) {
    std::uint64_t count = parse_count_suffix(spec, "random:");
    if (count > g.node_count()) throw ConfigError("random seed count exceeds node count");
    Rng rng(Rng::derive(master_seed, stream::kSeedPick));
    std::vector<NodeId> order(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) order[v] = v;
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t j = i + rng.next_below(static_cast<std::uint32_t>(order.size() - i));
      std::swap(order[i], order[j]);
    }
    order.resize(count);
    return SeedSet(std::move(order), g.node_count());
  }
  return SeedSet::from_file(spec, g);
}

const char* method_name(Method m) {
  switch (m) {
    case Method::kAis: return "AIS";
    case Method::kRand: return "RAND";
    case Method::kOutdeg: return "OUTDEG";
    case Method::kProb: return "PROB";
    case Method::kSinf: return "SINF";
    case Method::kAisNoProb: return "AIS_NO_PROB";
    case Method::kAisNoUpdate: return "AIS_NO_UPDATE";
    case Method::kMcGreedy: return "MC_GREEDY";
  }
  return "UNKNOWN";
}

Method parse_method(const std::string& name) {
  std::string up;
  for (char c : name) up.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  if (up == "AIS") return Method::kAis;
  if (up == "RAND") return Method::kRand;
  if (up == "OUTDEG") return Method::kOutdeg;
  if (up == "PROB") return Method::kProb;
  if (up == "SINF") return Method::kSinf;
  if (up == "AIS_NO_PROB" || up == "AIS_NP") return Method::kAisNoProb;
  if (up == "AIS_NO_UPDATE" || up == "AIS_NU") return Method::kAisNoUpdate;
  if (up == "MC_GREEDY" || up == "MCGREEDY") return Method::kMcGreedy;
  throw ConfigError("unknown method: " + name);
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["method"] = method_name(config.method);
  j["config"] = {{"graph", config.graph_path},
                 {"undirected", config.undirected},
                 {"force_wic", config.force_wic},
                 {"seeds", config.seed_spec},
                 {"candidates", config.candidate_spec},
                 {"k", config.k},
                 {"eps", config.eps},
                 {"delta", config.delta},
                 {"beta", config.beta},
                 {"r", config.r},
                 {"eval_eps", config.eval_eps},
                 {"eval_delta", config.eval_delta},
                 {"seed", config.master_seed},
                 {"cap", config.cap}};
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < solution_labels.size(); ++i) {
    edges.push_back({{"u", solution_labels[i].first},
                     {"v", solution_labels[i].second},
                     {"p", solution_probs[i]}});
  }
  j["solution"] = std::move(edges);
  j["spread_before"] = estimate_json(before);
  j["spread_after"] = estimate_json(after);
  j["theta_solve"] = theta_solve;
  if (solver) {
    j["solver"] = {{"lambda", solver->lambda},
                   {"delta_scaled", solver->delta_scaled},
                   {"threshold", solver->threshold},
                   {"beta", solver->beta},
                   {"coverage_initial", solver->coverage_initial},
                   {"coverage_final", solver->coverage_final},
                   {"sigma_before", solver->sigma_before},
                   {"sigma_after", solver->sigma_after},
                   {"step_scores", solver->step_scores}};
  }
  if (config.method == Method::kMcGreedy) j["mc_theoretical_r"] = mc_theoretical_r;
  j["flags"] = {{"cap_exit", cap_exit},
                {"degenerate", degenerate},
                {"short_solution", short_solution}};
  bool t = config.include_timings;
  j["timings_ms"] = {{"load", t ? ms_load : 0.0},
                     {"prepare", t ? ms_prepare : 0.0},
                     {"solve", t ? ms_solve : 0.0},
                     {"eval", t ? ms_eval : 0.0}};
  return j.dump(2) + "\n";
}

std::string RunReport::csv_header() {
  return "method,k,seed,sigma_before,sigma_after,half_width_after,theta_solve,theta_eval,"
         "cap_exit,degenerate,short_solution,ms_total\n";
}

std::string RunReport::to_csv_row() const {
  std::ostringstream out;
  double total = config.include_timings ? ms_load + ms_prepare + ms_solve + ms_eval : 0.0;
  out << method_name(config.method) << ',' << config.k << ',' << config.master_seed << ','
      << before.value << ',' << after.value << ',' << after.half_width << ',' << theta_solve
      << ',' << after.sample_count << ',' << (cap_exit ? 1 : 0) << ',' << (degenerate ? 1 : 0)
      << ',' << (short_solution ? 1 : 0) << ',' << total << '\n';
  return out.str();
}

namespace {

struct PreparedInputs {
  Graph graph;
  SeedSet seeds;
  std::vector<CandidateEdge> candidates;
  double ms_load = 0.0;
  double ms_prepare = 0.0;
};

PreparedInputs prepare(const ExperimentConfig& cfg) {
  PreparedInputs in;
  auto t0 = Clock::now();
  in.graph = load_edge_list_file(cfg.graph_path, !cfg.undirected);
  if (cfg.force_wic || !in.graph.fully_weighted()) in.graph.assign_wic_probabilities();
  in.ms_load = ms_since(t0);

  auto t1 = Clock::now();
  in.seeds = resolve_seed_spec(in.graph, cfg.seed_spec, cfg.master_seed);
  if (in.seeds.empty()) throw ConfigError("resolved seed set is empty");
  in.candidates = resolve_candidates(in.graph, in.seeds, cfg, nullptr);
  if (in.candidates.empty()) throw ConfigError("resolved candidate pool is empty");
  validate_candidates(in.graph, in.seeds, in.candidates);
  in.ms_prepare = ms_since(t1);
  return in;
}

RunReport run_prepared(const Graph& g, const SeedSet& seeds,
                       std::span<const CandidateEdge> pool, const ExperimentConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("k must be >= 1");
  RunReport rep;
  rep.config = cfg;

  auto t0 = Clock::now();
  switch (cfg.method) {
    case Method::kAis: {
      SolverConfig sc{cfg.eps, cfg.delta, cfg.k, cfg.beta, cfg.master_seed, cfg.cap};
      SolutionReport sol = solve(g, seeds, pool, sc);
      rep.solution = sol.selected;
      rep.theta_solve = sol.theta;
      rep.cap_exit = sol.cap_exit;
      rep.degenerate = sol.degenerate_fill;
      rep.short_solution = sol.short_solution;
      rep.solver = std::move(sol);
      break;
    }
    case Method::kRand: {
      Rng rng(Rng::derive(cfg.master_seed, stream::kRandBaseline));
      BaselineResult r = rand_select(pool, cfg.k, rng);
      rep.solution = std::move(r.edges);
      rep.short_solution = r.short_selection;
      break;
    }
    case Method::kOutdeg: {
      BaselineResult r = outdeg_select(g, pool, cfg.k);
      rep.solution = std::move(r.edges);
      rep.short_solution = r.short_selection;
      break;
    }
    case Method::kProb: {
      BaselineResult r = prob_select(pool, cfg.k);
      rep.solution = std::move(r.edges);
      rep.short_solution = r.short_selection;
      break;
    }
    case Method::kSinf:
    case Method::kAisNoProb:
    case Method::kAisNoUpdate: {
      SolverConfig sc{cfg.eps, cfg.delta, cfg.k, cfg.beta, cfg.master_seed, cfg.cap};
      sc.validate(pool.size());
      double lambda = derive_lambda(cfg.eps, cfg.k);
      double delta_scaled =
          cfg.delta / (static_cast<double>(cfg.k) * static_cast<double>(pool.size()));
      double threshold = coverage_threshold(lambda, delta_scaled, cfg.beta);
      RrCollection coll =
          sample_until_coverage(g, seeds, threshold, cfg.cap, cfg.master_seed, true);
      rep.theta_solve = coll.theta();
      rep.cap_exit = coll.cap_exit();
      BaselineResult r;
      if (cfg.method == Method::kSinf) {
        r = sinf_select(coll, pool, cfg.k);
      } else if (cfg.method == Method::kAisNoProb) {
        r = ais_no_prob(coll, pool, cfg.k, cfg.master_seed);
      } else {
        r = ais_no_update(coll, pool, cfg.k);
      }
      rep.solution = std::move(r.edges);
      rep.short_solution = r.short_selection;
      break;
    }
    case Method::kMcGreedy: {
      BaselineResult r = mc_greedy(g, seeds, pool, cfg.k, cfg.r, cfg.master_seed);
      rep.solution = std::move(r.edges);
      rep.short_solution = r.short_selection;
      rep.mc_theoretical_r =
          mc_greedy_theoretical_r(cfg.k, g.node_count(), pool.size(), cfg.eps, cfg.delta);
      break;
    }
  }
  rep.ms_solve = ms_since(t0);

  auto t1 = Clock::now();
  rep.before = evaluate_solution(g, {}, seeds, cfg.eval_eps, cfg.eval_delta,
                                 Rng::derive(cfg.master_seed, stream::kEvalBefore), cfg.cap);
  rep.after = evaluate_solution(g, rep.solution, seeds, cfg.eval_eps, cfg.eval_delta,
                                Rng::derive(cfg.master_seed, stream::kEvalAfter), cfg.cap);
  rep.ms_eval = ms_since(t1);
  if (!rep.before.guaranteed || !rep.after.guaranteed) rep.cap_exit = true;

  for (const CandidateEdge& e : rep.solution) {
    rep.solution_labels.emplace_back(g.original_id(e.u), g.original_id(e.v));
    rep.solution_probs.push_back(e.p);
  }
  return rep;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  PreparedInputs in = prepare(cfg);
  RunReport rep = run_prepared(in.graph, in.seeds, in.candidates, cfg);
  rep.ms_load = in.ms_load;
  rep.ms_prepare = in.ms_prepare;
  return rep;
}

std::string run_sweep(const SweepConfig& sweep) {
  if (sweep.ks.empty()) throw ConfigError("sweep: no k values");
  if (sweep.methods.empty()) throw ConfigError("sweep: no methods");
  if (sweep.repeats == 0) throw ConfigError("sweep: repeats must be >= 1");

  PreparedInputs in = prepare(sweep.base);
  std::ostringstream csv;
  csv << "method,k,repeats,agg,sigma_before,sigma_after,half_width_after,theta_solve,"
         "ms_solve\n";

  auto aggregate = [&](std::vector<double> values) {
    if (!sweep.median) {
      double sum = 0.0;
      for (double v : values) sum += v;
      return sum / static_cast<double>(values.size());
    }
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
  };

  for (Method m : sweep.methods) {
    for (std::uint32_t k : sweep.ks) {
      std::vector<double> before, after, half, theta, ms;
      for (std::uint32_t rep = 0; rep < sweep.repeats; ++rep) {
        ExperimentConfig cfg = sweep.base;
        cfg.method = m;
        cfg.k = k;
        if (sweep.repeats > 1) {
          cfg.master_seed = Rng::derive(sweep.base.master_seed, stream::kRepeat, rep);
        }
        RunReport r = run_prepared(in.graph, in.seeds, in.candidates, cfg);
        before.push_back(r.before.value);
        after.push_back(r.after.value);
        half.push_back(r.after.half_width);
        theta.push_back(static_cast<double>(r.theta_solve));
        ms.push_back(r.ms_solve);
      }
      csv << method_name(m) << ',' << k << ',' << sweep.repeats << ','
          << (sweep.median ? "median" : "mean") << ',' << aggregate(before) << ','
          << aggregate(after) << ',' << aggregate(half) << ',' << aggregate(theta) << ','
          << aggregate(ms) << '\n';
    }
  }
  return csv.str();
}

}  // namespace ima
