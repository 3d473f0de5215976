#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ima/diffusion.hpp"
#include "ima/errors.hpp"
#include "ima/evaluate.hpp"
#include "ima/experiment.hpp"
#include "ima/instance_gen.hpp"
#include "ima/solver.hpp"

namespace {

using namespace ima;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write output file: " + out_path);
  out << text;
}

int finish_run(const RunReport& rep, const std::string& out_path, const std::string& format) {
  std::string text =
      format == "csv" ? RunReport::csv_header() + rep.to_csv_row() : rep.to_json();
  write_output(text, out_path);
  return rep.cap_exit ? 3 : 0;
}

std::map<std::string, double> parse_params(const std::string& spec) {
  std::map<std::string, double> params;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad parameter (want key=value): " + item);
    params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return params;
}

std::vector<std::uint32_t> parse_k_list(const std::string& spec) {
  std::vector<std::uint32_t> ks;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    ks.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  return ks;
}

struct CommonOpts {
  std::string graph, seeds, candidates, out;
  std::string format = "json";
  bool undirected = false;
  bool wic = false;
  std::uint64_t seed = 0;
  std::uint64_t cap = 50'000'000;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_candidates) {
  cmd->add_option("--graph", o.graph, "Edge-list file ('u v' or 'u v p' per line)")
      ->required();
  cmd->add_option("--seeds", o.seeds,
                  "Seed file (one id per line), 'top_outdeg:N', or 'random:N'")
      ->required();
  auto* cand = cmd->add_option("--candidates", o.candidates,
                               "Candidate file ('u v p'), 'all', or 'sample:N'");
  if (need_candidates) cand->required();
  cmd->add_flag("--undirected", o.undirected, "Treat input edges as undirected");
  cmd->add_flag("--wic", o.wic, "Force weighted-cascade probabilities (1/indeg)");
  cmd->add_option("--seed", o.seed, "Master RNG seed");
  cmd->add_option("--cap", o.cap, "RR sampling safety cap");
  cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

ExperimentConfig to_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  cfg.graph_path = o.graph;
  cfg.undirected = o.undirected;
  cfg.force_wic = o.wic;
  cfg.seed_spec = o.seeds;
  cfg.candidate_spec = o.candidates;
  cfg.master_seed = o.seed;
  cfg.cap = o.cap;
  return cfg;
}

// Loads graph + seeds + optional edge set the way `oracle` and `eval` need.
struct LoadedInstance {
  Graph graph;
  SeedSet seeds;
  std::vector<CandidateEdge> edges;
};

LoadedInstance load_for_eval(const CommonOpts& o) {
  LoadedInstance li;
  li.graph = load_edge_list_file(o.graph, !o.undirected);
  if (o.wic || !li.graph.fully_weighted()) li.graph.assign_wic_probabilities();
  li.seeds = resolve_seed_spec(li.graph, o.seeds, o.seed);
  if (!o.candidates.empty()) {
    li.edges = load_candidate_file(o.candidates, li.graph, li.seeds);
  }
  return li;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Influence maximization with augmentation: select k seed-to-node edges "
               "that maximize the expected cascade spread of a seed set"};
  app.require_subcommand(1);

  // solve -------------------------------------------------------------
  CommonOpts solve_opts;
  std::uint32_t k = 50;
  double eps = 0.5, delta = 0.001, beta = 1.0;
  double eval_eps = 0.1, eval_delta = 0.01;
  bool no_timings = false;
  auto* cmd_solve = app.add_subcommand("solve", "Run the RR-set solver (AIS)");
  add_common(cmd_solve, solve_opts, true);
  cmd_solve->add_option("--k", k, "Edges to select");
  cmd_solve->add_option("--eps", eps, "Approximation error epsilon");
  cmd_solve->add_option("--delta", delta, "Failure probability delta");
  cmd_solve->add_option("--beta", beta, "Sample-reduction divisor (>1 waives the guarantee)");
  cmd_solve->add_option("--eval-eps", eval_eps, "Evaluation relative error");
  cmd_solve->add_option("--eval-delta", eval_delta, "Evaluation failure probability");
  cmd_solve->add_flag("--no-timings", no_timings, "Zero the timing block (byte-stable output)");

  // baseline ----------------------------------------------------------
  CommonOpts base_opts;
  std::string method;
  std::uint64_t mc_r = 10000;
  bool print_theoretical_r = false;
  auto* cmd_base = app.add_subcommand("baseline", "Run a comparison method");
  add_common(cmd_base, base_opts, true);
  cmd_base->add_option("--method", method,
                       "RAND | OUTDEG | PROB | SINF | AIS_NO_PROB | AIS_NO_UPDATE | MC_GREEDY")
      ->required();
  cmd_base->add_option("--k", k, "Edges to select");
  cmd_base->add_option("--eps", eps, "Epsilon for RR-collection baselines");
  cmd_base->add_option("--delta", delta, "Delta for RR-collection baselines");
  cmd_base->add_option("--beta", beta, "Sample-reduction divisor");
  cmd_base->add_option("--r", mc_r, "Cascades per MC greedy estimate");
  cmd_base->add_option("--eval-eps", eval_eps, "Evaluation relative error");
  cmd_base->add_option("--eval-delta", eval_delta, "Evaluation failure probability");
  cmd_base->add_flag("--no-timings", no_timings, "Zero the timing block");
  cmd_base->add_flag("--print-theoretical-r", print_theoretical_r,
                     "Print the union-bound cascade count for MC greedy and exit");

  // eval ----------------------------------------------------------------
  CommonOpts eval_opts;
  auto* cmd_eval = app.add_subcommand(
      "eval", "Estimate the spread of a seed set, optionally with added edges");
  add_common(cmd_eval, eval_opts, false);
  cmd_eval->add_option("--eval-eps", eval_eps, "Relative error of the estimate");
  cmd_eval->add_option("--eval-delta", eval_delta, "Failure probability of the estimate");

  // oracle --------------------------------------------------------------
  CommonOpts oracle_opts;
  auto* cmd_oracle = app.add_subcommand(
      "oracle", "Exact expected spread by world enumeration (small instances)");
  add_common(cmd_oracle, oracle_opts, false);

  // gen-candidates -------------------------------------------------------
  CommonOpts genc_opts;
  std::string genc_mode = "all";
  std::uint64_t genc_limit = 10000;
  auto* cmd_genc = app.add_subcommand("gen-candidates",
                                      "Generate a candidate edge file from graph + seeds");
  add_common(cmd_genc, genc_opts, false);
  cmd_genc->add_option("--mode", genc_mode, "all | sample")
      ->check(CLI::IsMember({"all", "sample"}));
  cmd_genc->add_option("--limit", genc_limit, "Pairs to draw in sample mode");

  // gen-instance ----------------------------------------------------------
  std::string gi_kind, gi_params, gi_prefix;
  std::uint64_t gi_seed = 0;
  auto* cmd_geni = app.add_subcommand("gen-instance", "Write a synthetic test instance");
  cmd_geni->add_option("--kind", gi_kind, "path | star | erdos_renyi | two_cluster")
      ->required();
  cmd_geni->add_option("--params", gi_params, "Comma list, e.g. n=10,p=0.2");
  cmd_geni->add_option("--seed", gi_seed, "Generator seed");
  cmd_geni->add_option("--out", gi_prefix, "Output prefix (writes .edges/.seeds/.cands)")
      ->required();

  // sweep -------------------------------------------------------------------
  CommonOpts sweep_opts;
  std::string sweep_methods = "AIS", sweep_ks = "1,2,3,4,5", sweep_agg = "mean";
  std::uint32_t sweep_repeats = 1;
  auto* cmd_sweep = app.add_subcommand("sweep", "Vary k (and methods), emit CSV");
  add_common(cmd_sweep, sweep_opts, true);
  cmd_sweep->add_option("--method", sweep_methods, "Comma list of methods");
  cmd_sweep->add_option("--ks", sweep_ks, "Comma list of k values");
  cmd_sweep->add_option("--repeats", sweep_repeats, "Runs per cell (derived seeds)");
  cmd_sweep->add_option("--agg", sweep_agg, "mean | median")
      ->check(CLI::IsMember({"mean", "median"}));
  cmd_sweep->add_option("--eps", eps, "Epsilon for solver-family methods");
  cmd_sweep->add_option("--delta", delta, "Delta for solver-family methods");
  cmd_sweep->add_option("--beta", beta, "Sample-reduction divisor");
  cmd_sweep->add_option("--r", mc_r, "Cascades per MC greedy estimate");
  cmd_sweep->add_option("--eval-eps", eval_eps, "Evaluation relative error");
  cmd_sweep->add_option("--eval-delta", eval_delta, "Evaluation failure probability");

  CLI11_PARSE(app, argc, argv);

  if (cmd_solve->parsed()) {
    ExperimentConfig cfg = to_config(solve_opts);
    cfg.method = Method::kAis;
    cfg.k = k;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.beta = beta;
    cfg.eval_eps = eval_eps;
    cfg.eval_delta = eval_delta;
    cfg.include_timings = !no_timings;
    return finish_run(run_experiment(cfg), solve_opts.out, solve_opts.format);
  }

  if (cmd_base->parsed()) {
    ExperimentConfig cfg = to_config(base_opts);
    cfg.method = parse_method(method);
    cfg.k = k;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.beta = beta;
    cfg.r = mc_r;
    cfg.eval_eps = eval_eps;
    cfg.eval_delta = eval_delta;
    cfg.include_timings = !no_timings;
    if (print_theoretical_r) {
      Graph g = load_edge_list_file(cfg.graph_path, !cfg.undirected);
      SeedSet seeds = SeedSet::from_file(cfg.seed_spec, g);
      auto pool = load_candidate_file(cfg.candidate_spec, g, seeds);
      std::printf("%llu\n",
                  static_cast<unsigned long long>(mc_greedy_theoretical_r(
                      cfg.k, g.node_count(), pool.size(), cfg.eps, cfg.delta)));
      return 0;
    }
    return finish_run(run_experiment(cfg), base_opts.out, base_opts.format);
  }

  if (cmd_eval->parsed()) {
    LoadedInstance li = load_for_eval(eval_opts);
    SpreadEstimate est = evaluate_solution(li.graph, li.edges, li.seeds, eval_eps, eval_delta,
                                           eval_opts.seed, eval_opts.cap);
    std::ostringstream out;
    out << "{\n  \"schema\": 1,\n  \"value\": " << est.value
        << ",\n  \"half_width\": " << est.half_width << ",\n  \"theta\": " << est.sample_count
        << ",\n  \"guaranteed\": " << (est.guaranteed ? "true" : "false") << "\n}\n";
    write_output(out.str(), eval_opts.out);
    return est.guaranteed ? 0 : 3;
  }

  if (cmd_oracle->parsed()) {
    LoadedInstance li = load_for_eval(oracle_opts);
    double value = exact_spread(li.graph, li.edges, li.seeds);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g\n", value);
    write_output(buf, oracle_opts.out);
    return 0;
  }

  if (cmd_genc->parsed()) {
    Graph g = load_edge_list_file(genc_opts.graph, !genc_opts.undirected);
    if (genc_opts.wic || !g.fully_weighted()) g.assign_wic_probabilities();
    SeedSet seeds = SeedSet::from_file(genc_opts.seeds, g);
    bool clamped = false;
    auto mode = genc_mode == "all" ? CandidateMode::kAll : CandidateMode::kSample;
    auto cands = generate_candidates(g, seeds, mode, genc_limit, genc_opts.seed, &clamped);
    if (clamped) {
      std::cerr << "warning: limit exceeds candidate pool, emitting all " << cands.size()
                << " pairs\n";
    }
    if (genc_opts.out.empty()) throw ConfigError("gen-candidates requires --out");
    save_candidate_file(g, cands, genc_opts.out);
    std::cerr << "wrote " << cands.size() << " candidates\n";
    return 0;
  }

  if (cmd_geni->parsed()) {
    InstanceFiles files =
        gen_instance(parse_instance_kind(gi_kind), parse_params(gi_params), gi_seed, gi_prefix);
    std::cerr << "wrote " << files.edges << ", " << files.seeds << ", " << files.candidates
              << "\n";
    return 0;
  }

  if (cmd_sweep->parsed()) {
    SweepConfig sc;
    sc.base = to_config(sweep_opts);
    sc.base.eps = eps;
    sc.base.delta = delta;
    sc.base.beta = beta;
    sc.base.r = mc_r;
    sc.base.eval_eps = eval_eps;
    sc.base.eval_delta = eval_delta;
    for (auto& name : [&] {
           std::vector<std::string> names;
           std::stringstream ss(sweep_methods);
           std::string item;
           while (std::getline(ss, item, ',')) {
             if (!item.empty()) names.push_back(item);
           }
           return names;
         }()) {
      sc.methods.push_back(parse_method(name));
    }
    sc.ks = parse_k_list(sweep_ks);
    sc.repeats = sweep_repeats;
    sc.median = sweep_agg == "median";
    write_output(run_sweep(sc), sweep_opts.out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
