// relnet: network reliability evaluation and capacity/topology design.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relnet/design.hpp"
#include "relnet/json_io.hpp"
#include "relnet/lp.hpp"
#include "relnet/mip.hpp"
#include "relnet/reliability.hpp"

namespace {

using nlohmann::json;
using namespace relnet;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Options {
  std::string network_path;
  int samples = 1000;
  std::uint64_t seed = 1;
  double threshold = 5.0;
  std::string mode = "milp";
  std::string budgets_text;
  double budget = 0.0;
  std::string require_text;  // comma list of sink ids -> SubsetReachable
  std::string output_path;   // empty: stdout
  int workers = 1;
  bool topology = false;
  std::string timing = "real";  // "zero" freezes timing fields for byte diffs
};

double emit_time(const Options& opt, double measured) {
  return opt.timing == "zero" ? 0.0 : measured;
}

LogicSpec logic_of(const Options& opt) {
  if (opt.require_text.empty()) return LogicSpec::all_sinks();
  std::set<std::string> ids;
  std::stringstream ss(opt.require_text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) ids.insert(tok);
  }
  return LogicSpec::subset(std::move(ids));
}

std::vector<double> parse_budgets(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size())
      throw SchemaError("budgets: malformed entry '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw SchemaError("budgets: empty list");
  return out;
}

bool looks_like_rbd(const json& j) {
  return j.contains("series") || j.contains("parallel") ||
         j.contains("component");
}

// Networks and RBDs share the --network flag; dispatch on the JSON shape.
Network load_model(const std::string& path) {
  std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": JSON parse error: " + e.what());
  }
  Network net =
      looks_like_rbd(j) ? rbd_to_network(parse_rbd(text)) : parse_network(text);
  std::vector<std::string> problems = net.validate();
  if (!problems.empty()) throw SchemaError(path + ": " + problems.front());
  return net;
}

void emit(const Options& opt, const std::string& content) {
  if (opt.output_path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    write_file(opt.output_path, content);
  }
}

json design_json(const Options& opt, double epsilon, const char* mode,
                 const Network& net, const DesignResult& r) {
  json j;
  j["epsilon"] = epsilon;
  j["mode"] = mode;
  j["cost"] = r.cost;
  j["reliability"] = r.reliability;
  j["relaxed_objective"] = r.relaxed_objective;
  j["chosen_edges"] = r.chosen_edges;
  j["flow_caps"] = r.flow_caps;
  j["control_caps"] = r.control_caps;
  j["seconds"] = emit_time(opt, r.solve_seconds);
  long functional = 0;
  for (std::uint8_t f : r.functional) functional += f;
  j["functional_scenarios"] = functional;
  // frozen design as a loadable network overlay
  j["network"] = json::parse(serialize_network(apply_design(net, r)));
  return j;
}

int run_eval(const Options& opt) {
  Network net = load_model(opt.network_path);
  ScenarioSet set = sample_scenarios(net, opt.samples, opt.threshold, opt.seed);
  double t0 = now_seconds();
  ReliabilityEstimate est = estimate_reliability(
      net, set, logic_of(opt), opt.mode != "relaxed", opt.workers);
  double t1 = now_seconds();
  json j;
  j["R"] = est.value;
  j["samples"] = est.samples;
  j["stderr"] = est.standard_error;
  j["seconds"] = emit_time(opt, t1 - t0);
  emit(opt, j.dump(2) + "\n");
  return 0;
}

int run_rbd(const Options& opt) {
  RbdExpr expr = load_rbd_file(opt.network_path);
  double analytic = eval_rbd(expr);
  Network net = rbd_to_network(expr);
  ScenarioSet set = sample_scenarios(net, opt.samples, opt.threshold, opt.seed);
  ReliabilityEstimate est = estimate_reliability(
      net, set, LogicSpec::all_sinks(), opt.mode != "relaxed", opt.workers);
  json j;
  j["analytic"] = analytic;
  j["monte_carlo"] = est.value;
  j["abs_diff"] = std::abs(analytic - est.value);
  j["samples"] = est.samples;
  emit(opt, j.dump(2) + "\n");
  return 0;
}

DesignProblem problem_of(const Options& opt, const Network& net) {
  DesignProblem prob;
  prob.network = net;
  prob.scenarios = sample_scenarios(net, opt.samples, opt.threshold, opt.seed);
  prob.enable_topology = opt.topology;
  prob.logic = logic_of(opt);
  prob.workers = opt.workers;
  return prob;
}

int run_design(const Options& opt) {
  Network net = load_model(opt.network_path);
  DesignProblem prob = problem_of(opt, net);
  prob.budget = opt.budget;
  prob.relaxed = opt.mode == "relaxed";
  DesignResult r = solve_design(prob);
  json j = design_json(opt, opt.budget, prob.relaxed ? "relaxed" : "milp", net, r);
  emit(opt, j.dump(2) + "\n");
  return 0;
}

std::string design_path(const std::string& output_path, std::size_t index) {
  std::string stem = output_path;
  std::size_t dot = stem.find_last_of('.');
  std::size_t slash = stem.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    stem = stem.substr(0, dot);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_design_%03zu.json", index);
  return stem + buf;
}

int run_pareto(const Options& opt) {
  Network net = load_model(opt.network_path);
  std::vector<double> budgets = parse_budgets(opt.budgets_text);
  DesignProblem prob = problem_of(opt, net);

  bool want_milp = opt.mode == "milp" || opt.mode == "both";
  bool want_lp = opt.mode == "relaxed" || opt.mode == "both";
  ParetoFrontier exact, relaxed;
  if (want_milp) {
    prob.relaxed = false;
    exact = pareto_sweep(prob, budgets);
  }
  if (want_lp) {
    prob.relaxed = true;
    relaxed = pareto_sweep(prob, budgets);
  }

  std::string csv =
      "epsilon,cost,reliability_milp,reliability_lp,active_diff_pct,"
      "milp_seconds,lp_seconds\n";
  char row[256];
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const ParetoPoint* pm = want_milp ? &exact.pairs[i] : nullptr;
    const ParetoPoint* pl = want_lp ? &relaxed.pairs[i] : nullptr;
    if ((pm && pm->failed) || (pl && pl->failed)) {
      std::snprintf(row, sizeof(row), "%.6f,,,,,,\n", budgets[i]);
      csv += row;
      continue;
    }
    double cost = pm ? pm->cost : pl->cost;
    double rm = pm ? pm->reliability : 0.0;
    double rl = pl ? pl->reliability : 0.0;
    double adiff =
        (pm && pl) ? active_difference(pm->result, pl->result) : 0.0;
    double tm = pm ? emit_time(opt, pm->result.solve_seconds) : 0.0;
    double tl = pl ? emit_time(opt, pl->result.solve_seconds) : 0.0;
    std::snprintf(row, sizeof(row), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  budgets[i], cost, rm, rl, adiff, tm, tl);
    csv += row;
  }
  emit(opt, csv);

  if (!opt.output_path.empty()) {
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      const ParetoPoint& p = want_milp ? exact.pairs[i] : relaxed.pairs[i];
      if (p.failed) continue;
      json j = design_json(opt, budgets[i], want_milp ? "milp" : "relaxed",
                           net, p.result);
      if (want_milp && want_lp && !relaxed.pairs[i].failed)
        j["relaxed"] = design_json(opt, budgets[i], "relaxed", net,
                                   relaxed.pairs[i].result);
      write_file(design_path(opt.output_path, i), j.dump(2) + "\n");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network reliability toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--network", opt.network_path, "network or RBD JSON file")
        ->required();
    cmd->add_option("--samples", opt.samples, "Monte Carlo sample count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "RNG seed (RELNET_SEED overrides)");
    cmd->add_option("--threshold", opt.threshold, "evaluation time in years");
    cmd->add_option("--workers", opt.workers, "worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--output", opt.output_path, "output file (default stdout)");
    cmd->add_option("--require", opt.require_text,
                    "comma-separated sink ids that must be reachable");
    cmd->add_option("--timing", opt.timing, "timing fields: real|zero")
        ->check(CLI::IsMember({"real", "zero"}));
  };

  CLI::App* eval = app.add_subcommand("eval", "estimate reliability");
  add_common(eval);
  eval->add_option("--mode", opt.mode, "milp|relaxed")
      ->check(CLI::IsMember({"milp", "relaxed"}));

  CLI::App* design = app.add_subcommand("design", "single-budget design");
  add_common(design);
  design->add_option("--budget", opt.budget, "cost budget epsilon")->required();
  design->add_option("--mode", opt.mode, "milp|relaxed")
      ->check(CLI::IsMember({"milp", "relaxed"}));
  design->add_flag("--topology", opt.topology, "enable candidate edges");

  CLI::App* pareto = app.add_subcommand("pareto", "budget sweep");
  add_common(pareto);
  pareto->add_option("--budgets", opt.budgets_text, "comma-separated budgets")
      ->required();
  pareto->add_option("--mode", opt.mode, "milp|relaxed|both")
      ->check(CLI::IsMember({"milp", "relaxed", "both"}));
  pareto->add_flag("--topology", opt.topology, "enable candidate edges");

  CLI::App* rbd = app.add_subcommand("rbd", "analytic vs Monte Carlo RBD");
  add_common(rbd);
  rbd->add_option("--mode", opt.mode, "milp|relaxed")
      ->check(CLI::IsMember({"milp", "relaxed"}));

  CLI11_PARSE(app, argc, argv);
  if (app.got_subcommand(pareto) && !pareto->count("--mode")) opt.mode = "both";

  if (const char* env = std::getenv("RELNET_SEED")) {
    try {
      opt.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::fprintf(stderr, "RELNET_SEED: not an integer: %s\n", env);
      return 1;
    }
  }

  try {
    if (app.got_subcommand(eval)) return run_eval(opt);
    if (app.got_subcommand(design)) return run_design(opt);
    if (app.got_subcommand(pareto)) return run_pareto(opt);
    if (app.got_subcommand(rbd)) return run_rbd(opt);
  } catch (const IterationLimitError& e) {
    std::fprintf(stderr, "solver limit: %s\n", e.what());
    return 2;
  } catch (const NodeLimitError& e) {
    std::fprintf(stderr, "solver limit: %s\n", e.what());
    return 2;
  } catch (const DesignLimitError& e) {
    std::fprintf(stderr, "solver limit: %s\n", e.what());
    return 2;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
