#include "relnet/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "relnet/detail/scenario_lp.hpp"
#include "relnet/mip.hpp"
#include "relnet/threading.hpp"

namespace relnet {
namespace {

constexpr double kRoundTol = 1e-6;  // aligned with kFeasTol; see rounding_rule

bool judged(const Network& net, std::size_t n, const LogicSpec& logic) {
  const Node& node = net.nodes()[n];
  if (logic.mode == LogicSpec::Mode::AllSinks) return true;
  return node.role == NodeRole::Sink && logic.required.count(node.id) > 0;
}

FeasibilityOutcome outcome_from(const Network& net,
                                const detail::ScenarioLp& model,
                                const std::vector<double>& primal,
                                const LogicSpec& logic) {
  FeasibilityOutcome out;
  out.functional = true;
  for (std::size_t n : model.forced_y1) {
    out.y[net.nodes()[n].id] = 1;
    if (judged(net, n, logic)) out.functional = false;
  }
  for (std::size_t n = 0; n < model.y_var.size(); ++n) {
    if (model.y_var[n] == SIZE_MAX) continue;
    int y = rounding_rule(primal[model.y_var[n]]);
    out.y[net.nodes()[n].id] = y;
    if (y == 1 && judged(net, n, logic)) out.functional = false;
  }
  for (std::size_t e = 0; e < model.z_var.size(); ++e)
    if (model.z_var[e] != SIZE_MAX)
      out.flows[net.edges()[e].id] = primal[model.z_var[e]];
  for (std::size_t n = 0; n < model.u_var.size(); ++n)
    if (model.u_var[n] != SIZE_MAX)
      out.controls[net.nodes()[n].id] = primal[model.u_var[n]];
  return out;
}

FeasibilityOutcome infeasible_outcome(const Network& net,
                                      const detail::ScenarioLp& model) {
  // The relaxed problem is always feasible (all y = 1, z at lower bounds)
  // unless flow lower bounds conflict; report every indicator relaxed.
  FeasibilityOutcome out;
  out.functional = false;
  for (std::size_t n : model.forced_y1) out.y[net.nodes()[n].id] = 1;
  for (std::size_t n = 0; n < model.y_var.size(); ++n)
    if (model.y_var[n] != SIZE_MAX) out.y[net.nodes()[n].id] = 1;
  return out;
}

}  // namespace

int rounding_rule(double relaxed_y) { return relaxed_y > kRoundTol ? 1 : 0; }

FeasibilityOutcome psi_single(const Network& network,
                              const Scenario& scenario) {
  if (network.source_indices().size() != 1 ||
      network.sink_indices().size() != 1)
    throw std::invalid_argument(
        "psi_single requires exactly one source and one sink");
  for (const auto& n : network.nodes())
    if (n.controllable)
      throw std::invalid_argument("psi_single requires an uncontrolled network");

  detail::ScenarioLpOptions opt;
  opt.single_y = true;
  opt.unbounded_flows = true;
  opt.normalize_d = true;
  auto model = detail::build_scenario_lp(network, scenario, opt);
  LpSolution sol = solve(model.lp);
  if (sol.status != LpStatus::Optimal)
    return infeasible_outcome(network, model);
  return outcome_from(network, model, sol.primal, LogicSpec::all_sinks());
}

FeasibilityOutcome psi_general(const Network& network, const Scenario& scenario,
                               const LogicSpec& logic, bool use_milp) {
  detail::ScenarioLpOptions opt;
  auto model = detail::build_scenario_lp(network, scenario, opt);
  if (use_milp) {
    MixedIntegerProgram mip;
    mip.lp = model.lp;
    for (std::size_t v : model.y_var)
      if (v != SIZE_MAX) mip.binary_vars.insert(v);
    MipSolution sol = solve_mip(mip);
    if (sol.status != MipStatus::Optimal)
      return infeasible_outcome(network, model);
    return outcome_from(network, model, sol.primal, logic);
  }
  LpSolution sol = solve(model.lp);
  if (sol.status != LpStatus::Optimal)
    return infeasible_outcome(network, model);
  return outcome_from(network, model, sol.primal, logic);
}

namespace {

ReliabilityEstimate estimate_impl(const Network& network,
                                  const ScenarioSet& scenarios,
                                  const std::vector<double>* weights,
                                  const LogicSpec& logic, bool use_milp,
                                  int workers) {
  const auto& list = scenarios.scenarios;
  if (weights && weights->size() != list.size())
    throw std::invalid_argument("weight count does not match scenario count");

  // identical survival patterns are solved once
  std::unordered_map<std::string, std::size_t> pattern_of;
  std::vector<std::size_t> rep;            // unique pattern -> scenario index
  std::vector<std::size_t> pattern(list.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    std::string key(list[k].xi_nodes.begin(), list[k].xi_nodes.end());
    key.append(list[k].xi_edges.begin(), list[k].xi_edges.end());
    auto [it, inserted] = pattern_of.try_emplace(key, rep.size());
    if (inserted) rep.push_back(k);
    pattern[k] = it->second;
  }

  std::vector<FeasibilityOutcome> unique(rep.size());
  std::exception_ptr err;
  parallel_for(rep.size(), workers, [&](std::size_t i) {
    try {
      unique[i] = psi_general(network, list[rep[i]], logic, use_milp);
    } catch (...) {
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);

  ReliabilityEstimate est;
  est.samples = static_cast<long>(list.size());
  est.per_scenario.reserve(list.size());
  double value = 0.0;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& o = unique[pattern[k]];
    est.per_scenario.push_back(o);
    value += (weights ? (*weights)[k] : 1.0 / list.size()) *
             (o.functional ? 1.0 : 0.0);
  }
  est.value = value;
  est.standard_error =
      weights ? 0.0 : std::sqrt(value * (1.0 - value) / list.size());
  return est;
}

}  // namespace

ReliabilityEstimate estimate_reliability(const Network& network,
                                         const ScenarioSet& scenarios,
                                         const LogicSpec& logic, bool use_milp,
                                         int workers) {
  return estimate_impl(network, scenarios, nullptr, logic, use_milp, workers);
}

ReliabilityEstimate estimate_reliability_weighted(
    const Network& network, const ScenarioSet& scenarios,
    const std::vector<double>& weights, const LogicSpec& logic, bool use_milp,
    int workers) {
  return estimate_impl(network, scenarios, &weights, logic, use_milp, workers);
}

std::pair<ScenarioSet, std::vector<double>> enumerate_failure_scenarios(
    const Network& network, double threshold_years, int max_components) {
  const auto& nodes = network.nodes();
  const auto& edges = network.edges();
  // component = (is_edge, index); random iff survival strictly inside (0,1)
  std::vector<std::pair<bool, std::size_t>> random_comps;
  std::vector<double> survive;
  Scenario base;
  base.xi_nodes.assign(nodes.size(), 1);
  base.xi_edges.assign(edges.size(), 1);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    double p = nodes[n].lifetime.survival(threshold_years);
    if (p <= 0.0) base.xi_nodes[n] = 0;
    else if (p < 1.0) { random_comps.emplace_back(false, n); survive.push_back(p); }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double p = edges[e].lifetime.survival(threshold_years);
    if (p <= 0.0) base.xi_edges[e] = 0;
    else if (p < 1.0) { random_comps.emplace_back(true, e); survive.push_back(p); }
  }
  if (random_comps.size() > static_cast<std::size_t>(max_components))
    throw std::invalid_argument("too many random components to enumerate");

  std::size_t m = random_comps.size();
  ScenarioSet set;
  set.threshold_years = threshold_years;
  std::vector<double> weights;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Scenario sc = base;
    sc.index = static_cast<int>(mask);
    double w = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      bool alive = (mask >> i) & 1;
      w *= alive ? survive[i] : 1.0 - survive[i];
      auto [is_edge, idx] = random_comps[i];
      (is_edge ? sc.xi_edges[idx] : sc.xi_nodes[idx]) = alive;
    }
    set.scenarios.push_back(std::move(sc));
    weights.push_back(w);
  }
  return {std::move(set), std::move(weights)};
}

}  // namespace relnet
