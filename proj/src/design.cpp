#include "relnet/design.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "relnet/detail/scenario_lp.hpp"
#include "relnet/mip.hpp"
#include "relnet/threading.hpp"

namespace relnet {
namespace {

// Master regularization: a tiny per-unit charge on capacity so that, among
// designs with equal credit, the cheapest is preferred. Small enough that
// one scenario credit always dominates any affordable spend.
constexpr double kCostReg = 1e-6;
constexpr double kCutTol = 1e-7;       // cut violation threshold, credits
constexpr double kBudgetTol = 1e-6;    // cost units
constexpr int kMaxKelley = 400;        // per branch-and-bound node
constexpr int kCutGrace = 4;           // purge cuts slack this many solves

// Sensitivity orientation of the simplex duals with respect to a <= row's
// rhs: optimal value moves by +dual, phase-1 infeasibility by -dual.
constexpr double kOptDualSign = 1.0;
constexpr double kFeasDualSign = -1.0;

double edge_menu(const Edge& e) {
  double m = e.cap_menu_upper >= 0.0 ? e.cap_menu_upper : 10.0 * e.flow_upper;
  return std::max(m, e.flow_upper);
}

double node_menu(const Node& n) {
  double m = n.control_menu_upper >= 0.0 ? n.control_menu_upper
                                         : 10.0 * n.control_upper;
  return std::max(m, n.control_upper);
}

bool judged(const Network& net, std::size_t n, const LogicSpec& logic) {
  const Node& node = net.nodes()[n];
  if (logic.mode == LogicSpec::Mode::AllSinks) return true;
  return node.role == NodeRole::Sink && logic.required.count(node.id) > 0;
}

// One supporting hyperplane of a pattern's credit function g_p(caps).
// opt:  theta_p - sum(coef * cap) <= rhs
// feas: sum(coef * cap) >= rhs    (serve states only)
struct Cut {
  int pattern = -1;
  bool feasibility = false;
  std::vector<std::pair<std::size_t, double>> terms;  // (master var, coef)
  double rhs = 0.0;
  int slack_runs = 0;
  long born = 0;
};

// Outcome of one subproblem solve; cached per (caps, serve-state) so the
// cutting-plane loop never re-solves a pattern at capacities it has seen.
struct SubReport {
  bool solved = false;
  bool feasible = false;
  double value = 0.0;
  std::vector<std::pair<std::size_t, double>> terms;
  std::vector<double> primal;
};

struct PatternModel {
  long weight = 0;
  std::vector<std::size_t> scenario_ids;
  bool viable = false;  // every judged indicator alive in this pattern
  detail::ScenarioLp sub;
  std::size_t w_var = SIZE_MAX;  // w >= y_n for judged n; credit = 1 - w
  std::vector<std::size_t> judged_live;  // node indices with judged y vars
  std::vector<Cut> opt_cuts, feas_cuts;
  std::unordered_map<std::string, SubReport> solve_cache;
};

enum : std::int8_t { kFree = 0, kServe = 1, kAbandon = 2 };

struct KelleyResult {
  bool feasible = true;
  bool converged = false;
  double credits = 0.0;  // sum of weight * theta at the final master
  std::vector<double> caps, ucaps, v, theta, subvalue;
  std::vector<std::vector<double>> sub_primal;  // per pattern, last solve
};

struct Incumbent {
  long credits = -1;
  double cost = kInf;
  std::vector<double> caps, ucaps;
  std::vector<std::uint8_t> vint;
  std::vector<int> pattern_credit;
};

struct BBNode {
  std::vector<std::int8_t> pstate;
  std::vector<std::int8_t> vfix;  // -1 free
  double bound = 0.0;
  long seq = 0;
};

struct BBNodeOrder {
  bool operator()(const BBNode& a, const BBNode& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.seq > b.seq;
  }
};

class Engine {
 public:
  explicit Engine(const DesignProblem& problem)
      : prob_(problem), net_(problem.network) {
    init();
  }

  DesignResult run(double budget);
  const DesignProblem& problem() const { return prob_; }

 private:
  void init();
  LinearProgram build_master(double budget,
                             const std::vector<std::int8_t>& pstate,
                             const std::vector<std::int8_t>& vfix,
                             std::vector<Cut*>& row_cut);
  KelleyResult kelley(double budget, const std::vector<std::int8_t>& pstate,
                      const std::vector<std::int8_t>& vfix, long prune_below,
                      int stall_patience = 0);
  int exact_pattern_credit(std::size_t p, const std::vector<double>& caps,
                           const std::vector<double>& ucaps,
                           const std::vector<std::uint8_t>& vint);
  bool try_incumbent(double budget, const std::vector<double>& caps,
                     const std::vector<double>& ucaps,
                     const std::vector<double>& v, Incumbent& inc);
  double design_cost(const std::vector<double>& caps,
                     const std::vector<double>& ucaps,
                     const std::vector<std::uint8_t>& vint) const;
  DesignResult exact_solve(double budget);
  DesignResult relaxed_solve(double budget);
  DesignResult assemble(const std::vector<double>& caps,
                        const std::vector<double>& ucaps,
                        const std::vector<std::uint8_t>& vint,
                        const std::vector<int>& pattern_credit) const;

  const DesignProblem& prob_;
  const Network& net_;
  bool topology_ = false;
  std::vector<std::size_t> cand_;   // candidate edge indices
  std::vector<std::size_t> ctrl_;   // controllable node indices
  std::vector<double> capital_;     // per candidate
  std::vector<PatternModel> patterns_;
  std::vector<std::size_t> pattern_of_;  // scenario -> pattern
  std::vector<std::size_t> viable_;      // indices of viable patterns
  // master variable layout, stable across all solves
  std::size_t nvars_ = 0;
  std::vector<std::size_t> vu_of_;       // node -> master var or SIZE_MAX
  std::vector<std::size_t> vv_of_;       // candidate -> master var
  std::vector<std::size_t> vtheta_of_;   // pattern -> master var or SIZE_MAX
  long cut_serial_ = 0;
  long kelley_runs_ = 0;
  std::unordered_map<std::string, int> credit_memo_;
  Incumbent carried_;  // warm start across a sweep
};

void Engine::init() {
  const auto& nodes = net_.nodes();
  const auto& edges = net_.edges();
  const auto& list = prob_.scenarios.scenarios;
  if (list.empty()) throw std::invalid_argument("design needs scenarios");

  topology_ = prob_.enable_topology;
  cand_ = net_.candidate_edge_indices();
  for (std::size_t c : cand_)
    capital_.push_back(edges[c].capital_cost > 0.0 ? edges[c].capital_cost
                                                   : prob_.edge_capital_cost);
  for (std::size_t n = 0; n < nodes.size(); ++n)
    if (nodes[n].controllable) ctrl_.push_back(n);

  // deduplicate survival patterns
  std::unordered_map<std::string, std::size_t> seen;
  pattern_of_.resize(list.size());
  std::vector<std::size_t> rep;
  for (std::size_t k = 0; k < list.size(); ++k) {
    std::string key(list[k].xi_nodes.begin(), list[k].xi_nodes.end());
    key.append(list[k].xi_edges.begin(), list[k].xi_edges.end());
    auto [it, inserted] = seen.try_emplace(key, rep.size());
    if (inserted) rep.push_back(k);
    pattern_of_[k] = it->second;
  }

  patterns_.resize(rep.size());
  for (std::size_t k = 0; k < list.size(); ++k) {
    patterns_[pattern_of_[k]].weight += 1;
    patterns_[pattern_of_[k]].scenario_ids.push_back(k);
  }

  detail::ScenarioLpOptions opt;
  opt.cap_rows = true;
  opt.edge_cap.resize(edges.size());
  opt.node_cap.resize(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    opt.edge_cap[e] = edges[e].flow_upper;
  for (std::size_t n = 0; n < nodes.size(); ++n)
    opt.node_cap[n] = nodes[n].control_upper;
  opt.candidate_active.assign(cand_.size(), topology_ ? 1 : 0);

  for (std::size_t p = 0; p < patterns_.size(); ++p) {
    PatternModel& pm = patterns_[p];
    const Scenario& sc = list[rep[p]];
    pm.sub = detail::build_scenario_lp(net_, sc, opt);
    // a dead judged indicator pins the pattern's credit at zero
    pm.viable = true;
    for (std::size_t n : pm.sub.forced_y1)
      if (judged(net_, n, prob_.logic)) pm.viable = false;
    if (!pm.viable) continue;
    // recast the objective as the scenario's functional indicator:
    // maximize 1 - w with w >= y_n over the judged nodes
    LinearProgram& lp = pm.sub.lp;
    for (std::size_t n = 0; n < pm.sub.y_var.size(); ++n) {
      if (pm.sub.y_var[n] == SIZE_MAX) continue;
      lp.objective[pm.sub.y_var[n]] = 0.0;
      if (judged(net_, n, prob_.logic)) pm.judged_live.push_back(n);
    }
    pm.w_var = lp.add_var(-1.0, 0.0, 1.0);
    for (auto& row : lp.rows) row.coeffs.resize(lp.num_vars(), 0.0);
    for (std::size_t n : pm.judged_live) {
      LpRow row;
      row.coeffs.assign(lp.num_vars(), 0.0);
      row.coeffs[pm.w_var] = 1.0;
      row.coeffs[pm.sub.y_var[n]] = -1.0;
      row.rel = Relation::Ge;
      lp.add_row(std::move(row));
    }
    viable_.push_back(p);
  }

  // master layout: caps per edge, then controls, then v, then theta
  nvars_ = edges.size();
  vu_of_.assign(nodes.size(), SIZE_MAX);
  for (std::size_t n : ctrl_) vu_of_[n] = nvars_++;
  vv_of_.assign(cand_.size(), SIZE_MAX);
  if (topology_)
    for (std::size_t c = 0; c < cand_.size(); ++c) vv_of_[c] = nvars_++;
  vtheta_of_.assign(patterns_.size(), SIZE_MAX);
  for (std::size_t p : viable_) vtheta_of_[p] = nvars_++;
}

LinearProgram Engine::build_master(double budget,
                                   const std::vector<std::int8_t>& pstate,
                                   const std::vector<std::int8_t>& vfix,
                                   std::vector<Cut*>& row_cut) {
  const auto& edges = net_.edges();
  const auto& nodes = net_.nodes();
  LinearProgram lp;
  lp.objective.assign(nvars_, 0.0);
  lp.lower.assign(nvars_, 0.0);
  lp.upper.assign(nvars_, 0.0);

  std::vector<std::uint8_t> is_cand(edges.size(), 0);
  for (std::size_t c : cand_) is_cand[c] = 1;

  double base_total = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    lp.objective[e] = -kCostReg;
    if (is_cand[e]) {
      lp.lower[e] = 0.0;
      lp.upper[e] = topology_ ? edge_menu(edges[e]) : 0.0;
    } else {
      lp.lower[e] = edges[e].flow_upper;
      lp.upper[e] = edge_menu(edges[e]);
      base_total += edges[e].flow_upper;
    }
  }
  for (std::size_t n : ctrl_) {
    std::size_t v = vu_of_[n];
    lp.objective[v] = -kCostReg;
    lp.lower[v] = nodes[n].control_upper;
    lp.upper[v] = node_menu(nodes[n]);
    base_total += nodes[n].control_upper;
  }
  for (std::size_t c = 0; c < cand_.size() && topology_; ++c) {
    std::size_t v = vv_of_[c];
    lp.objective[v] = -kCostReg * (capital_[c] - edges[cand_[c]].flow_upper);
    lp.lower[v] = vfix[c] == 1 ? 1.0 : 0.0;
    lp.upper[v] = vfix[c] == 0 ? 0.0 : 1.0;
  }
  for (std::size_t p : viable_) {
    std::size_t v = vtheta_of_[p];
    lp.objective[v] = static_cast<double>(patterns_[p].weight);
    lp.lower[v] = pstate[p] == kServe ? 1.0 : 0.0;
    lp.upper[v] = pstate[p] == kAbandon ? 0.0 : 1.0;
  }

  // budget: total capacity spend plus candidate capital within epsilon
  LpRow bud;
  bud.coeffs.assign(nvars_, 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) bud.coeffs[e] = 1.0;
  for (std::size_t n : ctrl_) bud.coeffs[vu_of_[n]] = 1.0;
  for (std::size_t c = 0; c < cand_.size() && topology_; ++c)
    bud.coeffs[vv_of_[c]] = capital_[c] - edges[cand_[c]].flow_upper;
  bud.rel = Relation::Le;
  bud.rhs = budget + base_total;
  row_cut.assign(1, nullptr);
  lp.add_row(std::move(bud));

  // candidate linking: base*v <= cap <= menu*v
  for (std::size_t c = 0; c < cand_.size() && topology_; ++c) {
    std::size_t e = cand_[c];
    LpRow up;
    up.coeffs.assign(nvars_, 0.0);
    up.coeffs[e] = 1.0;
    up.coeffs[vv_of_[c]] = -edge_menu(net_.edges()[e]);
    up.rel = Relation::Le;
    lp.add_row(std::move(up));
    row_cut.push_back(nullptr);
    if (net_.edges()[e].flow_upper > 0.0) {
      LpRow lo;
      lo.coeffs.assign(nvars_, 0.0);
      lo.coeffs[e] = -1.0;
      lo.coeffs[vv_of_[c]] = net_.edges()[e].flow_upper;
      lo.rel = Relation::Le;
      lp.add_row(std::move(lo));
      row_cut.push_back(nullptr);
    }
  }

  for (std::size_t p : viable_) {
    if (pstate[p] == kAbandon) continue;
    for (Cut& cut : patterns_[p].opt_cuts) {
      LpRow row;
      row.coeffs.assign(nvars_, 0.0);
      row.coeffs[vtheta_of_[p]] = 1.0;
      for (auto [var, coef] : cut.terms) row.coeffs[var] = -coef;
      row.rel = Relation::Le;
      row.rhs = cut.rhs;
      lp.add_row(std::move(row));
      row_cut.push_back(&cut);
    }
    if (pstate[p] != kServe) continue;
    for (Cut& cut : patterns_[p].feas_cuts) {
      LpRow row;
      row.coeffs.assign(nvars_, 0.0);
      for (auto [var, coef] : cut.terms) row.coeffs[var] = coef;
      row.rel = Relation::Ge;
      row.rhs = cut.rhs;
      lp.add_row(std::move(row));
      row_cut.push_back(&cut);
    }
  }
  return lp;
}

KelleyResult Engine::kelley(double budget,
                            const std::vector<std::int8_t>& pstate,
                            const std::vector<std::int8_t>& vfix,
                            long prune_below, int stall_patience) {
  const auto& edges = net_.edges();
  KelleyResult res;
  res.subvalue.assign(patterns_.size(), 0.0);
  res.sub_primal.resize(patterns_.size());

  std::vector<SubReport> reports(patterns_.size());
  double stall_ref = kInf;  // master bound stall_patience iterations ago
  int since_drop = 0;

  for (int it = 0; it < kMaxKelley; ++it) {
    std::vector<Cut*> row_cut;
    LinearProgram master = build_master(budget, pstate, vfix, row_cut);
    LpSolution msol = solve(master);
    if (msol.status != LpStatus::Optimal) {
      res.feasible = false;
      return res;
    }
    res.caps.assign(msol.primal.begin(), msol.primal.begin() + edges.size());
    res.ucaps.assign(net_.nodes().size(), 0.0);
    for (std::size_t n : ctrl_) res.ucaps[n] = msol.primal[vu_of_[n]];
    res.v.assign(cand_.size(), 0.0);
    for (std::size_t c = 0; c < cand_.size() && topology_; ++c)
      res.v[c] = msol.primal[vv_of_[c]];
    res.theta.assign(patterns_.size(), 0.0);
    res.credits = 0.0;
    for (std::size_t p : viable_) {
      res.theta[p] = msol.primal[vtheta_of_[p]];
      res.credits += patterns_[p].weight * res.theta[p];
    }

    // retire cuts that have stayed slack for several consecutive masters
    for (std::size_t r = 0; r < row_cut.size(); ++r)
      if (row_cut[r]) {
        bool binding = std::fabs(msol.row_duals[r]) > 1e-9;
        row_cut[r]->slack_runs = binding ? 0 : row_cut[r]->slack_runs + 1;
      }
    for (std::size_t p : viable_) {
      auto purge = [&](std::vector<Cut>& pool) {
        std::erase_if(pool, [&](const Cut& c) {
          return c.slack_runs >= kCutGrace && cut_serial_ > c.born + 2;
        });
      };
      purge(patterns_[p].opt_cuts);
      purge(patterns_[p].feas_cuts);
    }

    if (prune_below >= 0 &&
        static_cast<long>(std::floor(res.credits + 1e-6)) <= prune_below)
      return res;  // the bound already closes this node

    // bundle-style cutoff: once the master bound stops moving, tail
    // iterations cannot change the rounded design materially; the bound
    // stays a valid upper bound when we stop early. The stalled iteration
    // still solves every subproblem so the primals match the final caps.
    bool stalled = false;
    // minimum progress per iteration: 0.1% of the scenarios
    const double min_drop = std::max(0.25, 1e-3 * prob_.scenarios.scenarios.size());
    if (stall_patience > 0) {
      if (res.credits > stall_ref - min_drop) {
        stalled = ++since_drop >= stall_patience;
      } else {
        since_drop = 0;
      }
      stall_ref = res.credits;
    }

    // solve every open pattern at the proposed caps
    std::vector<std::size_t> open;
    for (std::size_t p : viable_)
      if (pstate[p] != kAbandon) open.push_back(p);
    parallel_for(open.size(), prob_.workers, [&](std::size_t i) {
      std::size_t p = open[i];
      PatternModel& pm = patterns_[p];
      LinearProgram& sub = pm.sub.lp;
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (pm.sub.cap_row_edge[e] != SIZE_MAX)
          sub.rows[pm.sub.cap_row_edge[e]].rhs = res.caps[e];
      for (std::size_t n : ctrl_)
        if (pm.sub.cap_row_node[n] != SIZE_MAX)
          sub.rows[pm.sub.cap_row_node[n]].rhs = res.ucaps[n];
      sub.upper[pm.w_var] = pstate[p] == kServe ? 0.0 : 1.0;
      std::string key(1, static_cast<char>(pstate[p]));
      key.append(reinterpret_cast<const char*>(res.caps.data()),
                 res.caps.size() * sizeof(double));
      key.append(reinterpret_cast<const char*>(res.ucaps.data()),
                 res.ucaps.size() * sizeof(double));
      if (auto it = pm.solve_cache.find(key); it != pm.solve_cache.end()) {
        reports[p] = it->second;
        if (reports[p].feasible) res.sub_primal[p] = reports[p].primal;
        return;
      }
      LpSolution ssol = solve(sub);
      SubReport& rep = reports[p];
      rep.solved = true;
      rep.feasible = false;
      rep.terms.clear();
      if (ssol.status == LpStatus::Optimal) {
        rep.feasible = true;
        rep.value = 1.0 + ssol.objective_value;  // credit = 1 - w
        for (std::size_t e = 0; e < edges.size(); ++e) {
          std::size_t r = pm.sub.cap_row_edge[e];
          if (r == SIZE_MAX) continue;
          double coef = kOptDualSign * ssol.row_duals[r];
          if (coef > 1e-12) rep.terms.emplace_back(e, coef);
        }
        for (std::size_t n : ctrl_) {
          std::size_t r = pm.sub.cap_row_node[n];
          if (r == SIZE_MAX) continue;
          double coef = kOptDualSign * ssol.row_duals[r];
          if (coef > 1e-12) rep.terms.emplace_back(vu_of_[n], coef);
        }
        rep.primal = std::move(ssol.primal);
        res.sub_primal[p] = rep.primal;
      } else {
        rep.value = ssol.phase1_infeasibility;
        for (std::size_t e = 0; e < edges.size(); ++e) {
          std::size_t r = pm.sub.cap_row_edge[e];
          if (r == SIZE_MAX) continue;
          double coef = -kFeasDualSign * ssol.row_duals[r];
          if (std::fabs(coef) > 1e-12) rep.terms.emplace_back(e, coef);
        }
        for (std::size_t n : ctrl_) {
          std::size_t r = pm.sub.cap_row_node[n];
          if (r == SIZE_MAX) continue;
          double coef = -kFeasDualSign * ssol.row_duals[r];
          if (std::fabs(coef) > 1e-12) rep.terms.emplace_back(vu_of_[n], coef);
        }
      }
      pm.solve_cache.emplace(std::move(key), rep);
    });

    bool added = false;
    for (std::size_t p : open) {
      SubReport& rep = reports[p];
      PatternModel& pm = patterns_[p];
      if (rep.feasible) {
        res.subvalue[p] = rep.value;
        if (res.theta[p] > rep.value + kCutTol) {
          Cut cut;
          cut.pattern = static_cast<int>(p);
          cut.terms = rep.terms;
          cut.rhs = rep.value;
          for (auto [var, coef] : rep.terms)
            cut.rhs -= coef * msol.primal[var];
          cut.born = cut_serial_++;
          pm.opt_cuts.push_back(std::move(cut));
          added = true;
        }
      } else {
        // serve state infeasible at these caps: I(c) <= 0 is required, so
        // sum(coef * c) >= I(cbar) + sum(coef * cbar)
        res.subvalue[p] = 0.0;
        Cut cut;
        cut.pattern = static_cast<int>(p);
        cut.feasibility = true;
        cut.terms = rep.terms;
        cut.rhs = rep.value;
        for (auto [var, coef] : rep.terms) cut.rhs += coef * msol.primal[var];
        cut.born = cut_serial_++;
        pm.feas_cuts.push_back(std::move(cut));
        added = true;
      }
    }
    if (stalled && added) return res;
    if (!added) {
      res.converged = true;
      if (std::getenv("RELNET_DEBUG_KELLEY"))
        std::fprintf(stderr, "kelley: %d iters, credits %.3f\n", it + 1,
                     res.credits);
      return res;
    }
  }
  return res;  // iteration cap: still a valid (loose) upper bound
}

int Engine::exact_pattern_credit(std::size_t p, const std::vector<double>& caps,
                                 const std::vector<double>& ucaps,
                                 const std::vector<std::uint8_t>& vint) {
  PatternModel& pm = patterns_[p];
  if (!pm.viable) return 0;
  std::string key;
  key.append(reinterpret_cast<const char*>(&p), sizeof(p));
  key.append(reinterpret_cast<const char*>(caps.data()),
             caps.size() * sizeof(double));
  key.append(reinterpret_cast<const char*>(ucaps.data()),
             ucaps.size() * sizeof(double));
  key.append(vint.begin(), vint.end());
  if (auto it = credit_memo_.find(key); it != credit_memo_.end())
    return it->second;

  const auto& list = prob_.scenarios.scenarios;
  detail::ScenarioLpOptions opt;
  opt.edge_cap = caps;
  opt.node_cap = ucaps;
  opt.candidate_active = vint;
  auto model =
      detail::build_scenario_lp(net_, list[pm.scenario_ids.front()], opt);
  LinearProgram& lp = model.lp;
  MixedIntegerProgram mip;
  for (std::size_t n = 0; n < model.y_var.size(); ++n)
    if (model.y_var[n] != SIZE_MAX) lp.objective[model.y_var[n]] = 0.0;
  std::size_t w = lp.add_var(-1.0, 0.0, 1.0);
  for (auto& row : lp.rows) row.coeffs.resize(lp.num_vars(), 0.0);
  for (std::size_t n = 0; n < model.y_var.size(); ++n) {
    if (model.y_var[n] == SIZE_MAX) continue;
    mip.binary_vars.insert(model.y_var[n]);
    if (!judged(net_, n, prob_.logic)) continue;
    LpRow row;
    row.coeffs.assign(lp.num_vars(), 0.0);
    row.coeffs[w] = 1.0;
    row.coeffs[model.y_var[n]] = -1.0;
    row.rel = Relation::Ge;
    lp.add_row(std::move(row));
  }
  mip.binary_vars.insert(w);
  mip.lp = std::move(lp);
  MipSolution sol = solve_mip(mip);
  int credit = 0;
  if (sol.status == MipStatus::Optimal)
    credit = 1.0 + sol.objective_value > 0.5 ? 1 : 0;
  credit_memo_.emplace(std::move(key), credit);
  return credit;
}

double Engine::design_cost(const std::vector<double>& caps,
                           const std::vector<double>& ucaps,
                           const std::vector<std::uint8_t>& vint) const {
  const auto& edges = net_.edges();
  const auto& nodes = net_.nodes();
  std::vector<int> cand_of(edges.size(), -1);
  for (std::size_t c = 0; c < cand_.size(); ++c) cand_of[cand_[c]] = c;
  double cost = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int c = cand_of[e];
    if (c >= 0) {
      if (c < static_cast<int>(vint.size()) && vint[c]) {
        cost += capital_[c];
        cost += std::max(0.0, caps[e] - edges[e].flow_upper);
      }
    } else {
      cost += std::max(0.0, caps[e] - edges[e].flow_upper);
    }
  }
  for (std::size_t n : ctrl_)
    cost += std::max(0.0, ucaps[n] - nodes[n].control_upper);
  return cost;
}

bool Engine::try_incumbent(double budget, const std::vector<double>& caps_in,
                           const std::vector<double>& ucaps,
                           const std::vector<double>& v, Incumbent& inc) {
  std::vector<double> caps = caps_in;
  std::vector<std::uint8_t> vint(cand_.size(), 0);
  std::vector<double> vfrac = v;
  for (std::size_t c = 0; c < cand_.size() && topology_; ++c)
    vint[c] = v[c] > 0.5 ? 1 : 0;
  for (std::size_t c = 0; c < cand_.size(); ++c)
    if (!vint[c]) caps[cand_[c]] = 0.0;

  // rounding v upward can overdraw the budget; shed the weakest candidates,
  // then shrink capacity increments toward the base design if needed
  while (design_cost(caps, ucaps, vint) > budget + kBudgetTol) {
    int drop = -1;
    double best = 2.0;
    for (std::size_t c = 0; c < cand_.size(); ++c)
      if (vint[c] && vfrac[c] < best) { best = vfrac[c]; drop = c; }
    if (drop < 0) break;
    vint[drop] = 0;
    caps[cand_[drop]] = 0.0;
  }
  double over = design_cost(caps, ucaps, vint) - budget;
  if (over > kBudgetTol) {
    double inc_total = 0.0;
    const auto& edges = net_.edges();
    const auto& nodes = net_.nodes();
    for (std::size_t e = 0; e < edges.size(); ++e)
      inc_total += std::max(0.0, caps[e] - edges[e].flow_upper);
    for (std::size_t n : ctrl_)
      inc_total += std::max(0.0, ucaps[n] - nodes[n].control_upper);
    if (inc_total <= 0.0) return false;
    double s = std::max(0.0, 1.0 - over / inc_total);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (caps[e] > edges[e].flow_upper)
        caps[e] = edges[e].flow_upper + s * (caps[e] - edges[e].flow_upper);
    std::vector<double> u2 = ucaps;
    for (std::size_t n : ctrl_)
      if (u2[n] > nodes[n].control_upper)
        u2[n] = nodes[n].control_upper + s * (u2[n] - nodes[n].control_upper);
    return try_incumbent(budget, caps, u2,
                         std::vector<double>(vint.begin(), vint.end()), inc);
  }

  std::vector<int> credit(patterns_.size(), 0);
  parallel_for(viable_.size(), 1, [&](std::size_t i) {
    std::size_t p = viable_[i];
    credit[p] = exact_pattern_credit(p, caps, ucaps, vint);
  });
  long total = 0;
  for (std::size_t p : viable_) total += credit[p] * patterns_[p].weight;
  double cost = design_cost(caps, ucaps, vint);
  if (total > inc.credits ||
      (total == inc.credits && cost < inc.cost - 1e-9)) {
    inc.credits = total;
    inc.cost = cost;
    inc.caps = caps;
    inc.ucaps = ucaps;
    inc.vint = vint;
    inc.pattern_credit = credit;
    return true;
  }
  return false;
}

DesignResult Engine::assemble(const std::vector<double>& caps,
                              const std::vector<double>& ucaps,
                              const std::vector<std::uint8_t>& vint,
                              const std::vector<int>& pattern_credit) const {
  const auto& edges = net_.edges();
  const auto& nodes = net_.nodes();
  DesignResult out;
  for (std::size_t c = 0; c < cand_.size(); ++c)
    out.chosen_edges[edges[cand_[c]].id] = vint.empty() ? 0 : vint[c];
  for (std::size_t e = 0; e < edges.size(); ++e)
    out.flow_caps[edges[e].id] = caps[e];
  for (std::size_t n : ctrl_) out.control_caps[nodes[n].id] = ucaps[n];
  out.cost = design_cost(caps, ucaps, vint);
  const auto& list = prob_.scenarios.scenarios;
  out.functional.assign(list.size(), 0);
  long total = 0;
  for (std::size_t k = 0; k < list.size(); ++k) {
    int c = pattern_credit[pattern_of_[k]];
    out.functional[k] = static_cast<std::uint8_t>(c);
    total += c;
  }
  out.reliability = static_cast<double>(total) / list.size();
  return out;
}

DesignResult Engine::exact_solve(double budget) {
  Incumbent inc;
  {
    // zero-spend baseline, so equal-credit ties resolve to no spend
    std::vector<double> caps(net_.edges().size(), 0.0), ucaps;
    for (std::size_t e = 0; e < caps.size(); ++e)
      caps[e] = net_.edges()[e].flow_upper;
    ucaps.assign(net_.nodes().size(), 0.0);
    for (std::size_t n : ctrl_) ucaps[n] = net_.nodes()[n].control_upper;
    try_incumbent(budget, caps, ucaps, std::vector<double>(cand_.size(), 0.0),
                  inc);
  }
  if (carried_.credits >= 0 && carried_.cost <= budget + kBudgetTol) {
    // the previous (cheaper) budget's optimum seeds this one
    try_incumbent(budget, carried_.caps, carried_.ucaps,
                  std::vector<double>(carried_.vint.begin(),
                                      carried_.vint.end()),
                  inc);
  }

  std::priority_queue<BBNode, std::vector<BBNode>, BBNodeOrder> open;
  BBNode root;
  root.pstate.assign(patterns_.size(), kFree);
  root.vfix.assign(cand_.size(), -1);
  root.bound = kInf;
  open.push(root);
  long seq = 1;
  long nodes_done = 0;

  while (!open.empty()) {
    BBNode node = open.top();
    open.pop();
    if (node.bound < kInf &&
        static_cast<long>(std::floor(node.bound + 1e-6)) <= inc.credits)
      break;  // best-first: every remaining node closes too
    if (++nodes_done > prob_.node_limit)
      throw DesignLimitError("design branch-and-bound node limit reached");

    KelleyResult rel = kelley(budget, node.pstate, node.vfix, inc.credits);
    if (!rel.feasible) continue;
    long bound_int = static_cast<long>(std::floor(rel.credits + 1e-6));
    if (bound_int <= inc.credits) continue;

    try_incumbent(budget, rel.caps, rel.ucaps, rel.v, inc);
    if (bound_int <= inc.credits) continue;

    // branch on the most fractional candidate selection first
    int bc = -1;
    double bf = kIntTol;
    for (std::size_t c = 0; c < cand_.size() && topology_; ++c) {
      if (node.vfix[c] != -1) continue;
      double f = std::min(rel.v[c], 1.0 - rel.v[c]);
      if (f > bf) { bf = f; bc = static_cast<int>(c); }
    }
    if (bc >= 0) {
      for (int side = 0; side < 2; ++side) {
        BBNode child = node;
        child.vfix[bc] = static_cast<std::int8_t>(side);
        child.bound = rel.credits;
        child.seq = seq++;
        open.push(child);
      }
      continue;
    }

    // then on the pattern whose credit is most fractional (weighted), or,
    // if the bound is loose, on the largest unresolved violation
    int bp = -1;
    double score = kIntTol;
    for (std::size_t p : viable_) {
      if (node.pstate[p] != kFree) continue;
      double f = std::min(rel.theta[p], 1.0 - rel.theta[p]);
      double s = patterns_[p].weight * f;
      if (s > score) { score = s; bp = static_cast<int>(p); }
    }
    if (bp < 0 && !rel.converged) {
      for (std::size_t p : viable_) {
        if (node.pstate[p] != kFree) continue;
        double s = patterns_[p].weight * (rel.theta[p] - rel.subvalue[p]);
        if (s > score) { score = s; bp = static_cast<int>(p); }
      }
    }
    if (bp < 0) continue;  // integral and converged: incumbent matched bound
    for (std::int8_t st : {kServe, kAbandon}) {
      BBNode child = node;
      child.pstate[bp] = st;
      child.bound = rel.credits;
      child.seq = seq++;
      open.push(child);
    }
  }

  if (inc.credits < 0)
    throw std::runtime_error("design search found no feasible design");
  carried_ = inc;
  return assemble(inc.caps, inc.ucaps, inc.vint, inc.pattern_credit);
}

DesignResult Engine::relaxed_solve(double budget) {
  std::vector<std::int8_t> pstate(patterns_.size(), kFree);
  std::vector<std::int8_t> vfix(cand_.size(), -1);
  KelleyResult root = kelley(budget, pstate, vfix, -1, 3);
  if (!root.feasible)
    throw std::runtime_error("relaxed design master infeasible");
  double relaxed_obj =
      root.credits / static_cast<double>(prob_.scenarios.scenarios.size());

  KelleyResult fin = root;
  if (topology_ && !cand_.empty()) {
    std::vector<double> vfrac = root.v;
    for (std::size_t c = 0; c < cand_.size(); ++c)
      vfix[c] = root.v[c] > 0.5 ? 1 : 0;
    // re-optimize capacities with the rounded topology; shed candidates if
    // their capital alone no longer fits
    for (;;) {
      fin = kelley(budget, pstate, vfix, -1, 3);
      if (fin.feasible) break;
      int drop = -1;
      double best = 2.0;
      for (std::size_t c = 0; c < cand_.size(); ++c)
        if (vfix[c] == 1 && vfrac[c] < best) { best = vfrac[c]; drop = c; }
      if (drop < 0)
        throw std::runtime_error("rounded topology cannot meet the budget");
      vfix[drop] = 0;
    }
  }

  // freeze the design and judge each pattern by the rounded indicators
  std::vector<std::uint8_t> vint(cand_.size(), 0);
  for (std::size_t c = 0; c < cand_.size() && topology_; ++c)
    vint[c] = vfix[c] == 1;
  std::vector<double> caps = fin.caps;
  for (std::size_t c = 0; c < cand_.size(); ++c)
    if (!vint[c]) caps[cand_[c]] = 0.0;
  std::vector<int> credit(patterns_.size(), 0);
  for (std::size_t p : viable_) {
    const PatternModel& pm = patterns_[p];
    const auto& primal = fin.sub_primal[p];
    if (primal.empty()) continue;
    int ok = 1;
    for (std::size_t n : pm.judged_live)
      if (rounding_rule(primal[pm.sub.y_var[n]])) ok = 0;
    credit[p] = ok;
  }
  DesignResult out = assemble(caps, fin.ucaps, vint, credit);
  out.relaxed_objective = relaxed_obj;
  return out;
}

DesignResult Engine::run(double budget) {
  auto t0 = std::chrono::steady_clock::now();
  DesignResult out = prob_.relaxed ? relaxed_solve(budget) : exact_solve(budget);
  out.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace

double cost_of(const Network& network,
               const std::map<std::string, int>& chosen_edges,
               const std::map<std::string, double>& flow_caps,
               const std::map<std::string, double>& control_caps,
               double edge_capital_cost) {
  double cost = 0.0;
  for (const auto& e : network.edges()) {
    auto capit = flow_caps.find(e.id);
    double cap = capit == flow_caps.end() ? e.flow_upper : capit->second;
    if (e.is_candidate) {
      auto vit = chosen_edges.find(e.id);
      if (vit == chosen_edges.end() || vit->second == 0) continue;
      cost += e.capital_cost > 0.0 ? e.capital_cost : edge_capital_cost;
    }
    cost += std::max(0.0, cap - e.flow_upper);
  }
  for (const auto& n : network.nodes()) {
    if (!n.controllable) continue;
    auto it = control_caps.find(n.id);
    if (it != control_caps.end())
      cost += std::max(0.0, it->second - n.control_upper);
  }
  return cost;
}

DesignResult solve_design(const DesignProblem& problem) {
  Engine engine(problem);
  return engine.run(problem.budget);
}

ParetoFrontier pareto_sweep(const DesignProblem& problem,
                            const std::vector<double>& budgets) {
  Engine engine(problem);
  ParetoFrontier front;
  for (double b : budgets) {
    ParetoPoint pt;
    pt.budget = b;
    try {
      pt.result = engine.run(b);
      pt.cost = pt.result.cost;
      pt.reliability = pt.result.reliability;
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
    }
    front.pairs.push_back(std::move(pt));
  }
  return front;
}

double active_difference(const DesignResult& exact,
                         const DesignResult& relaxed) {
  if (exact.functional.size() != relaxed.functional.size() ||
      exact.functional.empty())
    throw std::invalid_argument(
        "active difference needs matching scenario sets");
  std::size_t diff = 0;
  for (std::size_t k = 0; k < exact.functional.size(); ++k)
    diff += exact.functional[k] != relaxed.functional[k];
  return 100.0 * static_cast<double>(diff) / exact.functional.size();
}

Network apply_design(const Network& network, const DesignResult& result) {
  std::vector<Node> nodes = network.nodes();
  for (auto& n : nodes) {
    auto it = result.control_caps.find(n.id);
    if (n.controllable && it != result.control_caps.end())
      n.control_upper = it->second;
  }
  std::vector<Edge> edges;
  for (const Edge& e : network.edges()) {
    Edge out = e;
    auto capit = result.flow_caps.find(e.id);
    if (capit != result.flow_caps.end()) out.flow_upper = capit->second;
    if (e.is_candidate) {
      out.is_candidate = false;
      out.capital_cost = 0.0;  // already paid; keeps the overlay valid
      auto it = result.chosen_edges.find(e.id);
      if (it == result.chosen_edges.end() || it->second == 0)
        out.flow_upper = 0.0;  // kept, so scenario sets stay aligned
    }
    edges.push_back(std::move(out));
  }
  return Network(network.name(), std::move(nodes), std::move(edges));
}

}  // namespace relnet
