#pragma once
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "relnet/reliability.hpp"

namespace relnet {

class DesignLimitError : public std::runtime_error {
 public:
  explicit DesignLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

struct DesignProblem {
  Network network;        // with candidate edges flagged
  ScenarioSet scenarios;  // common random numbers across a sweep
  double budget = 0.0;    // epsilon, cost units
  bool enable_topology = false;  // include v variables over candidates
  double edge_capital_cost = 100.0;  // default capital per candidate edge
  LogicSpec logic;
  bool relaxed = false;  // continuous relaxation + rounding
  int workers = 1;
  int node_limit = 20000;
};

struct DesignResult {
  double reliability = 0.0;  // of the frozen design on the scenario set
  double cost = 0.0;
  std::map<std::string, int> chosen_edges;       // candidate id -> 0/1
  std::map<std::string, double> flow_caps;       // edge id -> chosen upper
  std::map<std::string, double> control_caps;    // node id -> chosen upper
  double solve_seconds = 0.0;
  // relaxed mode: optimal value of the continuous relaxation (upper bound
  // on the exact optimum) before any rounding
  double relaxed_objective = 0.0;
  // per-scenario functional flags of the frozen design
  std::vector<std::uint8_t> functional;
};

struct ParetoPoint {
  double budget = 0.0;
  double cost = 0.0;
  double reliability = 0.0;
  DesignResult result;
  bool failed = false;
  std::string error;
};

struct ParetoFrontier {
  std::vector<ParetoPoint> pairs;
};

// c = sum over candidates (capital * v_e) + incremental capacity above the
// base design: sum max(0, zbar_e - base_e) + sum max(0, ubar_n - base_n).
// Candidates that are off contribute nothing.
double cost_of(const Network& network,
               const std::map<std::string, int>& chosen_edges,
               const std::map<std::string, double>& flow_caps,
               const std::map<std::string, double>& control_caps,
               double edge_capital_cost);

DesignResult solve_design(const DesignProblem& problem);

ParetoFrontier pareto_sweep(const DesignProblem& problem,
                            const std::vector<double>& budgets);

// Percentage of scenarios whose functional indicator differs.
double active_difference(const DesignResult& exact, const DesignResult& relaxed);

// Freeze a design into a plain network: candidates become regular edges
// (unchosen ones at zero capacity, so scenario sets stay aligned) and
// capacities are replaced by the design's.
Network apply_design(const Network& network, const DesignResult& result);

}  // namespace relnet
