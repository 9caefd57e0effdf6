#pragma once
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relnet/scenario.hpp"

namespace relnet {

struct LogicSpec {
  enum class Mode { AllSinks, SubsetReachable };
  Mode mode = Mode::AllSinks;
  std::set<std::string> required;  // sink ids, SubsetReachable only

  static LogicSpec all_sinks() { return {}; }
  static LogicSpec subset(std::set<std::string> ids) {
    return {Mode::SubsetReachable, std::move(ids)};
  }
};

struct FeasibilityOutcome {
  bool functional = false;
  std::map<std::string, int> y;           // indicator per source/sink node
  std::map<std::string, double> flows;    // per surviving edge
  std::map<std::string, double> controls; // per surviving controllable node
};

struct ReliabilityEstimate {
  double value = 0.0;
  long samples = 0;
  double standard_error = 0.0;
  std::vector<FeasibilityOutcome> per_scenario;
};

// Continuous relaxation rounding: any nonzero indicator means the node had
// to be relaxed.
int rounding_rule(double relaxed_y);

// Single source/sink feasibility with normalized flows (+1/-1), no
// controls and unbounded nonnegative flows; solved as the LP relaxation,
// which is exact for this structure.
FeasibilityOutcome psi_single(const Network& network, const Scenario& scenario);

// General multi-source/sink feasibility with flow bounds and controls.
// use_milp selects exact branch and bound; otherwise LP + rounding.
FeasibilityOutcome psi_general(const Network& network, const Scenario& scenario,
                               const LogicSpec& logic, bool use_milp);

ReliabilityEstimate estimate_reliability(const Network& network,
                                         const ScenarioSet& scenarios,
                                         const LogicSpec& logic, bool use_milp,
                                         int workers = 1);

// Probability-weighted estimate over an explicitly enumerated scenario set
// (weights summing to 1); used for exhaustive evaluation of small systems.
ReliabilityEstimate estimate_reliability_weighted(
    const Network& network, const ScenarioSet& scenarios,
    const std::vector<double>& weights, const LogicSpec& logic, bool use_milp,
    int workers = 1);

// All 2^m survival patterns over the components whose survival probability
// at the threshold is strictly between 0 and 1 (at most max_components).
// Returns the scenario set and the probability of each pattern.
std::pair<ScenarioSet, std::vector<double>> enumerate_failure_scenarios(
    const Network& network, double threshold_years, int max_components = 20);

}  // namespace relnet
