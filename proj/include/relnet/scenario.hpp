#pragma once
#include <cstdint>
#include <vector>

#include "relnet/graph.hpp"

namespace relnet {

// One binary survival realization: 1 = functions, 0 = failed.
struct Scenario {
  std::vector<std::uint8_t> xi_nodes;
  std::vector<std::uint8_t> xi_edges;
  int index = 0;
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 0;
  double threshold_years = 0.0;
};

// Draw a lifetime per component from its distribution; the component
// survives iff the lifetime exceeds the threshold. Scenario k uses its own
// derived stream, so the set is reproducible under any parallel schedule.
ScenarioSet sample_scenarios(const Network& network, int count,
                             double threshold_years, std::uint64_t seed);

// Literal perturbed incidence Xi_N * A * Xi_E, with candidate columns
// additionally masked by the selection vector v over the candidate edges
// (v ordered as candidate_edge_indices()).
std::vector<std::vector<double>> perturbed_incidence(
    const Network& network, const Scenario& scenario,
    const std::vector<std::uint8_t>& active_candidates);

// Effective edge survival used by the feasibility models: an edge functions
// only if it survived and both endpoints survived.
std::vector<std::uint8_t> effective_edge_alive(const Network& network,
                                               const Scenario& scenario);

}  // namespace relnet
