#pragma once
#include <cstddef>
#include <vector>

#include "relnet/lp.hpp"
#include "relnet/scenario.hpp"

namespace relnet::detail {

// Options for building one scenario's feasibility LP.
struct ScenarioLpOptions {
  bool single_y = false;        // one indicator shared by source and sink
  bool unbounded_flows = false; // ignore flow upper bounds (Z = R_+)
  bool normalize_d = false;     // replace d by +-1 (single source/sink form)
  bool cap_rows = false;        // emit z_e <= cap and u_n <= cap as rows
  // per-edge / per-node capacity overrides; empty = use network bounds
  std::vector<double> edge_cap;
  std::vector<double> node_cap;
  // candidate edges switched on (indexed like candidate_edge_indices());
  // empty = all candidates off
  std::vector<std::uint8_t> candidate_active;
};

struct ScenarioLp {
  LinearProgram lp;
  double objective_constant = 0.0;     // number of live indicator terms
  std::vector<std::size_t> z_var;      // per edge, SIZE_MAX if dropped
  std::vector<std::size_t> u_var;      // per node, SIZE_MAX if none
  std::vector<std::size_t> y_var;      // per node, SIZE_MAX if none
  std::vector<std::size_t> forced_y1;  // dead nodes with fixed d != 0
  std::vector<std::size_t> cap_row_edge;  // per edge, row index (cap_rows)
  std::vector<std::size_t> cap_row_node;  // per node, row index (cap_rows)
};

ScenarioLp build_scenario_lp(const Network& net, const Scenario& sc,
                             const ScenarioLpOptions& opt);

}  // namespace relnet::detail
