#pragma once
#include <set>
#include <vector>

#include "relnet/lp.hpp"

namespace relnet {

struct MixedIntegerProgram {
  LinearProgram lp;
  std::set<std::size_t> binary_vars;  // bounds must be within [0, 1]
};

enum class MipStatus { Optimal, Infeasible };

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  double objective_value = 0.0;
  std::vector<double> primal;  // binaries snapped to exact 0/1
  int nodes_explored = 0;
};

class NodeLimitError : public std::runtime_error {
 public:
  NodeLimitError(const std::string& what, MipSolution incumbent)
      : std::runtime_error(what), incumbent(std::move(incumbent)) {}
  MipSolution incumbent;
};

// Best-bound branch and bound over the binary variables; branching picks
// the most fractional binary, ties to the lowest index.
MipSolution solve_mip(const MixedIntegerProgram& mip, int node_limit = 200000);

}  // namespace relnet
