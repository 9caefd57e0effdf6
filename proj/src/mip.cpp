#include "relnet/mip.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace relnet {
namespace {

struct Node {
  std::vector<std::pair<std::size_t, double>> fixings;  // var -> 0/1
  double bound = 0.0;
  long seq = 0;  // FIFO tie-break
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // best bound first
    return a.seq > b.seq;
  }
};

}  // namespace

MipSolution solve_mip(const MixedIntegerProgram& mip, int node_limit) {
  MipSolution best;
  best.status = MipStatus::Infeasible;
  double best_obj = -kInf;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;
  open.push({{}, kInf, seq++});
  int nodes = 0;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound <= best_obj + 1e-12 && best.status == MipStatus::Optimal)
      continue;
    if (nodes >= node_limit) {
      best.nodes_explored = nodes;
      throw NodeLimitError("branch-and-bound node limit exceeded", best);
    }
    ++nodes;

    LinearProgram lp = mip.lp;
    for (auto [v, val] : node.fixings) {
      lp.lower[v] = val;
      lp.upper[v] = val;
    }
    LpSolution rel = solve(lp);
    if (rel.status == LpStatus::Infeasible) continue;
    if (rel.status == LpStatus::Unbounded) {
      // unbounded relaxation with all binaries boxed means the continuous
      // part is unbounded; no binary fixing can repair that
      throw std::runtime_error("MIP relaxation unbounded");
    }
    if (rel.objective_value <= best_obj + 1e-12 &&
        best.status == MipStatus::Optimal)
      continue;

    // most fractional binary
    std::size_t branch_var = SIZE_MAX;
    double worst = kIntTol;
    for (std::size_t v : mip.binary_vars) {
      double f = std::abs(rel.primal[v] - std::round(rel.primal[v]));
      if (f > worst) {
        worst = f;
        branch_var = v;
      }
    }
    if (branch_var == SIZE_MAX) {
      // integral: candidate incumbent
      if (rel.objective_value > best_obj) {
        best_obj = rel.objective_value;
        best.status = MipStatus::Optimal;
        best.objective_value = rel.objective_value;
        best.primal = rel.primal;
        for (std::size_t v : mip.binary_vars)
          best.primal[v] = std::round(best.primal[v]);
      }
      continue;
    }
    for (double val : {0.0, 1.0}) {
      Node child;
      child.fixings = node.fixings;
      child.fixings.emplace_back(branch_var, val);
      child.bound = rel.objective_value;
      child.seq = seq++;
      open.push(std::move(child));
    }
  }
  best.nodes_explored = nodes;
  return best;
}

}  // namespace relnet
