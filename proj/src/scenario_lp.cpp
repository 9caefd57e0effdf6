#include "relnet/detail/scenario_lp.hpp"

#include <stdexcept>

namespace relnet::detail {

ScenarioLp build_scenario_lp(const Network& net, const Scenario& sc,
                             const ScenarioLpOptions& opt) {
  const auto& nodes = net.nodes();
  const auto& edges = net.edges();
  if (sc.xi_nodes.size() != nodes.size() || sc.xi_edges.size() != edges.size())
    throw std::invalid_argument("scenario dimensions do not match network");

  const auto cand = net.candidate_edge_indices();
  std::vector<std::uint8_t> cand_on(edges.size(), 1);
  for (std::size_t c = 0; c < cand.size(); ++c)
    cand_on[cand[c]] =
        c < opt.candidate_active.size() ? opt.candidate_active[c] : 0;

  const auto edge_alive = effective_edge_alive(net, sc);

  ScenarioLp out;
  out.z_var.assign(edges.size(), SIZE_MAX);
  out.u_var.assign(nodes.size(), SIZE_MAX);
  out.y_var.assign(nodes.size(), SIZE_MAX);
  out.cap_row_edge.assign(edges.size(), SIZE_MAX);
  out.cap_row_node.assign(nodes.size(), SIZE_MAX);
  LinearProgram& lp = out.lp;

  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!edge_alive[e] || !cand_on[e]) continue;
    double lo = opt.unbounded_flows ? 0.0 : edges[e].flow_lower;
    double hi;
    if (opt.unbounded_flows) hi = kInf;
    else if (opt.cap_rows) hi = kInf;  // bounded by the cap row instead
    else if (e < opt.edge_cap.size()) hi = opt.edge_cap[e];
    else hi = edges[e].flow_upper;
    out.z_var[e] = lp.add_var(0.0, lo, hi);
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (!nodes[n].controllable || !sc.xi_nodes[n]) continue;
    double hi;
    if (opt.cap_rows) hi = kInf;
    else if (n < opt.node_cap.size()) hi = opt.node_cap[n];
    else hi = nodes[n].control_upper;
    out.u_var[n] = lp.add_var(0.0, nodes[n].control_lower, hi);
  }

  std::size_t shared_y = SIZE_MAX;
  if (opt.single_y) shared_y = lp.add_var(-1.0, 0.0, 1.0);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].role == NodeRole::Relay || nodes[n].d == 0.0) continue;
    if (!sc.xi_nodes[n]) {
      out.forced_y1.push_back(n);
      continue;
    }
    out.objective_constant += 1.0;
    out.y_var[n] = opt.single_y ? shared_y : lp.add_var(-1.0, 0.0, 1.0);
  }
  if (opt.single_y) out.objective_constant = 1.0;

  // balance per surviving node: sum(in z) - sum(out z) - d*y + u = -d
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (!sc.xi_nodes[n]) continue;
    LpRow row;
    row.coeffs.assign(lp.num_vars(), 0.0);
    row.rel = Relation::Eq;
    double d = nodes[n].d;
    if (opt.normalize_d && d != 0.0) d = d > 0.0 ? 1.0 : -1.0;
    for (std::size_t e : net.in_edges(n))
      if (out.z_var[e] != SIZE_MAX) row.coeffs[out.z_var[e]] += 1.0;
    for (std::size_t e : net.out_edges(n))
      if (out.z_var[e] != SIZE_MAX) row.coeffs[out.z_var[e]] -= 1.0;
    if (out.u_var[n] != SIZE_MAX) row.coeffs[out.u_var[n]] += 1.0;
    if (out.y_var[n] != SIZE_MAX) row.coeffs[out.y_var[n]] -= d;
    row.rhs = -d;
    lp.add_row(std::move(row));
  }

  if (opt.cap_rows) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (out.z_var[e] == SIZE_MAX) continue;
      LpRow row;
      row.coeffs.assign(lp.num_vars(), 0.0);
      row.coeffs[out.z_var[e]] = 1.0;
      row.rel = Relation::Le;
      row.rhs = e < opt.edge_cap.size() ? opt.edge_cap[e] : edges[e].flow_upper;
      out.cap_row_edge[e] = lp.add_row(std::move(row));
    }
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (out.u_var[n] == SIZE_MAX) continue;
      LpRow row;
      row.coeffs.assign(lp.num_vars(), 0.0);
      row.coeffs[out.u_var[n]] = 1.0;
      row.rel = Relation::Le;
      row.rhs =
          n < opt.node_cap.size() ? opt.node_cap[n] : nodes[n].control_upper;
      out.cap_row_node[n] = lp.add_row(std::move(row));
    }
  }

  // rows were appended after variables; pad widths
  for (auto& row : lp.rows) row.coeffs.resize(lp.num_vars(), 0.0);
  return out;
}

}  // namespace relnet::detail
