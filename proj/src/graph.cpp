#include "relnet/graph.hpp"

#include <stdexcept>

namespace relnet {

Network::Network(std::string name, std::vector<Node> nodes,
                 std::vector<Edge> edges)
    : name_(std::move(name)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)) {
  build_adjacency();
}

void Network::build_adjacency() {
  node_idx_.clear();
  edge_idx_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) node_idx_[nodes_[i].id] = i;
  for (std::size_t i = 0; i < edges_.size(); ++i) edge_idx_[edges_[i].id] = i;

  tail_idx_.assign(edges_.size(), 0);
  head_idx_.assign(edges_.size(), 0);
  out_edges_.assign(nodes_.size(), {});
  in_edges_.assign(nodes_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto t = node_index(edges_[e].tail);
    auto h = node_index(edges_[e].head);
    if (!t || !h) continue;  // reported by validate()
    tail_idx_[e] = *t;
    head_idx_[e] = *h;
    out_edges_[*t].push_back(e);
    in_edges_[*h].push_back(e);
  }
}

std::optional<std::size_t> Network::node_index(const std::string& id) const {
  auto it = node_idx_.find(id);
  if (it == node_idx_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::edge_index(const std::string& id) const {
  auto it = edge_idx_.find(id);
  if (it == edge_idx_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Network::source_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].role == NodeRole::Source) out.push_back(i);
  return out;
}

std::vector<std::size_t> Network::sink_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].role == NodeRole::Sink) out.push_back(i);
  return out;
}

std::vector<std::size_t> Network::indicator_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].role != NodeRole::Relay && nodes_[i].d != 0.0)
      out.push_back(i);
  return out;
}

std::vector<std::size_t> Network::candidate_edge_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edges_[e].is_candidate) out.push_back(e);
  return out;
}

std::vector<std::size_t> Network::base_edge_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (!edges_[e].is_candidate) out.push_back(e);
  return out;
}

std::vector<std::vector<double>> Network::incidence() const {
  std::vector<std::vector<double>> A(nodes_.size(),
                                     std::vector<double>(edges_.size(), 0.0));
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    A[tail_idx_[e]][e] = -1.0;
    A[head_idx_[e]][e] = +1.0;
  }
  return A;
}

std::vector<std::string> Network::validate() const {
  std::vector<std::string> v;
  {
    std::unordered_map<std::string, int> seen;
    for (const auto& n : nodes_)
      if (++seen[n.id] == 2) v.push_back("duplicate node id: " + n.id);
  }
  {
    std::unordered_map<std::string, int> seen;
    for (const auto& e : edges_)
      if (++seen[e.id] == 2) v.push_back("duplicate edge id: " + e.id);
  }
  for (const auto& e : edges_) {
    if (!node_index(e.tail))
      v.push_back("edge " + e.id + ": unknown tail node " + e.tail);
    if (!node_index(e.head))
      v.push_back("edge " + e.id + ": unknown head node " + e.head);
    if (e.tail == e.head) v.push_back("edge " + e.id + ": self-loop");
    if (e.flow_lower < 0.0)
      v.push_back("edge " + e.id + ": flow lower bound must be >= 0");
    if (e.flow_lower > e.flow_upper)
      v.push_back("edge " + e.id + ": flow_lower > flow_upper");
    if (!e.is_candidate && e.capital_cost != 0.0)
      v.push_back("edge " + e.id + ": capital cost on a non-candidate edge");
    if (e.capital_cost < 0.0)
      v.push_back("edge " + e.id + ": negative capital cost");
  }
  bool has_source = false, has_sink = false;
  for (const auto& n : nodes_) {
    switch (n.role) {
      case NodeRole::Source:
        has_source = true;
        if (n.d < 0.0) v.push_back("node " + n.id + ": source flow must be >= 0");
        if (n.d == 0.0 && !n.controllable)
          v.push_back("node " + n.id +
                      ": source needs fixed flow d > 0 or controllable supply");
        break;
      case NodeRole::Sink:
        has_sink = true;
        if (n.d >= 0.0) v.push_back("node " + n.id + ": sink flow must be negative");
        break;
      case NodeRole::Relay:
        if (n.d != 0.0) v.push_back("node " + n.id + ": relay flow must be zero");
        break;
    }
    if (!n.controllable && (n.control_lower != 0.0 || n.control_upper != 0.0))
      v.push_back("node " + n.id + ": control bounds on a non-controllable node");
    if (n.control_lower > n.control_upper)
      v.push_back("node " + n.id + ": control_lower > control_upper");
    if (n.control_lower < 0.0)
      v.push_back("node " + n.id + ": controls must be non-negative");
  }
  if (!has_source) v.push_back("no source nodes");
  if (!has_sink) v.push_back("no sink nodes");
  return v;
}

Network Network::with_candidates(std::vector<Edge> candidates) const {
  std::vector<Edge> edges = edges_;
  for (auto& c : candidates) {
    if (edge_idx_.count(c.id))
      throw std::invalid_argument("candidate duplicates edge id: " + c.id);
    c.is_candidate = true;
    edges.push_back(std::move(c));
  }
  return Network(name_, nodes_, std::move(edges));
}

}  // namespace relnet
