#pragma once
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace relnet {

enum class NodeRole { Source, Sink, Relay };

struct LifetimeDistribution {
  enum class Kind { Exponential, AlwaysOn, Bernoulli };
  Kind kind = Kind::AlwaysOn;
  double mean = 0.0;          // Exponential: mean lifetime in years
  double survive_prob = 1.0;  // Bernoulli

  static LifetimeDistribution exponential(double mean) {
    return {Kind::Exponential, mean, 0.0};
  }
  static LifetimeDistribution always_on() { return {Kind::AlwaysOn, 0.0, 1.0}; }
  static LifetimeDistribution bernoulli(double p) {
    return {Kind::Bernoulli, 0.0, p};
  }

  // P(component still functions at time t)
  double survival(double t) const {
    switch (kind) {
      case Kind::Exponential: return std::exp(-t / mean);
      case Kind::AlwaysOn: return 1.0;
      case Kind::Bernoulli: return survive_prob;
    }
    return 1.0;
  }

  bool operator==(const LifetimeDistribution&) const = default;
};

struct Node {
  std::string id;
  NodeRole role = NodeRole::Relay;
  double d = 0.0;  // fixed flow: >0 source, <0 sink, 0 relay
  bool controllable = false;
  double control_lower = 0.0;
  double control_upper = 0.0;
  double control_menu_upper = -1.0;  // <0: default menu (10x base)
  LifetimeDistribution lifetime = LifetimeDistribution::always_on();
};

struct Edge {
  std::string id;
  std::string tail;
  std::string head;
  double flow_lower = 0.0;
  double flow_upper = 0.0;
  double cap_menu_upper = -1.0;  // <0: default menu (10x base)
  LifetimeDistribution lifetime = LifetimeDistribution::always_on();
  bool is_candidate = false;
  double capital_cost = 0.0;
};

class Network {
 public:
  Network() = default;
  Network(std::string name, std::vector<Node> nodes, std::vector<Edge> edges);

  const std::string& name() const { return name_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<std::size_t> node_index(const std::string& id) const;
  std::optional<std::size_t> edge_index(const std::string& id) const;

  std::size_t tail_index(std::size_t e) const { return tail_idx_[e]; }
  std::size_t head_index(std::size_t e) const { return head_idx_[e]; }

  const std::vector<std::size_t>& out_edges(std::size_t n) const {
    return out_edges_[n];
  }
  const std::vector<std::size_t>& in_edges(std::size_t n) const {
    return in_edges_[n];
  }

  std::vector<std::size_t> source_indices() const;
  std::vector<std::size_t> sink_indices() const;
  // nodes carrying a relaxation indicator y: fixed flow d != 0
  std::vector<std::size_t> indicator_nodes() const;
  std::vector<std::size_t> candidate_edge_indices() const;
  std::vector<std::size_t> base_edge_indices() const;

  // +1 = edge enters node, -1 = edge leaves node (row n, column e)
  std::vector<std::vector<double>> incidence() const;

  std::vector<std::string> validate() const;

  // expanded network E ∪ Ê with the extra edges flagged as candidates;
  // throws std::invalid_argument on duplicate ids
  Network with_candidates(std::vector<Edge> candidates) const;

 private:
  void build_adjacency();

  std::string name_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> node_idx_;
  std::unordered_map<std::string, std::size_t> edge_idx_;
  std::vector<std::size_t> tail_idx_, head_idx_;
  std::vector<std::vector<std::size_t>> out_edges_, in_edges_;
};

}  // namespace relnet
