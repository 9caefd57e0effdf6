#include "relnet/rbd.hpp"

#include <stdexcept>

namespace relnet {

double eval_rbd(const RbdExpr& expr) {
  switch (expr.kind) {
    case RbdExpr::Kind::Component:
      if (expr.reliability < 0.0 || expr.reliability > 1.0)
        throw std::invalid_argument("component reliability outside [0,1]");
      return expr.reliability;
    case RbdExpr::Kind::Series: {
      if (expr.children.empty())
        throw std::invalid_argument("series block with no children");
      double r = 1.0;
      for (const auto& c : expr.children) r *= eval_rbd(c);
      return r;
    }
    case RbdExpr::Kind::Parallel: {
      if (expr.children.empty())
        throw std::invalid_argument("parallel block with no children");
      double q = 1.0;
      for (const auto& c : expr.children) q *= 1.0 - eval_rbd(c);
      return 1.0 - q;
    }
  }
  return 0.0;
}

namespace {

struct Compiler {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int junctions = 0;

  std::string add_relay(const std::string& id,
                        const LifetimeDistribution& life) {
    Node n;
    n.id = id;
    n.role = NodeRole::Relay;
    n.lifetime = life;
    nodes.push_back(std::move(n));
    return nodes.back().id;
  }

  void connect(const std::string& from, const std::string& to) {
    Edge e;
    e.id = "e" + std::to_string(edges.size());
    e.tail = from;
    e.head = to;
    e.flow_upper = kEdgeCap;
    edges.push_back(std::move(e));
  }

  // returns {entry, exit} node ids of the compiled block
  std::pair<std::string, std::string> compile(const RbdExpr& expr) {
    switch (expr.kind) {
      case RbdExpr::Kind::Component: {
        auto id = add_relay(expr.id, expr.lifetime);
        return {id, id};
      }
      case RbdExpr::Kind::Series: {
        if (expr.children.empty())
          throw std::invalid_argument("series block with no children");
        auto [entry, prev] = compile(expr.children.front());
        for (std::size_t i = 1; i < expr.children.size(); ++i) {
          auto [in, out] = compile(expr.children[i]);
          connect(prev, in);
          prev = out;
        }
        return {entry, prev};
      }
      case RbdExpr::Kind::Parallel: {
        if (expr.children.empty())
          throw std::invalid_argument("parallel block with no children");
        auto split = add_relay("split" + std::to_string(junctions),
                               LifetimeDistribution::always_on());
        auto merge = add_relay("merge" + std::to_string(junctions),
                               LifetimeDistribution::always_on());
        ++junctions;
        for (const auto& c : expr.children) {
          auto [in, out] = compile(c);
          connect(split, in);
          connect(out, merge);
        }
        return {split, merge};
      }
    }
    throw std::logic_error("unreachable");
  }

  static constexpr double kEdgeCap = 1e9;  // effectively unbounded
};

}  // namespace

Network rbd_to_network(const RbdExpr& expr) {
  Compiler c;
  auto [entry, exit] = c.compile(expr);

  Node src;
  src.id = "source";
  src.role = NodeRole::Source;
  src.d = 1.0;
  Node sink;
  sink.id = "sink";
  sink.role = NodeRole::Sink;
  sink.d = -1.0;
  c.nodes.push_back(src);
  c.nodes.push_back(sink);
  c.connect("source", entry);
  c.connect(exit, "sink");

  Network net("rbd", std::move(c.nodes), std::move(c.edges));
  auto violations = net.validate();
  if (!violations.empty())
    throw std::invalid_argument("compiled RBD network invalid: " +
                                violations.front());
  return net;
}

}  // namespace relnet
