#pragma once
#include <memory>
#include <string>
#include <vector>

#include "relnet/graph.hpp"

namespace relnet {

// Series/parallel reliability block diagram expression tree.
struct RbdExpr {
  enum class Kind { Component, Series, Parallel };
  Kind kind = Kind::Component;
  std::string id;                    // Component
  double reliability = 1.0;          // Component: survival probability
  LifetimeDistribution lifetime = LifetimeDistribution::always_on();
  std::vector<RbdExpr> children;     // Series/Parallel, nonempty

  static RbdExpr component(std::string id, double reliability) {
    RbdExpr e;
    e.kind = Kind::Component;
    e.id = std::move(id);
    e.reliability = reliability;
    e.lifetime = LifetimeDistribution::bernoulli(reliability);
    return e;
  }
  static RbdExpr component(std::string id, LifetimeDistribution lifetime,
                           double eval_time) {
    RbdExpr e;
    e.kind = Kind::Component;
    e.id = std::move(id);
    e.lifetime = lifetime;
    e.reliability = lifetime.survival(eval_time);
    return e;
  }
  static RbdExpr series(std::vector<RbdExpr> children) {
    RbdExpr e;
    e.kind = Kind::Series;
    e.children = std::move(children);
    return e;
  }
  static RbdExpr parallel(std::vector<RbdExpr> children) {
    RbdExpr e;
    e.kind = Kind::Parallel;
    e.children = std::move(children);
    return e;
  }
};

// Analytic reliability: series multiplies reliabilities, parallel
// multiplies unreliabilities.
double eval_rbd(const RbdExpr& expr);

// Compile the diagram into a single source/sink flow network: components
// become nodes carrying their survival distribution, series chains them,
// parallel branches fan out and merge through always-on junction relays.
Network rbd_to_network(const RbdExpr& expr);

}  // namespace relnet
