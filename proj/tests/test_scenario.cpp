#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relnet/scenario.hpp"

using namespace relnet;

namespace {

Node node(std::string id, NodeRole role, double d, LifetimeDistribution life) {
  Node n;
  n.id = std::move(id);
  n.role = role;
  n.d = d;
  n.lifetime = life;
  return n;
}

Edge edge(std::string id, std::string tail, std::string head,
          LifetimeDistribution life) {
  Edge e;
  e.id = std::move(id);
  e.tail = std::move(tail);
  e.head = std::move(head);
  e.flow_upper = 1.0;
  e.lifetime = life;
  return e;
}

Network mixed_network() {
  auto exp50 = LifetimeDistribution::exponential(50.0);
  auto exp100 = LifetimeDistribution::exponential(100.0);
  return Network(
      "mixed",
      {node("s", NodeRole::Source, 1, exp100),
       node("r", NodeRole::Relay, 0, LifetimeDistribution::always_on()),
       node("t", NodeRole::Sink, -1, exp50)},
      {edge("sr", "s", "r", LifetimeDistribution::bernoulli(0.5)),
       edge("rt", "r", "t", LifetimeDistribution::always_on())});
}

bool same_scenario(const Scenario& a, const Scenario& b) {
  return a.xi_nodes == b.xi_nodes && a.xi_edges == b.xi_edges;
}

}  // namespace

TEST_CASE("reproducible and seed-sensitive") {
  Network net = mixed_network();
  ScenarioSet a = sample_scenarios(net, 200, 5.0, 11);
  ScenarioSet b = sample_scenarios(net, 200, 5.0, 11);
  ScenarioSet c = sample_scenarios(net, 200, 5.0, 12);
  REQUIRE(a.scenarios.size() == 200);
  for (int k = 0; k < 200; ++k)
    CHECK(same_scenario(a.scenarios[k], b.scenarios[k]));
  int differs = 0;
  for (int k = 0; k < 200; ++k)
    differs += !same_scenario(a.scenarios[k], c.scenarios[k]);
  CHECK(differs > 50);
}

TEST_CASE("per-scenario streams: prefixes agree regardless of count") {
  // scenario k only depends on (seed, k), never on how many are drawn
  Network net = mixed_network();
  ScenarioSet big = sample_scenarios(net, 300, 5.0, 3);
  ScenarioSet small = sample_scenarios(net, 60, 5.0, 3);
  for (int k = 0; k < 60; ++k)
    CHECK(same_scenario(big.scenarios[k], small.scenarios[k]));
}

TEST_CASE("survival frequencies match the distributions") {
  Network net = mixed_network();
  const int n = 20000;
  ScenarioSet set = sample_scenarios(net, n, 5.0, 77);
  double src = 0, sink = 0, bern = 0, relay = 0, on_edge = 0;
  for (const auto& sc : set.scenarios) {
    src += sc.xi_nodes[0];
    relay += sc.xi_nodes[1];
    sink += sc.xi_nodes[2];
    bern += sc.xi_edges[0];
    on_edge += sc.xi_edges[1];
  }
  auto within3sigma = [n](double freq, double p) {
    return std::fabs(freq / n - p) <= 3.0 * std::sqrt(p * (1 - p) / n) + 1e-12;
  };
  CHECK(within3sigma(src, std::exp(-5.0 / 100.0)));
  CHECK(within3sigma(sink, std::exp(-5.0 / 50.0)));
  CHECK(within3sigma(bern, 0.5));
  CHECK(relay == n);    // always on
  CHECK(on_edge == n);
}

TEST_CASE("degenerate distributions and validation") {
  Network net = mixed_network();
  CHECK_THROWS_AS((void)sample_scenarios(net, 0, 5.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sample_scenarios(net, 10, -1.0, 1),
                  std::invalid_argument);
  // Bernoulli(0) component is dead in every scenario
  auto nodes = net.nodes();
  auto edges = net.edges();
  edges[0].lifetime = LifetimeDistribution::bernoulli(0.0);
  Network dead("dead", nodes, edges);
  ScenarioSet set = sample_scenarios(dead, 50, 5.0, 5);
  for (const auto& sc : set.scenarios) CHECK(sc.xi_edges[0] == 0);
}

TEST_CASE("effective edge survival needs both endpoints") {
  Network net = mixed_network();
  Scenario sc;
  sc.xi_nodes = {1, 1, 1};
  sc.xi_edges = {1, 1};
  CHECK(effective_edge_alive(net, sc) == std::vector<std::uint8_t>{1, 1});
  sc.xi_nodes = {0, 1, 1};  // dead tail kills sr
  CHECK(effective_edge_alive(net, sc) == std::vector<std::uint8_t>{0, 1});
  sc.xi_nodes = {1, 0, 1};  // dead relay kills both incident edges
  CHECK(effective_edge_alive(net, sc) == std::vector<std::uint8_t>{0, 0});
  sc.xi_nodes = {1, 1, 1};
  sc.xi_edges = {0, 1};  // edge's own failure
  CHECK(effective_edge_alive(net, sc) == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("perturbed incidence masks rows, columns, and candidates") {
  Network net = mixed_network();
  Edge cand = edge("st", "s", "t", LifetimeDistribution::always_on());
  cand.is_candidate = true;
  Network grown = net.with_candidates({cand});

  Scenario sc;
  sc.xi_nodes = {1, 0, 1};
  sc.xi_edges = {1, 1, 1};
  auto A = perturbed_incidence(grown, sc, {1});
  // dead relay zeroes its row, hence both its incident columns
  for (std::size_t e = 0; e < 3; ++e) CHECK(A[1][e] == 0.0);
  // candidate column survives when switched on
  CHECK(A[0][2] == -1.0);
  CHECK(A[2][2] == +1.0);

  auto B = perturbed_incidence(grown, sc, {0});
  for (std::size_t n = 0; n < 3; ++n) CHECK(B[n][2] == 0.0);

  CHECK_THROWS_AS((void)perturbed_incidence(grown, sc, {}),
                  std::invalid_argument);
}
