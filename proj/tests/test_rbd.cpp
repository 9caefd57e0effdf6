#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "relnet/json_io.hpp"
#include "relnet/rbd.hpp"
#include "relnet/reliability.hpp"
#include "relnet/rng.hpp"

using namespace relnet;

namespace {

const std::string kDataDir = RELNET_DATA_DIR;

// Structure-function oracle: P(system works) by enumerating every
// component on/off mask of the tree.
void collect(const RbdExpr& e, std::vector<const RbdExpr*>& comps) {
  if (e.kind == RbdExpr::Kind::Component) {
    comps.push_back(&e);
    return;
  }
  for (const auto& c : e.children) collect(c, comps);
}

bool works(const RbdExpr& e, const std::vector<const RbdExpr*>& comps,
           std::size_t mask) {
  switch (e.kind) {
    case RbdExpr::Kind::Component:
      for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i] == &e) return (mask >> i) & 1;
      return false;
    case RbdExpr::Kind::Series:
      for (const auto& c : e.children)
        if (!works(c, comps, mask)) return false;
      return true;
    case RbdExpr::Kind::Parallel:
      for (const auto& c : e.children)
        if (works(c, comps, mask)) return true;
      return false;
  }
  return false;
}

double oracle(const RbdExpr& e) {
  std::vector<const RbdExpr*> comps;
  collect(e, comps);
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << comps.size()); ++mask) {
    if (!works(e, comps, mask)) continue;
    double w = 1.0;
    for (std::size_t i = 0; i < comps.size(); ++i)
      w *= ((mask >> i) & 1) ? comps[i]->reliability
                             : 1.0 - comps[i]->reliability;
    total += w;
  }
  return total;
}

RbdExpr random_tree(SplitMix64& rng, int depth, int& counter) {
  if (depth == 0 || rng.next() % 3 == 0)
    return RbdExpr::component("c" + std::to_string(counter++),
                              0.05 + 0.9 * rng.uniform());
  std::vector<RbdExpr> kids;
  std::size_t n = 2 + rng.next() % 2;
  for (std::size_t i = 0; i < n; ++i)
    kids.push_back(random_tree(rng, depth - 1, counter));
  return rng.next() % 2 ? RbdExpr::series(std::move(kids))
                        : RbdExpr::parallel(std::move(kids));
}

}  // namespace

TEST_CASE("pump diagram analytic value") {
  RbdExpr pump = load_rbd_file(kDataDir + "/pump.json");
  // R = r^2 (1 - (1 - r^2)^2) with r = exp(-5/100)
  double r = std::exp(-5.0 / 100.0);
  double expected = r * r * (1.0 - (1.0 - r * r) * (1.0 - r * r));
  CHECK(eval_rbd(pump) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(eval_rbd(pump) == doctest::Approx(0.896643).epsilon(1e-6));
}

TEST_CASE("algebraic identities") {
  RbdExpr good = RbdExpr::component("good", 1.0);
  RbdExpr dead = RbdExpr::component("dead", 0.0);
  RbdExpr half = RbdExpr::component("half", 0.5);
  CHECK(eval_rbd(RbdExpr::series({half})) == 0.5);
  CHECK(eval_rbd(RbdExpr::parallel({half})) == 0.5);
  CHECK(eval_rbd(RbdExpr::series({half, dead})) == 0.0);
  CHECK(eval_rbd(RbdExpr::series({half, good})) == 0.5);
  CHECK(eval_rbd(RbdExpr::parallel({half, good})) == 1.0);
  CHECK(eval_rbd(RbdExpr::parallel({half, dead})) == 0.5);
  CHECK(eval_rbd(RbdExpr::parallel({half, half})) == doctest::Approx(0.75));
}

TEST_CASE("random trees match the structure-function oracle") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    int counter = 0;
    RbdExpr tree = random_tree(rng, 3, counter);
    std::vector<const RbdExpr*> comps;
    collect(tree, comps);
    if (comps.size() > 14) continue;
    CHECK(eval_rbd(tree) == doctest::Approx(oracle(tree)).epsilon(1e-12));
  }
}

TEST_CASE("rbd_to_network compiles to an equivalent flow network") {
  RbdExpr pump = load_rbd_file(kDataDir + "/pump.json");
  Network net = rbd_to_network(pump);
  CHECK(net.validate().empty());
  CHECK(net.source_indices().size() == 1);
  CHECK(net.sink_indices().size() == 1);

  // exhaustive enumeration over the network equals the analytic value
  auto [set, weights] = enumerate_failure_scenarios(net, 5.0);
  ReliabilityEstimate exact = estimate_reliability_weighted(
      net, set, weights, LogicSpec::all_sinks(), true);
  CHECK(exact.value == doctest::Approx(eval_rbd(pump)).epsilon(1e-12));

  // seeded Monte Carlo lands near it
  ScenarioSet mc = sample_scenarios(net, 10000, 5.0, 7);
  ReliabilityEstimate est =
      estimate_reliability(net, mc, LogicSpec::all_sinks(), false);
  CHECK(std::fabs(est.value - eval_rbd(pump)) < 0.01);
}

TEST_CASE("component eval_time derives reliability from the lifetime") {
  RbdExpr c = RbdExpr::component(
      "c", LifetimeDistribution::exponential(100.0), 5.0);
  CHECK(c.reliability == doctest::Approx(std::exp(-0.05)));
}
