#include "relnet/scenario.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "relnet/rng.hpp"

namespace relnet {
namespace {

constexpr double kInfLifetime = std::numeric_limits<double>::infinity();

// Lifetime by inverse CDF; AlwaysOn never fails, Bernoulli is a coin with
// lifetime 0 or +inf so the threshold comparison still applies.
double draw_lifetime(const LifetimeDistribution& dist, SplitMix64& rng) {
  switch (dist.kind) {
    case LifetimeDistribution::Kind::Exponential:
      return -dist.mean * std::log1p(-rng.uniform());
    case LifetimeDistribution::Kind::AlwaysOn:
      rng.next();  // keep draw counts aligned across distribution kinds
      return kInfLifetime;
    case LifetimeDistribution::Kind::Bernoulli:
      return rng.uniform() < dist.survive_prob ? kInfLifetime : 0.0;
  }
  return kInfLifetime;
}

}  // namespace

ScenarioSet sample_scenarios(const Network& network, int count,
                             double threshold_years, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("scenario count must be >= 1");
  if (threshold_years < 0.0)
    throw std::invalid_argument("threshold must be >= 0");
  ScenarioSet set;
  set.seed = seed;
  set.threshold_years = threshold_years;
  set.scenarios.resize(count);
  const auto& nodes = network.nodes();
  const auto& edges = network.edges();
  for (int k = 0; k < count; ++k) {
    auto rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(k));
    Scenario& sc = set.scenarios[k];
    sc.index = k;
    sc.xi_nodes.resize(nodes.size());
    sc.xi_edges.resize(edges.size());
    for (std::size_t n = 0; n < nodes.size(); ++n)
      sc.xi_nodes[n] = draw_lifetime(nodes[n].lifetime, rng) > threshold_years;
    for (std::size_t e = 0; e < edges.size(); ++e)
      sc.xi_edges[e] = draw_lifetime(edges[e].lifetime, rng) > threshold_years;
  }
  return set;
}

std::vector<std::vector<double>> perturbed_incidence(
    const Network& network, const Scenario& scenario,
    const std::vector<std::uint8_t>& active_candidates) {
  auto A = network.incidence();
  const auto cand = network.candidate_edge_indices();
  if (scenario.xi_nodes.size() != network.nodes().size() ||
      scenario.xi_edges.size() != network.edges().size() ||
      active_candidates.size() != cand.size())
    throw std::invalid_argument("perturbed_incidence: dimension mismatch");

  std::vector<double> col_mask(network.edges().size(), 1.0);
  for (std::size_t e = 0; e < col_mask.size(); ++e)
    col_mask[e] = scenario.xi_edges[e] ? 1.0 : 0.0;
  for (std::size_t c = 0; c < cand.size(); ++c)
    if (!active_candidates[c]) col_mask[cand[c]] = 0.0;

  for (std::size_t n = 0; n < A.size(); ++n) {
    double rn = scenario.xi_nodes[n] ? 1.0 : 0.0;
    for (std::size_t e = 0; e < A[n].size(); ++e) A[n][e] *= rn * col_mask[e];
  }
  return A;
}

std::vector<std::uint8_t> effective_edge_alive(const Network& network,
                                               const Scenario& scenario) {
  std::vector<std::uint8_t> alive(network.edges().size(), 0);
  for (std::size_t e = 0; e < alive.size(); ++e)
    alive[e] = scenario.xi_edges[e] &&
               scenario.xi_nodes[network.tail_index(e)] &&
               scenario.xi_nodes[network.head_index(e)];
  return alive;
}

}  // namespace relnet
