#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "relnet/mip.hpp"
#include "relnet/rng.hpp"

using namespace relnet;

namespace {

// Oracle: enumerate every binary assignment, fix the binaries through their
// bounds, and solve the continuous remainder.
MipSolution brute_force(const MixedIntegerProgram& mip) {
  std::vector<std::size_t> bins(mip.binary_vars.begin(),
                                mip.binary_vars.end());
  MipSolution best;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bins.size()); ++mask) {
    LinearProgram fixed = mip.lp;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      double v = (mask >> i) & 1 ? 1.0 : 0.0;
      fixed.lower[bins[i]] = v;
      fixed.upper[bins[i]] = v;
    }
    LpSolution sol = solve(fixed);
    if (sol.status != LpStatus::Optimal) continue;
    if (best.status == MipStatus::Infeasible ||
        sol.objective_value > best.objective_value + 1e-9) {
      best.status = MipStatus::Optimal;
      best.objective_value = sol.objective_value;
      best.primal = sol.primal;
    }
  }
  return best;
}

MixedIntegerProgram random_mip(SplitMix64& rng) {
  MixedIntegerProgram mip;
  std::size_t nb = 2 + rng.next() % 5;   // binaries
  std::size_t nc = rng.next() % 3;       // continuous
  for (std::size_t v = 0; v < nb; ++v) {
    mip.binary_vars.insert(
        mip.lp.add_var(std::floor(rng.uniform() * 11.0) - 5.0, 0, 1));
  }
  for (std::size_t v = 0; v < nc; ++v)
    mip.lp.add_var(std::floor(rng.uniform() * 7.0) - 3.0, 0,
                   1.0 + std::floor(rng.uniform() * 4.0));
  std::size_t m = 1 + rng.next() % 4;
  for (std::size_t r = 0; r < m; ++r) {
    LpRow row;
    for (std::size_t v = 0; v < mip.lp.num_vars(); ++v)
      row.coeffs.push_back(std::floor(rng.uniform() * 7.0) - 3.0);
    row.rel = rng.next() % 2 ? Relation::Le : Relation::Ge;
    row.rhs = std::floor(rng.uniform() * 9.0) - 4.0;
    mip.lp.add_row(row);
  }
  return mip;
}

}  // namespace

TEST_CASE("knapsack with known optimum") {
  // max 10a + 6b + 4c st 5a + 4b + 3c <= 8 -> a + c = 14
  MixedIntegerProgram mip;
  mip.binary_vars = {0, 1, 2};
  mip.lp.add_var(10, 0, 1);
  mip.lp.add_var(6, 0, 1);
  mip.lp.add_var(4, 0, 1);
  mip.lp.add_row({{5, 4, 3}, Relation::Le, 8});
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == MipStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(14.0));
  CHECK(sol.primal[0] == 1.0);
  CHECK(sol.primal[1] == 0.0);
  CHECK(sol.primal[2] == 1.0);
}

TEST_CASE("integrality forces a worse objective than the relaxation") {
  MixedIntegerProgram mip;
  mip.binary_vars = {0, 1};
  mip.lp.add_var(1, 0, 1);
  mip.lp.add_var(1, 0, 1);
  mip.lp.add_row({{2, 2}, Relation::Le, 3});
  LpSolution relaxed = solve(mip.lp);
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == MipStatus::Optimal);
  CHECK(relaxed.objective_value == doctest::Approx(1.5));
  CHECK(sol.objective_value == doctest::Approx(1.0));
}

TEST_CASE("infeasible MIP") {
  MixedIntegerProgram mip;
  mip.binary_vars = {0, 1};
  mip.lp.add_var(1, 0, 1);
  mip.lp.add_var(1, 0, 1);
  // fractional-only feasible region
  mip.lp.add_row({{2, 0}, Relation::Eq, 1});
  CHECK(solve_mip(mip).status == MipStatus::Infeasible);
}

TEST_CASE("binaries snap to exact 0/1") {
  MixedIntegerProgram mip;
  mip.binary_vars = {0};
  mip.lp.add_var(1, 0, 1);
  mip.lp.add_var(0.1, 0, 5);
  mip.lp.add_row({{3, 1}, Relation::Le, 4});
  MipSolution sol = solve_mip(mip);
  REQUIRE(sol.status == MipStatus::Optimal);
  CHECK(sol.primal[0] == 1.0);  // exact, not approximately
  CHECK(sol.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("node limit raises with incumbent attached") {
  MixedIntegerProgram mip;
  // 12 binaries, equality knapsack: forces real branching
  LpRow row;
  for (int v = 0; v < 12; ++v) {
    mip.binary_vars.insert(mip.lp.add_var(1.0 + 0.01 * v, 0, 1));
    row.coeffs.push_back(2.0 + (v % 3));
  }
  row.rel = Relation::Eq;
  row.rhs = 13.0;
  mip.lp.add_row(row);
  CHECK_THROWS_AS((void)solve_mip(mip, 2), NodeLimitError);
  MipSolution full = solve_mip(mip);
  CHECK(full.status == MipStatus::Optimal);
}

TEST_CASE("random MIPs match brute force") {
  SplitMix64 rng(424242);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    MixedIntegerProgram mip = random_mip(rng);
    MipSolution got = solve_mip(mip);
    MipSolution want = brute_force(mip);
    REQUIRE(got.status == want.status);
    if (got.status == MipStatus::Optimal) {
      ++optimal;
      CHECK(got.objective_value == doctest::Approx(want.objective_value)
                                       .epsilon(1e-7));
      // returned point is genuinely integral and feasible
      for (std::size_t b : mip.binary_vars)
        CHECK((got.primal[b] == 0.0 || got.primal[b] == 1.0));
      LinearProgram fixed = mip.lp;
      for (std::size_t b : mip.binary_vars) {
        fixed.lower[b] = got.primal[b];
        fixed.upper[b] = got.primal[b];
      }
      LpSolution refit = solve(fixed);
      REQUIRE(refit.status == LpStatus::Optimal);
      CHECK(refit.objective_value ==
            doctest::Approx(got.objective_value).epsilon(1e-7));
    } else {
      ++infeasible;
    }
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 10);
}
