#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "relnet/lp.hpp"
#include "relnet/rng.hpp"

using namespace relnet;

namespace {

// Solve a small square system by Gaussian elimination with partial
// pivoting; returns false if singular.
bool dense_solve(std::vector<std::vector<double>> A, std::vector<double> b,
                 std::vector<double>& x) {
  std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    if (std::fabs(A[piv][c]) < 1e-11) return false;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) x[c] = b[c] / A[c][c];
  return true;
}

bool feasible_point(const LinearProgram& lp, const std::vector<double>& x) {
  for (std::size_t v = 0; v < lp.num_vars(); ++v)
    if (x[v] < lp.lower[v] - 1e-7 || x[v] > lp.upper[v] + 1e-7) return false;
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (std::size_t v = 0; v < lp.num_vars(); ++v) lhs += row.coeffs[v] * x[v];
    if (row.rel == Relation::Eq && std::fabs(lhs - row.rhs) > 1e-7) return false;
    if (row.rel == Relation::Le && lhs > row.rhs + 1e-7) return false;
    if (row.rel == Relation::Ge && lhs < row.rhs - 1e-7) return false;
  }
  return true;
}

// Enumerate every basic point of a box-bounded LP: choose which rows are
// active and which variables sit at a bound, solve the square system, keep
// feasible points. Exhaustive for n <= 3, so the best value is the optimum.
bool vertex_optimum(const LinearProgram& lp, double& best) {
  std::size_t n = lp.num_vars(), m = lp.rows.size();
  bool found = false;
  for (std::size_t rows_mask = 0; rows_mask < (std::size_t{1} << m);
       ++rows_mask) {
    std::size_t active = static_cast<std::size_t>(__builtin_popcountll(rows_mask));
    if (active > n) continue;
    std::size_t free_needed = active;
    // pick which variables stay free (solved for) vs pinned at a bound
    for (std::size_t free_mask = 0; free_mask < (std::size_t{1} << n);
         ++free_mask) {
      if (static_cast<std::size_t>(__builtin_popcountll(free_mask)) !=
          free_needed)
        continue;
      std::vector<std::size_t> free_vars, pinned;
      for (std::size_t v = 0; v < n; ++v)
        ((free_mask >> v) & 1 ? free_vars : pinned).push_back(v);
      // each pinned variable tries both finite bounds
      std::size_t np = pinned.size();
      for (std::size_t bmask = 0; bmask < (std::size_t{1} << np); ++bmask) {
        std::vector<double> x(n, 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < np; ++i) {
          double b = ((bmask >> i) & 1) ? lp.upper[pinned[i]] : lp.lower[pinned[i]];
          if (!std::isfinite(b)) { ok = false; break; }
          x[pinned[i]] = b;
        }
        if (!ok) continue;
        if (!free_vars.empty()) {
          std::vector<std::vector<double>> A;
          std::vector<double> rhs;
          for (std::size_t r = 0; r < m; ++r) {
            if (!((rows_mask >> r) & 1)) continue;
            std::vector<double> arow;
            double b = lp.rows[r].rhs;
            for (std::size_t v : free_vars) arow.push_back(lp.rows[r].coeffs[v]);
            for (std::size_t v : pinned) b -= lp.rows[r].coeffs[v] * x[v];
            A.push_back(std::move(arow));
            rhs.push_back(b);
          }
          std::vector<double> sol;
          if (!dense_solve(A, rhs, sol)) continue;
          for (std::size_t i = 0; i < free_vars.size(); ++i)
            x[free_vars[i]] = sol[i];
        }
        if (!feasible_point(lp, x)) continue;
        double obj = 0.0;
        for (std::size_t v = 0; v < n; ++v) obj += lp.objective[v] * x[v];
        if (!found || obj > best) best = obj;
        found = true;
      }
    }
  }
  return found;
}

LinearProgram random_lp(SplitMix64& rng, bool force_infeasible = false) {
  LinearProgram lp;
  std::size_t n = 2 + rng.next() % 2;
  std::size_t m = 1 + rng.next() % 3;
  for (std::size_t v = 0; v < n; ++v) {
    double lo = std::floor(rng.uniform() * 4.0) - 2.0;
    lp.add_var(std::floor(rng.uniform() * 9.0) - 4.0, lo,
               lo + 1.0 + std::floor(rng.uniform() * 5.0));
  }
  for (std::size_t r = 0; r < m; ++r) {
    LpRow row;
    for (std::size_t v = 0; v < n; ++v)
      row.coeffs.push_back(std::floor(rng.uniform() * 7.0) - 3.0);
    row.rel = static_cast<Relation>(rng.next() % 3);
    row.rhs = std::floor(rng.uniform() * 11.0) - 5.0;
    lp.add_row(row);
  }
  if (force_infeasible) {
    // contradictory pair on the first variable
    LpRow a, b;
    a.coeffs.assign(lp.num_vars(), 0.0);
    a.coeffs[0] = 1.0;
    a.rel = Relation::Ge;
    a.rhs = lp.upper[0] + 3.0;
    lp.add_row(a);
  }
  return lp;
}

}  // namespace

TEST_CASE("textbook optimum with finite bounds") {
  // max 3x + 2y st x + y <= 4, x - y <= 2, 0 <= x,y <= 3 -> (3, 1)
  LinearProgram lp;
  lp.add_var(3, 0, 3);
  lp.add_var(2, 0, 3);
  lp.add_row({{1, 1}, Relation::Le, 4});
  lp.add_row({{1, -1}, Relation::Le, 2});
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(11.0));
  CHECK(sol.primal[0] == doctest::Approx(3.0));
  CHECK(sol.primal[1] == doctest::Approx(1.0));
  CHECK(check_solution(lp, sol).empty());
}

TEST_CASE("equality rows and negative lower bounds") {
  // max x - y st x + y = 1, -2 <= x <= 2, -2 <= y <= 2 -> x=2, y=-1
  LinearProgram lp;
  lp.add_var(1, -2, 2);
  lp.add_var(-1, -2, 2);
  lp.add_row({{1, 1}, Relation::Eq, 1});
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(3.0));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram bad;
  bad.add_var(1, 0, 10);
  bad.add_row({{1}, Relation::Ge, 5});
  bad.add_row({{1}, Relation::Le, 2});
  LpSolution s1 = solve(bad);
  CHECK(s1.status == LpStatus::Infeasible);
  CHECK(s1.phase1_infeasibility == doctest::Approx(3.0));

  LinearProgram unb;
  unb.add_var(1, 0, kInf);
  unb.add_row({{-1}, Relation::Le, 1});
  CHECK(solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate pivoting terminates") {
  // Beale's cycling example; Bland's rule (or equivalent) must terminate.
  LinearProgram lp;
  lp.add_var(0.75, 0, kInf);
  lp.add_var(-150, 0, kInf);
  lp.add_var(0.02, 0, kInf);
  lp.add_var(-6, 0, kInf);
  lp.add_row({{0.25, -60, -1.0 / 25.0, 9}, Relation::Le, 0});
  lp.add_row({{0.5, -90, -1.0 / 50.0, 3}, Relation::Le, 0});
  lp.add_row({{0, 0, 1, 0}, Relation::Le, 1});
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(0.05));
  CHECK(check_solution(lp, sol).empty());
}

TEST_CASE("random LPs match exhaustive vertex enumeration") {
  SplitMix64 rng(20240811);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    LinearProgram lp = random_lp(rng);
    LpSolution sol = solve(lp);
    double best = 0.0;
    bool any = vertex_optimum(lp, best);
    if (sol.status == LpStatus::Optimal) {
      ++optimal;
      REQUIRE(any);
      CHECK(sol.objective_value == doctest::Approx(best).epsilon(1e-7));
      CHECK(check_solution(lp, sol).empty());
    } else {
      // box-bounded: never unbounded, and infeasible means no vertex
      ++infeasible;
      CHECK(sol.status == LpStatus::Infeasible);
      CHECK(!any);
    }
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 20);
}

TEST_CASE("optimal row duals are value derivatives") {
  SplitMix64 rng(7);
  const double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 60; ++trial) {
    LinearProgram lp = random_lp(rng);
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal) continue;
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      LinearProgram up = lp, dn = lp;
      up.rows[r].rhs += h;
      dn.rows[r].rhs -= h;
      LpSolution su = solve(up), sd = solve(dn);
      if (su.status != LpStatus::Optimal || sd.status != LpStatus::Optimal)
        continue;
      double central = (su.objective_value - sd.objective_value) / (2 * h);
      double curvature = su.objective_value + sd.objective_value -
                         2 * sol.objective_value;
      // skip kinks (degenerate rhs) where the derivative does not exist
      if (std::fabs(curvature) > 1e-9) continue;
      CHECK(sol.row_duals[r] == doctest::Approx(central).epsilon(1e-4));
      ++checked;
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("phase-1 duals are infeasibility derivatives") {
  SplitMix64 rng(99);
  const double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 40; ++trial) {
    LinearProgram lp = random_lp(rng, true);
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Infeasible) continue;
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      LinearProgram up = lp, dn = lp;
      up.rows[r].rhs += h;
      dn.rows[r].rhs -= h;
      LpSolution su = solve(up), sd = solve(dn);
      if (su.status != LpStatus::Infeasible ||
          sd.status != LpStatus::Infeasible)
        continue;
      double central =
          (su.phase1_infeasibility - sd.phase1_infeasibility) / (2 * h);
      double curvature = su.phase1_infeasibility + sd.phase1_infeasibility -
                         2 * sol.phase1_infeasibility;
      if (std::fabs(curvature) > 1e-9) continue;
      // infeasibility is minimized, so its slope carries the opposite sign
      CHECK(-sol.row_duals[r] == doctest::Approx(central).epsilon(1e-4));
      ++checked;
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("dump is stable plain text") {
  LinearProgram lp;
  lp.add_var(1, 0, 2);
  lp.add_row({{1}, Relation::Le, 2});
  std::string text = dump(lp);
  CHECK(text.find("max") != std::string::npos);
  CHECK(!text.empty());
}
