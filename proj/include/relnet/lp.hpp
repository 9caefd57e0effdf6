#pragma once
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace relnet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Solver tolerances, shared with the MILP layer and the rounding rule.
inline constexpr double kFeasTol = 1e-7;   // constraint/bound feasibility
inline constexpr double kOptTol = 1e-9;    // reduced-cost optimality
inline constexpr double kIntTol = 1e-6;    // binary integrality

enum class Relation { Eq, Le, Ge };

struct LpRow {
  std::vector<double> coeffs;
  Relation rel = Relation::Eq;
  double rhs = 0.0;
};

struct LinearProgram {
  std::vector<double> objective;  // maximize
  std::vector<LpRow> rows;
  std::vector<double> lower, upper;  // per variable, +-inf allowed

  std::size_t num_vars() const { return objective.size(); }
  std::size_t add_var(double obj, double lo, double hi) {
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
  }
  std::size_t add_row(LpRow row) {
    rows.push_back(std::move(row));
    return rows.size() - 1;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective_value = 0.0;
  std::vector<double> primal;
  // One multiplier per row. For Optimal solutions these are the duals of
  // the final basis; for Infeasible they certify phase-1 infeasibility
  // (Farkas direction), normalized so that sum of artificials = -dual'b + ...
  std::vector<double> row_duals;
  double phase1_infeasibility = 0.0;  // phase-1 optimum when Infeasible
  int iterations = 0;
};

class IterationLimitError : public std::runtime_error {
 public:
  explicit IterationLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

LpSolution solve(const LinearProgram& lp);

// Post-solve audit: recomputes every residual independently of the solver
// path. Empty result means all residuals within kFeasTol.
std::vector<std::string> check_solution(const LinearProgram& lp,
                                        const LpSolution& sol);

// Plain-text standard form, one row per line, for hand cross-checks.
std::string dump(const LinearProgram& lp);

}  // namespace relnet
