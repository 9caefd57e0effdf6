#include "relnet/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace relnet {
namespace {

enum class VarState { Basic, AtLower, AtUpper, FreeZero };

// Dense bounded-variable primal simplex over the full tableau B^-1 A.
// Columns: structurals, then one slack per inequality row, then one
// artificial per row (phase 1 only; pinned to zero in phase 2).
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {
    m_ = lp.rows.size();
    nstruct_ = lp.num_vars();

    for (std::size_t j = 0; j < nstruct_; ++j)
      add_col(lp.lower[j], lp.upper[j]);
    slack_of_.assign(m_, SIZE_MAX);
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.rows[i].rel == Relation::Le) slack_of_[i] = add_col(0.0, kInf);
      else if (lp.rows[i].rel == Relation::Ge) slack_of_[i] = add_col(-kInf, 0.0);
    }
    art_of_.assign(m_, SIZE_MAX);
    for (std::size_t i = 0; i < m_; ++i) art_of_[i] = add_col(0.0, kInf);
    n_ = lower_.size();

    // tableau rows: structural coefficients, slack unit, artificial unit
    tab_.assign(m_, std::vector<double>(n_, 0.0));
    rhs_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      for (std::size_t j = 0; j < nstruct_ && j < row.coeffs.size(); ++j)
        tab_[i][j] = row.coeffs[j];
      if (slack_of_[i] != SIZE_MAX) tab_[i][slack_of_[i]] = 1.0;
      rhs_[i] = row.rhs;
    }

    // nonbasic start: every column at a finite bound (or zero if free)
    state_.assign(n_, VarState::AtLower);
    value_.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j])) {
        state_[j] = VarState::AtLower;
        value_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        state_[j] = VarState::AtUpper;
        value_[j] = upper_[j];
      } else {
        state_[j] = VarState::FreeZero;
        value_[j] = 0.0;
      }
    }

    // artificials absorb the residual and form the initial basis
    basic_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      double resid = rhs_[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (j != art_of_[i] && value_[j] != 0.0) resid -= tab_[i][j] * value_[j];
      double sign = resid < 0.0 ? -1.0 : 1.0;
      row_flip_.push_back(sign);
      tab_[i][art_of_[i]] = sign;
      if (sign < 0.0) {  // keep artificial value nonnegative
        for (auto& v : tab_[i]) v = -v;
        // note: rhs is folded into xb_, not stored per-row after this
      }
      basic_[i] = static_cast<int>(art_of_[i]);
      state_[art_of_[i]] = VarState::Basic;
      value_[art_of_[i]] = std::abs(resid);
    }
    xb_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) xb_[i] = value_[basic_[i]];

    iter_limit_ = 50 * static_cast<int>(m_ + n_) + 100;
    bland_after_ = 2 * static_cast<int>(m_ + n_);
  }

  LpSolution run() {
    LpSolution sol;

    // Phase 1: minimize sum of artificials (maximize the negative).
    std::vector<double> c1(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) c1[art_of_[i]] = -1.0;
    set_objective(c1);
    bool bounded = optimize();
    (void)bounded;  // phase 1 objective is bounded by 0
    double infeas = -objective_value(c1);
    if (infeas > kFeasTol) {
      sol.status = LpStatus::Infeasible;
      sol.phase1_infeasibility = infeas;
      sol.row_duals = duals();
      sol.iterations = iterations_;
      sol.primal = primal();
      return sol;
    }

    // pin artificials to zero for phase 2
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t a = art_of_[i];
      upper_[a] = 0.0;
      if (state_[a] != VarState::Basic) {
        state_[a] = VarState::AtLower;
        value_[a] = 0.0;
      }
    }

    std::vector<double> c2(n_, 0.0);
    for (std::size_t j = 0; j < nstruct_; ++j) c2[j] = lp_.objective[j];
    set_objective(c2);
    if (!optimize()) {
      sol.status = LpStatus::Unbounded;
      sol.iterations = iterations_;
      sol.primal = primal();
      return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.objective_value = objective_value(c2);
    sol.primal = primal();
    sol.row_duals = duals();
    sol.iterations = iterations_;
    return sol;
  }

 private:
  std::size_t add_col(double lo, double hi) {
    lower_.push_back(lo);
    upper_.push_back(hi);
    return lower_.size() - 1;
  }

  void set_objective(const std::vector<double>& c) {
    cost_ = c;
    // reduced costs d_j = c_j - c_B' B^-1 A_j over the current tableau
    red_.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] == VarState::Basic) { red_[j] = 0.0; continue; }
      double v = c[j];
      for (std::size_t i = 0; i < m_; ++i) {
        double cb = c[basic_[i]];
        if (cb != 0.0) v -= cb * tab_[i][j];
      }
      red_[j] = v;
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(nstruct_, 0.0);
    for (std::size_t j = 0; j < nstruct_; ++j) x[j] = value_[j];
    return x;
  }

  double objective_value(const std::vector<double>& c) const {
    double v = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      if (value_[j] != 0.0) v += c[j] * value_[j];
    return v;
  }

  // duals from the artificial unit columns: the artificial's reduced cost
  // is c_a - y_i * sign_i, so y_i = (c_a - d_a) * sign_i. c_a is nonzero
  // during phase 1, where these certify infeasibility.
  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t a = art_of_[i];
      double d = (state_[a] == VarState::Basic) ? 0.0 : red_[a];
      y[i] = (cost_[a] - d) * art_sign(i);
    }
    return y;
  }

  // Rows flipped at setup (to keep the artificial nonnegative) carry their
  // sign here so duals are reported for the original row orientation.
  double art_sign(std::size_t i) const { return row_flip_[i]; }

  // returns false on unboundedness
  bool optimize() {
    int degenerate_streak = 0;
    for (;;) {
      if (iterations_ >= iter_limit_)
        throw IterationLimitError("simplex iteration limit exceeded");
      bool bland = degenerate_streak >= bland_after_;

      // entering column
      std::size_t enter = SIZE_MAX;
      double best = kOptTol;
      int dir = 0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        double d = red_[j];
        int cand_dir = 0;
        if (state_[j] == VarState::AtLower && d > kOptTol) cand_dir = +1;
        else if (state_[j] == VarState::AtUpper && d < -kOptTol) cand_dir = -1;
        else if (state_[j] == VarState::FreeZero && std::abs(d) > kOptTol)
          cand_dir = d > 0.0 ? +1 : -1;
        if (cand_dir == 0) continue;
        if (bland) { enter = j; dir = cand_dir; break; }
        if (std::abs(d) > best) { best = std::abs(d); enter = j; dir = cand_dir; }
      }
      if (enter == SIZE_MAX) return true;  // optimal

      // ratio test: x_enter moves by dir * t, basics move by -dir * t * w_i
      double tmax = upper_[enter] - lower_[enter];  // bound flip distance
      if (!std::isfinite(tmax)) tmax = kInf;
      std::size_t leave = SIZE_MAX;
      bool leave_to_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        double w = tab_[i][enter];
        if (std::abs(w) < 1e-11) continue;
        double delta = -dir * w;  // d(xb_i)/dt
        double room;
        bool to_upper;
        if (delta > 0.0) {
          room = upper_[basic_[i]] - xb_[i];
          to_upper = true;
        } else {
          room = xb_[i] - lower_[basic_[i]];
          to_upper = false;
        }
        if (!std::isfinite(room)) continue;
        double t = std::max(0.0, room) / std::abs(delta);
        if (t < tmax - 1e-12 ||
            (leave != SIZE_MAX && t < tmax + 1e-12 && bland &&
             basic_[i] < basic_[leave])) {
          tmax = t;
          leave = i;
          leave_to_upper = to_upper;
        }
      }

      if (tmax == kInf) return false;  // unbounded

      ++iterations_;
      if (tmax < 1e-12) ++degenerate_streak; else degenerate_streak = 0;

      if (leave == SIZE_MAX) {
        // bound flip: entering runs to its opposite bound
        double t = tmax;
        apply_step(enter, dir, t);
        state_[enter] =
            dir > 0 ? VarState::AtUpper : VarState::AtLower;
        value_[enter] = dir > 0 ? upper_[enter] : lower_[enter];
        continue;
      }

      apply_step(enter, dir, tmax);
      pivot(leave, enter, leave_to_upper);
    }
  }

  void apply_step(std::size_t enter, int dir, double t) {
    if (t != 0.0) {
      for (std::size_t i = 0; i < m_; ++i) {
        xb_[i] += -dir * t * tab_[i][enter];
        value_[basic_[i]] = xb_[i];
      }
      value_[enter] += dir * t;
    }
  }

  void pivot(std::size_t r, std::size_t enter, bool leave_to_upper) {
    std::size_t old = basic_[r];
    double piv = tab_[r][enter];
    auto& row = tab_[r];
    for (auto& v : row) v /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = tab_[i][enter];
      if (f == 0.0) continue;
      auto& ri = tab_[i];
      for (std::size_t j = 0; j < n_; ++j) ri[j] -= f * row[j];
    }
    double fd = red_[enter];
    if (fd != 0.0)
      for (std::size_t j = 0; j < n_; ++j) red_[j] -= fd * row[j];

    state_[old] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
    value_[old] = leave_to_upper ? upper_[old] : lower_[old];
    if (!std::isfinite(value_[old])) value_[old] = 0.0;  // free leaving var
    state_[enter] = VarState::Basic;
    basic_[r] = static_cast<int>(enter);
    xb_[r] = value_[enter];
    red_[enter] = 0.0;
  }

  const LinearProgram& lp_;
  std::size_t m_ = 0, n_ = 0, nstruct_ = 0;
  std::vector<std::size_t> slack_of_, art_of_;
  std::vector<std::vector<double>> tab_;
  std::vector<double> rhs_, lower_, upper_, cost_, red_, value_, xb_, row_flip_;
  std::vector<VarState> state_;
  std::vector<int> basic_;
  int iterations_ = 0, iter_limit_ = 0, bland_after_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  Simplex s(lp);
  return s.run();
}

std::vector<std::string> check_solution(const LinearProgram& lp,
                                        const LpSolution& sol) {
  std::vector<std::string> out;
  char buf[160];
  const auto& x = sol.primal;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (x[j] < lp.lower[j] - kFeasTol || x[j] > lp.upper[j] + kFeasTol) {
      std::snprintf(buf, sizeof buf, "var %zu = %.12g outside [%g, %g]", j,
                    x[j], lp.lower[j], lp.upper[j]);
      out.push_back(buf);
    }
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    double lhs = 0.0;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j)
      lhs += row.coeffs[j] * x[j];
    double resid = 0.0;
    if (row.rel == Relation::Eq) resid = std::abs(lhs - row.rhs);
    else if (row.rel == Relation::Le) resid = std::max(0.0, lhs - row.rhs);
    else resid = std::max(0.0, row.rhs - lhs);
    if (resid > kFeasTol) {
      std::snprintf(buf, sizeof buf, "row %zu residual %.12g", i, resid);
      out.push_back(buf);
    }
  }
  return out;
}

std::string dump(const LinearProgram& lp) {
  std::string s = "max";
  char buf[64];
  for (double c : lp.objective) {
    std::snprintf(buf, sizeof buf, " %+g", c);
    s += buf;
  }
  s += "\n";
  for (const auto& row : lp.rows) {
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
      double c = j < row.coeffs.size() ? row.coeffs[j] : 0.0;
      std::snprintf(buf, sizeof buf, "%+g ", c);
      s += buf;
    }
    s += row.rel == Relation::Eq ? "= " : (row.rel == Relation::Le ? "<= " : ">= ");
    std::snprintf(buf, sizeof buf, "%g\n", row.rhs);
    s += buf;
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    std::snprintf(buf, sizeof buf, "%g <= x%zu <= %g\n", lp.lower[j], j,
                  lp.upper[j]);
    s += buf;
  }
  return s;
}

}  // namespace relnet
