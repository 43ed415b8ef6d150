#pragma once

// Dense two-phase simplex (Bland's rule) over doubles. Used only to produce
// lower bounds inside the exact filling search; never as a final answer.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace homfill::detail {

struct LpRow {
  enum class Sense { kLessEqual, kGreaterEqual, kEqual };
  std::vector<std::pair<std::size_t, double>> terms;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
};

/// minimize objective·x subject to rows, x ≥ 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

struct LpSolution {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
};

class SimplexTableau {
 public:
  static constexpr double kEps = 1e-9;

  explicit SimplexTableau(const LinearProgram& lp) : n_(lp.num_vars), m_(lp.rows.size()) {
    std::size_t slacks = 0;
    for (const auto& r : lp.rows)
      if (r.sense != LpRow::Sense::kEqual) ++slacks;
    // Every row gets an artificial slot; rows that start with a feasible
    // slack simply leave theirs unused.
    slack_begin_ = n_;
    art_begin_ = n_ + slacks;
    cols_ = art_begin_ + m_;
    t_.assign((m_ + 1) * (cols_ + 1), 0.0);
    basis_.assign(m_, 0);
    std::size_t slack = slack_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = lp.rows[i];
      double sgn = r.rhs < 0 ? -1.0 : 1.0;
      for (auto [j, a] : r.terms) at(i, j) += sgn * a;
      at(i, cols_) = sgn * r.rhs;
      bool has_basic = false;
      if (r.sense != LpRow::Sense::kEqual) {
        double s = (r.sense == LpRow::Sense::kLessEqual ? 1.0 : -1.0) * sgn;
        at(i, slack) = s;
        if (s > 0) {
          basis_[i] = slack;
          has_basic = true;
        }
        ++slack;
      }
      if (!has_basic) {
        at(i, art_begin_ + i) = 1.0;
        basis_[i] = art_begin_ + i;
      }
    }
    costs_ = lp.objective;
    costs_.resize(cols_, 0.0);
  }

  LpSolution solve() {
    // Phase 1.
    std::vector<double> phase1(cols_, 0.0);
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= art_begin_) {
        phase1[basis_[i]] = 1.0;
        need_phase1 = true;
      }
    if (need_phase1) {
      load_objective(phase1);
      if (!run(cols_)) return {LpSolution::Status::kUnbounded, 0.0, {}};
      if (-obj(cols_) > 1e-7) return {LpSolution::Status::kInfeasible, 0.0, {}};
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < art_begin_) continue;
        for (std::size_t j = 0; j < art_begin_; ++j)
          if (std::abs(at(i, j)) > kEps) {
            pivot(i, j);
            break;
          }
      }
    }
    // Phase 2 over structural and slack columns only.
    load_objective(costs_);
    if (!run(art_begin_)) return {LpSolution::Status::kUnbounded, 0.0, {}};
    LpSolution out;
    out.status = LpSolution::Status::kOptimal;
    out.value = -obj(cols_);
    out.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) out.x[basis_[i]] = at(i, cols_);
    return out;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double& obj(std::size_t j) { return t_[m_ * (cols_ + 1) + j]; }

  void load_objective(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) obj(j) = j < cols_ ? c[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj(j) -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double f = i == m_ ? obj(c) : at(i, c);
      if (std::abs(f) < 1e-15) continue;
      double* row = i == m_ ? &obj(0) : &at(i, 0);
      const double* src = &at(r, 0);
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * src[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  /// Returns false when unbounded. Entering columns restricted to [0, limit).
  bool run(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (obj(j) < -kEps) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= kEps) continue;
        double ratio = at(i, cols_) / a;
        if (leave == m_ || ratio < best - kEps || (ratio <= best + kEps && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> costs_;
};

inline LpSolution solve_lp(const LinearProgram& lp) { return SimplexTableau(lp).solve(); }

}  // namespace homfill::detail
