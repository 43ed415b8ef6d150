#pragma once

// Filling norms ‖z‖_∂ = min{‖μ‖₁ : ∂μ = z}: integer feasibility from the Smith
// normal form, then an exact branch-and-bound over the coset μ₀ + ker ∂.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homfill/chain.hpp"
#include "homfill/lp.hpp"
#include "homfill/smith.hpp"

namespace homfill {

/// Why ∂μ = z has no integer solution: with y = U·z, either y_row is not
/// divisible by the elementary divisor d_row, or row ≥ rank and y_row ≠ 0
/// (divisor reported as 0).
struct SnfObstruction {
  std::size_t row = 0;
  BigInt value;
  BigInt divisor;

  std::string describe() const {
    return "row=" + std::to_string(row) + " value=" + value.str() + " divisor=" + divisor.str();
  }
};

struct FeasibilityResult {
  bool feasible = false;
  Chain particular;                 // one μ with ∂μ = z when feasible
  std::vector<Chain> kernel_basis;  // ℤ-basis of ker ∂
  std::optional<SnfObstruction> obstruction;

  explicit operator bool() const noexcept { return feasible; }
};

struct FillingResult {
  enum class Kind { kFinite, kInfeasible, kBudgetExceeded };

  Kind kind = Kind::kInfeasible;
  Coeff value = 0;
  Chain witness;
  Coeff budget = 0;
  std::optional<SnfObstruction> obstruction;

  static FillingResult finite(Coeff v, Chain w) {
    FillingResult r;
    r.kind = Kind::kFinite;
    r.value = v;
    r.witness = std::move(w);
    return r;
  }
  static FillingResult infeasible(std::optional<SnfObstruction> why) {
    FillingResult r;
    r.kind = Kind::kInfeasible;
    r.obstruction = std::move(why);
    return r;
  }
  static FillingResult budget_exceeded(Coeff cap) {
    FillingResult r;
    r.kind = Kind::kBudgetExceeded;
    r.budget = cap;
    return r;
  }

  bool is_finite() const noexcept { return kind == Kind::kFinite; }
  bool is_infeasible() const noexcept { return kind == Kind::kInfeasible; }
  bool is_budget_exceeded() const noexcept { return kind == Kind::kBudgetExceeded; }
};

/// Caches the Smith decomposition and an echelon kernel basis of one map so
/// that many targets can be filled cheaply.
class FillingSolver {
 public:
  explicit FillingSolver(ModuleMap boundary)
      : map_(std::move(boundary)), snf_(smith_normal_form<BigInt>(map_)) {
    auto echelon = kernel_from_smith(snf_);
    kernel_ = std::move(echelon.K);
    pivots_ = std::move(echelon.pivots);
  }

  const ModuleMap& map() const noexcept { return map_; }
  const SmithDecomposition<BigInt>& snf() const noexcept { return snf_; }

  /// Kernel basis as an n×r matrix in column echelon form.
  const Matrix<Coeff>& kernel_matrix() const noexcept { return kernel_; }
  const std::vector<std::size_t>& kernel_pivots() const noexcept { return pivots_; }

  std::vector<Chain> kernel_basis() const {
    std::vector<Chain> out;
    for (std::size_t j = 0; j < kernel_.cols(); ++j) {
      std::vector<Chain::Entry> e;
      for (std::size_t i = 0; i < kernel_.rows(); ++i)
        if (kernel_(i, j) != 0) e.emplace_back(BasisId(static_cast<std::uint32_t>(i)), kernel_(i, j));
      out.push_back(Chain::from_sorted(map_.source(), std::move(e)));
    }
    return out;
  }

  /// Recomputes an obstruction from the stored decomposition: true iff it
  /// really certifies that ∂μ = z has no integer solution.
  bool certifies(const SnfObstruction& why, const Chain& z) const {
    if (why.row >= snf_.U.rows()) return false;
    BigInt y = 0;
    for (auto [t, c] : z.entries()) y += snf_.U(why.row, t.index) * BigInt(c);
    if (y != why.value || y == 0) return false;
    if (why.row >= snf_.rank) return why.divisor == 0;
    return why.divisor == snf_.divisor(why.row) && y % why.divisor != 0;
  }

  FeasibilityResult feasibility(const Chain& z) const {
    if (!same_basis(z.basis(), map_.target())) throw InputError("target chain is not over the map's target");
    const std::size_t m = map_.target()->size();
    const std::size_t n = map_.source()->size();
    FeasibilityResult out;
    std::vector<BigInt> w(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
      BigInt y = 0;
      for (auto [t, c] : z.entries()) y += snf_.U(i, t.index) * BigInt(c);
      if (y == 0) continue;
      if (i >= snf_.rank) {
        out.obstruction = SnfObstruction{i, y, 0};
        return out;
      }
      const BigInt& d = snf_.divisor(i);
      if (y % d != 0) {
        out.obstruction = SnfObstruction{i, y, d};
        return out;
      }
      w[i] = y / d;
    }
    std::vector<Chain::Entry> mu;
    for (std::size_t i = 0; i < n; ++i) {
      BigInt v = 0;
      for (std::size_t k = 0; k < snf_.rank; ++k)
        if (w[k] != 0 && snf_.V(i, k) != 0) v += snf_.V(i, k) * w[k];
      if (v != 0) mu.emplace_back(BasisId(static_cast<std::uint32_t>(i)), to_coeff(v));
    }
    out.feasible = true;
    out.particular = Chain::from_sorted(map_.source(), std::move(mu));
    out.kernel_basis = kernel_basis();
    return out;
  }

  /// Exact minimum ℓ1 preimage. With a budget, BudgetExceeded whenever the
  /// minimum is proven to exceed it.
  FillingResult solve(const Chain& z, std::optional<Coeff> budget = std::nullopt) const {
    auto feas = feasibility(z);
    if (!feas) return FillingResult::infeasible(feas.obstruction);
    auto best = minimize(feas.particular, budget);
    Coeff value = l1_norm(best);
    if (budget && value > *budget) return FillingResult::budget_exceeded(*budget);
    return FillingResult::finite(value, std::move(best));
  }

 private:
  struct Node {
    std::vector<std::optional<Coeff>> lo;
    std::vector<std::optional<Coeff>> hi;
  };

  Chain minimize(const Chain& particular, std::optional<Coeff> budget) const {
    const std::size_t n = kernel_.rows();
    const std::size_t r = kernel_.cols();
    if (r == 0) return particular;
    std::vector<Coeff> a = particular.to_dense();

    std::vector<std::size_t> active;  // rows with a nonzero kernel entry
    Coeff fixed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < r && !any; ++j) any = kernel_(i, j) != 0;
      if (any)
        active.push_back(i);
      else
        fixed = detail::checked_add(fixed, detail::checked_abs(a[i]));
    }

    auto objective = [&](const std::vector<Coeff>& c) {
      Coeff total = fixed;
      for (auto i : active) {
        Coeff v = a[i];
        for (std::size_t j = 0; j < r; ++j)
          if (c[j] != 0) v = detail::checked_add(v, detail::checked_mul(kernel_(i, j), c[j]));
        total = detail::checked_add(total, detail::checked_abs(v));
      }
      return total;
    };

    std::vector<Coeff> best_c(r, 0);
    Coeff incumbent = objective(best_c);

    std::vector<Node> stack;
    stack.push_back({std::vector<std::optional<Coeff>>(r), std::vector<std::optional<Coeff>>(r)});
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      auto lp = relaxation(a, active, node);
      if (lp.status != detail::LpSolution::Status::kOptimal) continue;
      Coeff bound = detail::checked_add(fixed, static_cast<Coeff>(std::ceil(lp.value - 1e-6)));
      if (bound >= incumbent) continue;
      if (budget && bound > *budget) continue;

      std::vector<double> cstar(r);
      for (std::size_t j = 0; j < r; ++j) cstar[j] = lp.x[j] - lp.x[r + j];

      std::vector<Coeff> rounded(r);
      for (std::size_t j = 0; j < r; ++j) {
        Coeff v = static_cast<Coeff>(std::llround(cstar[j]));
        if (node.lo[j]) v = std::max(v, *node.lo[j]);
        if (node.hi[j]) v = std::min(v, *node.hi[j]);
        rounded[j] = v;
      }
      if (Coeff f = objective(rounded); f < incumbent) {
        incumbent = f;
        best_c = rounded;
      }

      std::optional<std::size_t> branch;
      double worst = 1e-6;
      for (std::size_t j = 0; j < r; ++j) {
        double frac = std::abs(cstar[j] - std::round(cstar[j]));
        if (frac > worst) {
          worst = frac;
          branch = j;
        }
      }
      if (!branch) continue;  // integral relaxation optimum, already evaluated
      const std::size_t j = *branch;
      Node down = node;
      Node up = std::move(node);
      down.hi[j] = static_cast<Coeff>(std::floor(cstar[j]));
      up.lo[j] = static_cast<Coeff>(std::ceil(cstar[j]));
      // Explore the side nearer to the relaxation first.
      if (cstar[j] - std::floor(cstar[j]) < 0.5) {
        stack.push_back(std::move(up));
        stack.push_back(std::move(down));
      } else {
        stack.push_back(std::move(down));
        stack.push_back(std::move(up));
      }
    }

    std::vector<Chain::Entry> mu;
    for (std::size_t i = 0; i < n; ++i) {
      Coeff v = a[i];
      for (std::size_t j = 0; j < r; ++j)
        if (best_c[j] != 0) v = detail::checked_add(v, detail::checked_mul(kernel_(i, j), best_c[j]));
      if (v != 0) mu.emplace_back(BasisId(static_cast<std::uint32_t>(i)), v);
    }
    return Chain::from_sorted(map_.source(), std::move(mu));
  }

  /// min Σ|a_i + K_i·c| over real c within the node's bounds. Variables:
  /// c⁺ (r), c⁻ (r), then p_i, q_i per active row with a_i + K_i·c = p_i − q_i.
  detail::LpSolution relaxation(const std::vector<Coeff>& a, const std::vector<std::size_t>& active,
                                const Node& node) const {
    const std::size_t r = kernel_.cols();
    const std::size_t k = active.size();
    detail::LinearProgram lp;
    lp.num_vars = 2 * r + 2 * k;
    lp.objective.assign(lp.num_vars, 0.0);
    for (std::size_t v = 2 * r; v < lp.num_vars; ++v) lp.objective[v] = 1.0;
    for (std::size_t idx = 0; idx < k; ++idx) {
      std::size_t i = active[idx];
      detail::LpRow row;
      for (std::size_t j = 0; j < r; ++j) {
        if (kernel_(i, j) == 0) continue;
        double w = static_cast<double>(kernel_(i, j));
        row.terms.emplace_back(j, w);
        row.terms.emplace_back(r + j, -w);
      }
      row.terms.emplace_back(2 * r + 2 * idx, -1.0);
      row.terms.emplace_back(2 * r + 2 * idx + 1, 1.0);
      row.sense = detail::LpRow::Sense::kEqual;
      row.rhs = -static_cast<double>(a[i]);
      lp.rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < r; ++j) {
      if (node.lo[j] && node.hi[j] && *node.lo[j] > *node.hi[j]) return {};
      if (node.lo[j])
        lp.rows.push_back({{{j, 1.0}, {r + j, -1.0}}, detail::LpRow::Sense::kGreaterEqual,
                           static_cast<double>(*node.lo[j])});
      if (node.hi[j])
        lp.rows.push_back({{{j, 1.0}, {r + j, -1.0}}, detail::LpRow::Sense::kLessEqual,
                           static_cast<double>(*node.hi[j])});
    }
    return detail::solve_lp(lp);
  }

  ModuleMap map_;
  SmithDecomposition<BigInt> snf_;
  Matrix<Coeff> kernel_;
  std::vector<std::size_t> pivots_;
};

inline SmithDecomposition<BigInt> smith_normal_form_of(const ModuleMap& A) { return smith_normal_form<BigInt>(A); }

inline FeasibilityResult integer_feasible(const ModuleMap& boundary, const Chain& z) {
  return FillingSolver(boundary).feasibility(z);
}

inline FillingResult filling_norm(const ModuleMap& boundary, const Chain& z, std::optional<Coeff> budget = std::nullopt) {
  return FillingSolver(boundary).solve(z, budget);
}

/// Exhaustive search over preimage candidates in increasing ℓ1 norm up to
/// `cap`. Cannot tell ∞ from "above cap": both give BudgetExceeded(cap).
inline FillingResult filling_norm_oracle(const ModuleMap& boundary, const Chain& z, Coeff cap) {
  if (!same_basis(z.basis(), boundary.target())) throw InputError("target chain is not over the map's target");
  const std::size_t n = boundary.source()->size();
  const std::size_t m = boundary.target()->size();

  std::vector<Coeff> residual = z.to_dense();
  Coeff residual_norm = l1_norm(z);
  std::vector<Coeff> mu(n, 0);

  // Last source cell touching each target; targets past their last chance
  // must already be balanced.
  std::vector<std::int64_t> last_touch(m, -1);
  std::vector<Coeff> suffix_col_norm(n + 1, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (auto [t, c] : boundary.column(BasisId(static_cast<std::uint32_t>(s))).entries())
      last_touch[t.index] = static_cast<std::int64_t>(s);
  for (std::size_t s = n; s-- > 0;)
    suffix_col_norm[s] =
        std::max(suffix_col_norm[s + 1], l1_norm(boundary.column(BasisId(static_cast<std::uint32_t>(s)))));
  std::vector<std::vector<std::size_t>> closes(n);
  for (std::size_t t = 0; t < m; ++t) {
    if (last_touch[t] < 0) {
      if (residual[t] != 0) return FillingResult::budget_exceeded(cap);
    } else {
      closes[static_cast<std::size_t>(last_touch[t])].push_back(t);
    }
  }

  auto shift = [&](std::size_t s, Coeff v) {
    for (auto [t, c] : boundary.column(BasisId(static_cast<std::uint32_t>(s))).entries()) {
      Coeff& r = residual[t.index];
      residual_norm -= detail::checked_abs(r);
      r = detail::checked_add(r, detail::checked_mul(-v, c));
      residual_norm += detail::checked_abs(r);
    }
  };

  auto search = [&](auto&& self, std::size_t s, Coeff remaining) -> bool {
    if (remaining == 0) return residual_norm == 0;
    if (s == n) return false;
    if (residual_norm > detail::checked_mul(remaining, suffix_col_norm[s])) return false;
    for (Coeff mag = 0; mag <= remaining; ++mag) {
      for (int sg : {1, -1}) {
        if (mag == 0 && sg < 0) continue;
        Coeff v = sg * mag;
        if (v != 0) shift(s, v);
        bool closed_ok = true;
        for (auto t : closes[s])
          if (residual[t] != 0) {
            closed_ok = false;
            break;
          }
        if (closed_ok) {
          mu[s] = v;
          if (self(self, s + 1, remaining - mag)) return true;
          mu[s] = 0;
        }
        if (v != 0) shift(s, -v);
      }
    }
    return false;
  };

  for (Coeff level = 0; level <= cap; ++level) {
    if (search(search, 0, level)) return FillingResult::finite(level, Chain::from_dense(boundary.source(), mu));
  }
  return FillingResult::budget_exceeded(cap);
}

}  // namespace homfill
