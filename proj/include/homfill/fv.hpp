#pragma once

// Filling functions FV^{d+1}(k): bounded-norm cycle enumeration, exact
// tables, the n·B_n bound from connected decompositions, cycle diameters.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "homfill/chain.hpp"
#include "homfill/connectivity.hpp"
#include "homfill/filling.hpp"
#include "homfill/smith.hpp"

namespace homfill {

namespace detail {

inline bool norm_then_lex(const Chain& a, const Chain& b) {
  Coeff na = l1_norm(a);
  Coeff nb = l1_norm(b);
  if (na != nb) return na < nb;
  return a < b;
}

/// Integer points z = K·c of an echelon lattice with ‖z‖₁ ≤ k. Coefficients
/// are chosen column by column; once c_0..c_j are fixed every row above the
/// next pivot is final, and its norm is charged against the budget.
template <class Visit>
void lattice_points_in_ball(const EchelonBasis<Coeff>& lattice, Coeff k, Visit&& visit) {
  const auto& K = lattice.K;
  const std::size_t n = K.rows();
  const std::size_t r = K.cols();
  std::vector<Coeff> z(n, 0);
  if (r == 0) {
    visit(z, Coeff{0});
    return;
  }
  auto recurse = [&](auto&& self, std::size_t j, Coeff used) -> void {
    if (j == r) {
      visit(z, used);
      return;
    }
    const std::size_t p = lattice.pivots[j];
    const std::size_t next = j + 1 < r ? lattice.pivots[j + 1] : n;
    const Coeff piv = K(p, j);
    const Coeff room = k - used;
    // |z_p + piv·c| ≤ room
    auto floor_div = [](Coeff a, Coeff b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); };
    auto ceil_div = [&](Coeff a, Coeff b) { return -floor_div(-a, b); };
    const Coeff lo = ceil_div(-room - z[p], piv);
    const Coeff hi = floor_div(room - z[p], piv);
    for (Coeff c = lo; c <= hi; ++c) {
      if (c != 0)
        for (std::size_t i = p; i < n; ++i)
          if (K(i, j) != 0) z[i] = checked_add(z[i], checked_mul(c, K(i, j)));
      Coeff fresh = 0;
      for (std::size_t i = p; i < next && used + fresh <= k; ++i) fresh += checked_abs(z[i]);
      if (used + fresh <= k) self(self, j + 1, used + fresh);
      if (c != 0)
        for (std::size_t i = p; i < n; ++i)
          if (K(i, j) != 0) z[i] = checked_add(z[i], checked_mul(-c, K(i, j)));
    }
  };
  recurse(recurse, 0, 0);
}

}  // namespace detail

/// All z with ρ(z) = 0 and ‖z‖₁ ≤ k, by increasing norm then lexicographically.
inline std::vector<Chain> enumerate_cycles(const ModuleMap& rho, Coeff k) {
  std::vector<Chain> out;
  if (k < 0) return out;
  auto lattice = integer_kernel(rho);
  detail::lattice_points_in_ball(lattice, k, [&](const std::vector<Coeff>& z, Coeff) {
    out.push_back(Chain::from_dense(rho.source(), z));
  });
  std::sort(out.begin(), out.end(), detail::norm_then_lex);
  return out;
}

struct FvValue {
  enum class Kind { kFinite, kInfinite, kBudgetExceeded };

  Kind kind = Kind::kFinite;
  Coeff value = 0;  // kFinite
  Chain cycle;      // maximizing cycle (kFinite) or unfillable cycle (kInfinite)
  Chain filling;    // a minimal filling of `cycle` (kFinite)
  Coeff budget = 0; // kBudgetExceeded

  bool is_finite() const noexcept { return kind == Kind::kFinite; }
  bool is_infinite() const noexcept { return kind == Kind::kInfinite; }

  /// Finite(a) < Finite(b) for a < b, all below Infinite.
  friend bool precedes_or_equal(const FvValue& a, const FvValue& b) {
    if (b.kind == Kind::kInfinite) return true;
    if (a.kind == Kind::kInfinite) return false;
    if (a.kind == Kind::kFinite && b.kind == Kind::kFinite) return a.value <= b.value;
    return true;
  }
};

struct FvTable {
  std::size_t degree = 0;
  std::vector<FvValue> rows;  // rows[k] for k = 0..kmax
};

namespace detail {

/// sup of filling norms under `filler` over cycles of `cycles_of` with norm ≤ k,
/// for every k ≤ kmax.
inline std::vector<FvValue> fv_rows(const ModuleMap& cycles_of, const ModuleMap& filler, Coeff kmax,
                                    std::optional<Coeff> budget) {
  std::vector<FvValue> rows;
  if (kmax < 0) return rows;
  auto cycles = enumerate_cycles(cycles_of, kmax);
  FillingSolver solver(filler);
  FvValue current;
  current.cycle = Chain(cycles_of.source());
  current.filling = Chain(filler.source());
  bool over_budget = false;
  std::size_t next = 0;
  for (Coeff k = 0; k <= kmax; ++k) {
    for (; next < cycles.size() && l1_norm(cycles[next]) <= k; ++next) {
      if (current.is_infinite()) continue;
      const Chain& z = cycles[next];
      auto res = solver.solve(z, budget);
      if (res.is_infeasible()) {
        current.kind = FvValue::Kind::kInfinite;
        current.cycle = z;
        current.filling = Chain(filler.source());
      } else if (res.is_budget_exceeded()) {
        over_budget = true;
      } else if (res.value > current.value || (res.value == current.value && current.cycle.is_zero())) {
        current.value = res.value;
        current.cycle = z;
        current.filling = res.witness;
      }
    }
    FvValue row = current;
    if (!row.is_infinite() && over_budget) {
      row.kind = FvValue::Kind::kBudgetExceeded;
      row.budget = *budget;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void require_positive_degree(const ChainComplex& X, std::size_t d) {
  if (d == 0) throw InputError("degree 0 filling functions use the augmentation variant (fv0)");
  if (d > X.top_degree()) throw InputError("degree " + std::to_string(d) + " exceeds the top degree of the complex");
}

}  // namespace detail

inline FvTable fv_table(const ChainComplex& X, std::size_t d, Coeff kmax, std::optional<Coeff> budget = std::nullopt) {
  detail::require_positive_degree(X, d);
  return {d, detail::fv_rows(X.boundary(d), X.filling_map(d), kmax, budget)};
}

/// FV^{d+1}_X(k) for d ≥ 1. In the top degree nothing fills but 0.
inline FvValue fv(const ChainComplex& X, std::size_t d, Coeff k, std::optional<Coeff> budget = std::nullopt) {
  if (k < 0) throw InputError("k must be nonnegative");
  return fv_table(X, d, k, budget).rows.back();
}

/// Cycles are the kernel of the augmentation; fillings are 1-chains.
inline FvTable fv0_table(const ChainComplex& X, Coeff kmax, std::optional<Coeff> budget = std::nullopt) {
  return {0, detail::fv_rows(augmentation_map(X.basis(0)), X.filling_map(0), kmax, budget)};
}

inline FvValue fv0(const ChainComplex& X, Coeff k, std::optional<Coeff> budget = std::nullopt) {
  if (k < 0) throw InputError("k must be nonnegative");
  return fv0_table(X, k, budget).rows.back();
}

/// B_n = max filling norm over ρ-connected kernel elements of norm ≤ n, and
/// the bound FV_ρ(n) ≤ n·B_n.
struct BnBound {
  std::size_t n = 0;
  std::optional<Coeff> b_n;      // nullopt: some connected kernel element is unfillable
  std::optional<Coeff> bound;    // n·B_n
  std::optional<Chain> unfillable;
  std::size_t connected_kernel_elements = 0;

  bool is_finite() const noexcept { return b_n.has_value(); }
};

namespace detail {

template <class Range>
BnBound bound_over(std::size_t n, const ModuleMap& rho, const ModuleMap& filler, const Range& candidates) {
  BnBound out;
  out.n = n;
  out.b_n = 0;
  FillingSolver solver(filler);
  for (const Chain& x : candidates) {
    if (!rho.apply(x).is_zero()) continue;
    ++out.connected_kernel_elements;
    auto res = solver.solve(x);
    if (!res.is_finite()) {
      out.b_n.reset();
      out.unfillable = x;
      return out;
    }
    out.b_n = std::max(*out.b_n, res.value);
  }
  out.bound = checked_mul(static_cast<Coeff>(n), *out.b_n);
  return out;
}

}  // namespace detail

inline BnBound fv_upper_bound(const ModuleMap& rho, const ModuleMap& filler, std::size_t n) {
  if (!same_basis(rho.source(), filler.target())) throw InputError("filling map must land in the source of ρ");
  return detail::bound_over(n, rho, filler, enumerate_dn_cumulative(rho, n));
}

namespace detail {

/// Vertices of the 1-skeleton adjacent along graph edges (two-vertex boundaries).
inline std::vector<std::vector<std::uint32_t>> skeleton_adjacency(const ChainComplex& X) {
  std::vector<std::vector<std::uint32_t>> adj(X.basis(0)->size());
  if (X.top_degree() == 0) return adj;
  for (const auto& col : X.boundary(1).columns()) {
    if (col.support_size() != 2) continue;
    auto u = col.entries()[0].first.index;
    auto v = col.entries()[1].first.index;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

}  // namespace detail

/// Vertices in the closure of the cells supporting σ.
inline std::vector<BasisId> incident_vertices(const ChainComplex& X, std::size_t d, const Chain& sigma) {
  if (!same_basis(sigma.basis(), X.basis(d))) throw InputError("chain is not over C_" + std::to_string(d));
  std::vector<BasisId> cells;
  for (auto [id, c] : sigma.entries()) cells.push_back(id);
  for (std::size_t k = d; k > 0; --k) {
    std::vector<BasisId> lower;
    for (auto id : cells)
      for (auto [t, c] : X.boundary(k).column(id).entries()) lower.push_back(t);
    std::sort(lower.begin(), lower.end());
    lower.erase(std::unique(lower.begin(), lower.end()), lower.end());
    cells = std::move(lower);
  }
  return cells;
}

/// Diameter of incident_vertices(σ) in the 1-skeleton path metric; nullopt
/// when two of them lie in different components.
inline std::optional<std::size_t> cycle_diameter(const ChainComplex& X, std::size_t d, const Chain& sigma) {
  if (sigma.is_zero()) throw InputError("diameter of the zero chain is undefined");
  auto verts = incident_vertices(X, d, sigma);
  auto adj = detail::skeleton_adjacency(X);
  std::size_t diam = 0;
  std::vector<std::int64_t> dist(adj.size());
  for (auto src : verts) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<std::uint32_t> queue{src.index};
    dist[src.index] = 0;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (auto v : verts) {
      if (dist[v.index] < 0) return std::nullopt;
      diam = std::max(diam, static_cast<std::size_t>(dist[v.index]));
    }
  }
  return diam;
}

/// Largest diameter of a single d-cell.
inline std::optional<std::size_t> max_cell_diameter(const ChainComplex& X, std::size_t d) {
  std::size_t c = 0;
  for (std::uint32_t s = 0; s < X.basis(d)->size(); ++s) {
    auto v = cycle_diameter(X, d, Chain::unit(X.basis(d), BasisId(s)));
    if (!v) return std::nullopt;
    c = std::max(c, *v);
  }
  return c;
}

}  // namespace homfill
