#pragma once

// ρ-intersection, ρ-connectedness, the sets 𝒟_n and the splitting of kernel
// elements into ρ-connected parts.

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "homfill/chain.hpp"

namespace homfill {

/// ±s, an element of 𝒟_1.
struct UnitChain {
  BasisId cell;
  int sign = 1;

  friend constexpr auto operator<=>(const UnitChain&, const UnitChain&) = default;
};

using UnitPartList = std::vector<UnitChain>;

inline Chain to_chain(const BasisPtr& basis, UnitChain u) { return Chain::unit(basis, u.cell, u.sign); }

/// |⟨x,s⟩| copies of sign(⟨x,s⟩)·s for each s in the support.
inline UnitPartList unit_parts(const Chain& x) {
  UnitPartList out;
  out.reserve(static_cast<std::size_t>(l1_norm(x)));
  for (auto [id, c] : x.entries())
    for (Coeff k = 0, n = detail::checked_abs(c); k < n; ++k) out.push_back({id, detail::sign(c)});
  return out;
}

namespace detail {

/// ρ(u) ∩_T ρ(v) ≠ ∅ for two units.
inline bool units_rho_intersect(const ModuleMap& rho, UnitChain u, UnitChain v) {
  auto a = rho.column(u.cell).entries();
  auto b = rho.column(v.cell).entries();
  const int sv = u.sign * v.sign;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      if (sv * sign(a[i].second) * sign(b[j].second) < 0) return true;
      ++i;
      ++j;
    }
  }
  return false;
}

/// Distinct units below x: the signed support.
inline std::vector<UnitChain> signed_support(const Chain& x) {
  std::vector<UnitChain> out;
  out.reserve(x.support_size());
  for (auto [id, c] : x.entries()) out.push_back({id, sign(c)});
  return out;
}

inline void require_source(const ModuleMap& rho, const Chain& x) {
  if (!same_basis(rho.source(), x.basis())) throw InputError("chain is not over the source of the map");
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Components of the intersection graph on the signed support of x, as lists
/// of support positions.
inline std::vector<std::vector<std::size_t>> support_components(const ModuleMap& rho, const Chain& x) {
  auto units = signed_support(x);
  DisjointSets sets(units.size());
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = i + 1; j < units.size(); ++j)
      if (units_rho_intersect(rho, units[i], units[j])) sets.unite(i, j);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> slot(units.size(), SIZE_MAX);
  for (std::size_t i = 0; i < units.size(); ++i) {
    std::size_t r = sets.find(i);
    if (slot[r] == SIZE_MAX) {
      slot[r] = comps.size();
      comps.emplace_back();
    }
    comps[slot[r]].push_back(i);
  }
  return comps;
}

}  // namespace detail

/// Cells s with ⟨ρ(s), t⟩ ≠ 0.
inline std::vector<BasisId> target_support(const ModuleMap& rho, BasisId t) {
  if (!rho.target()->contains(t)) throw InputError("target id " + std::to_string(t.index) + " out of range");
  std::vector<BasisId> out;
  for (auto [s, c] : rho.row(t)) out.push_back(s);
  return out;
}

/// x ∩_ρ y ≠ ∅: some unit below x and some unit below y have images with
/// opposite signs on a common target cell.
inline bool rho_intersects(const ModuleMap& rho, const Chain& x, const Chain& y) {
  detail::require_source(rho, x);
  detail::require_source(rho, y);
  for (auto u : detail::signed_support(x))
    for (auto v : detail::signed_support(y))
      if (detail::units_rho_intersect(rho, u, v)) return true;
  return false;
}

/// Units u ∈ 𝒟_1 with u ∩_ρ y ≠ ∅, in sorted order.
inline std::vector<UnitChain> d1_neighbors(const ModuleMap& rho, const Chain& y) {
  detail::require_source(rho, y);
  std::set<UnitChain> found;
  for (auto v : detail::signed_support(y)) {
    for (auto [t, w] : rho.column(v.cell).entries()) {
      for (auto [s, w2] : rho.row(t)) {
        int sg = -v.sign * detail::sign(w) * detail::sign(w2);
        found.insert({s, sg});
      }
    }
  }
  return {found.begin(), found.end()};
}

/// Whether some ordering of unit_parts(x) adds each unit to a prefix it
/// ρ-intersects without cancellation. Decided as connectivity of the unit
/// intersection graph: units of one chain never cancel each other, and a
/// prefix meets a unit exactly when one of the prefix's units does.
inline bool is_rho_connected(const ModuleMap& rho, const Chain& x) {
  detail::require_source(rho, x);
  if (x.is_zero()) throw InputError("connectedness is undefined for the zero chain");
  // Copies of one unit never meet each other, so a single cell with
  // multiplicity > 1 is a set of isolated vertices.
  if (x.support_size() == 1) return detail::checked_abs(x.entries()[0].second) == 1;
  return detail::support_components(rho, x).size() == 1;
}

/// Splits z ∈ ker ρ into ρ-connected kernel elements that are parts of z and
/// sum to z. The parts are the component sums of the unit intersection graph,
/// ordered by (smallest cell, sign).
inline std::vector<Chain> decompose(const ModuleMap& rho, const Chain& z) {
  detail::require_source(rho, z);
  Chain image = rho.apply(z);
  if (!image.is_zero()) {
    auto [t, c] = image.entries()[0];
    throw InputError("chain is not in the kernel: coefficient " + std::to_string(c) + " at '" +
                     rho.target()->label(t) + "'");
  }
  auto entries = z.entries();
  std::vector<Chain> parts;
  for (const auto& comp : detail::support_components(rho, z)) {
    if (comp.size() == 1) {
      // An isolated cell: each copy of its unit is a component by itself.
      auto [id, c] = entries[comp[0]];
      for (Coeff k = 0, n = detail::checked_abs(c); k < n; ++k)
        parts.push_back(Chain::unit(z.basis(), id, detail::sign(c)));
      continue;
    }
    std::vector<Chain::Entry> sub;
    for (auto i : comp) sub.push_back(entries[i]);
    parts.push_back(Chain::from_sorted(z.basis(), std::move(sub)));
  }
  for (const auto& p : parts)
    if (!rho.apply(p).is_zero()) throw InternalError("component of a kernel element left the kernel");
  std::stable_sort(parts.begin(), parts.end(), [](const Chain& a, const Chain& b) {
    auto ea = a.entries()[0];
    auto eb = b.entries()[0];
    if (ea.first != eb.first) return ea.first < eb.first;
    return detail::sign(ea.second) < detail::sign(eb.second);
  });
  return parts;
}

/// One extension step 𝒟_n → 𝒟_{n+1}: y + z over units z that meet y and
/// do not cancel against it.
inline std::vector<Chain> extend_connected(const ModuleMap& rho, const Chain& y) {
  std::vector<Chain> out;
  for (auto u : d1_neighbors(rho, y)) {
    Coeff c = y[u.cell];
    if (c != 0 && detail::sign(c) != u.sign) continue;
    out.push_back(y + to_chain(y.basis(), u));
  }
  return out;
}

/// 𝒟_n: ρ-connected chains of ℓ1 norm exactly n (∅ for n = 0).
inline std::set<Chain> enumerate_dn(const ModuleMap& rho, std::size_t n) {
  std::set<Chain> level;
  if (n == 0) return level;
  for (std::uint32_t s = 0; s < rho.source()->size(); ++s) {
    level.insert(Chain::unit(rho.source(), BasisId(s), 1));
    level.insert(Chain::unit(rho.source(), BasisId(s), -1));
  }
  for (std::size_t k = 1; k < n; ++k) {
    std::set<Chain> next;
    for (const auto& y : level)
      for (auto& x : extend_connected(rho, y)) next.insert(std::move(x));
    level = std::move(next);
  }
  return level;
}

/// 𝒟_1 ∪ … ∪ 𝒟_n, listed by norm then lexicographically.
inline std::vector<Chain> enumerate_dn_cumulative(const ModuleMap& rho, std::size_t n) {
  std::vector<Chain> out;
  if (n == 0) return out;
  std::set<Chain> level = enumerate_dn(rho, 1);
  for (std::size_t k = 1;; ++k) {
    out.insert(out.end(), level.begin(), level.end());
    if (k == n) break;
    std::set<Chain> next;
    for (const auto& y : level)
      for (auto& x : extend_connected(rho, y)) next.insert(std::move(x));
    level = std::move(next);
  }
  return out;
}

}  // namespace homfill
