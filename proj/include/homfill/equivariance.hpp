#pragma once

// Finite groups acting on a map's source and target bases by permutations:
// equivariance checks, orbits, stabilizers, and 𝒟_n up to the action.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homfill/chain.hpp"
#include "homfill/connectivity.hpp"
#include "homfill/fv.hpp"

namespace homfill {

/// image[i] is the index cell i is sent to.
using Permutation = std::vector<std::uint32_t>;

inline bool is_permutation_of(const Permutation& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> hit(n, 0);
  for (auto v : p) {
    if (v >= n || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

/// (p ∘ q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = p[q[i]];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) out[p[i]] = i;
  return out;
}

struct GroupElement {
  std::string name;
  Permutation source;
  Permutation target;

  bool is_identity() const {
    return source == identity_permutation(source.size()) && target == identity_permutation(target.size());
  }
};

enum class Side { kSource, kTarget };

/// A listed set of group elements acting on ℤ[S] and ℤ[T].
class PermutationAction {
 public:
  PermutationAction(BasisPtr source, BasisPtr target, std::vector<GroupElement> elements)
      : source_(std::move(source)), target_(std::move(target)), elements_(std::move(elements)) {
    for (const auto& g : elements_) {
      if (!is_permutation_of(g.source, source_->size()))
        throw InputError("element '" + g.name + "' is not a permutation of '" + source_->name() + "'");
      if (!is_permutation_of(g.target, target_->size()))
        throw InputError("element '" + g.name + "' is not a permutation of '" + target_->name() + "'");
    }
  }

  static PermutationAction trivial(BasisPtr source, BasisPtr target) {
    GroupElement e{"e", identity_permutation(source->size()), identity_permutation(target->size())};
    return PermutationAction(std::move(source), std::move(target), {std::move(e)});
  }

  /// The group generated by `generators`, identity first, then by word length.
  static PermutationAction closure(BasisPtr source, BasisPtr target, const std::vector<GroupElement>& generators) {
    PermutationAction gens(source, target, generators);
    std::vector<GroupElement> elems{{"e", identity_permutation(source->size()), identity_permutation(target->size())}};
    std::set<std::pair<Permutation, Permutation>> seen{{elems[0].source, elems[0].target}};
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (const auto& g : generators) {
        GroupElement h{elems[i].name == "e" ? g.name : g.name + "*" + elems[i].name, compose(g.source, elems[i].source),
                       compose(g.target, elems[i].target)};
        if (seen.insert({h.source, h.target}).second) elems.push_back(std::move(h));
      }
    return PermutationAction(std::move(source), std::move(target), std::move(elems));
  }

  const BasisPtr& source() const noexcept { return source_; }
  const BasisPtr& target() const noexcept { return target_; }
  const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  std::optional<std::size_t> identity_index() const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i].is_identity()) return i;
    return std::nullopt;
  }

  /// Whether the listed elements are closed under composition.
  bool is_closed() const {
    std::set<std::pair<Permutation, Permutation>> have;
    for (const auto& g : elements_) have.insert({g.source, g.target});
    for (const auto& g : elements_)
      for (const auto& h : elements_)
        if (!have.count({compose(g.source, h.source), compose(g.target, h.target)})) return false;
    return true;
  }

 private:
  BasisPtr source_;
  BasisPtr target_;
  std::vector<GroupElement> elements_;
};

namespace detail {

inline Chain permute(const Chain& x, const Permutation& p) {
  std::vector<Chain::Entry> out;
  out.reserve(x.support_size());
  for (auto [id, c] : x.entries()) out.emplace_back(BasisId(p.at(id.index)), c);
  return Chain(x.basis(), std::move(out));
}

inline void require_action_on(const ModuleMap& rho, const PermutationAction& A) {
  if (A.source()->size() != rho.source()->size() || A.target()->size() != rho.target()->size())
    throw InputError("action sizes do not match the map's bases");
}

}  // namespace detail

/// g·x for x over the source (or target) basis.
inline Chain act(const GroupElement& g, const Chain& x, Side side = Side::kSource) {
  return detail::permute(x, side == Side::kSource ? g.source : g.target);
}

inline std::vector<BasisId> act(const GroupElement& g, const std::vector<BasisId>& cells, Side side = Side::kSource) {
  const auto& p = side == Side::kSource ? g.source : g.target;
  std::vector<BasisId> out;
  for (auto c : cells) out.emplace_back(p.at(c.index));
  std::sort(out.begin(), out.end());
  return out;
}

struct EquivarianceReport {
  bool ok = true;
  std::string element;
  std::string cell;

  explicit operator bool() const noexcept { return ok; }
};

/// ρ(g·s) = g·ρ(s) for every listed g and every source cell s.
inline EquivarianceReport equivariance_report(const ModuleMap& rho, const PermutationAction& A) {
  detail::require_action_on(rho, A);
  for (const auto& g : A.elements())
    for (std::uint32_t s = 0; s < rho.source()->size(); ++s) {
      Chain lhs = rho.column(BasisId(g.source[s]));
      Chain rhs = act(g, rho.column(BasisId(s)), Side::kTarget);
      if (lhs != rhs) return {false, g.name, rho.source()->label(BasisId(s))};
    }
  return {};
}

inline bool check_equivariance(const ModuleMap& rho, const PermutationAction& A) {
  return static_cast<bool>(equivariance_report(rho, A));
}

/// Orbit partition; each orbit sorted, orbits ordered by smallest member.
inline std::vector<std::vector<BasisId>> orbits(const PermutationAction& A, Side side) {
  const std::size_t n = side == Side::kSource ? A.source()->size() : A.target()->size();
  detail::DisjointSets sets(n);
  for (const auto& g : A.elements()) {
    const auto& p = side == Side::kSource ? g.source : g.target;
    for (std::size_t i = 0; i < n; ++i) sets.unite(i, p[i]);
  }
  std::map<std::size_t, std::vector<BasisId>> by_root;
  for (std::uint32_t i = 0; i < n; ++i) by_root[sets.find(i)].emplace_back(i);
  std::vector<std::vector<BasisId>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

/// Listed elements fixing t.
inline std::size_t stabilizer_order(const PermutationAction& A, BasisId t, Side side = Side::kTarget) {
  std::size_t count = 0;
  for (const auto& g : A.elements()) {
    const auto& p = side == Side::kSource ? g.source : g.target;
    if (p.at(t.index) == t.index) ++count;
  }
  return count;
}

inline std::set<Chain> orbit(const PermutationAction& A, const Chain& x, Side side = Side::kSource) {
  std::set<Chain> out;
  for (const auto& g : A.elements()) out.insert(act(g, x, side));
  return out;
}

/// Lexicographically smallest element of the orbit.
inline Chain canonical_representative(const PermutationAction& A, const Chain& x, Side side = Side::kSource) {
  Chain best = x;
  for (const auto& g : A.elements()) {
    Chain y = act(g, x, side);
    if (y < best) best = std::move(y);
  }
  return best;
}

/// One canonical representative per orbit of 𝒟_n, grown from the
/// representatives of 𝒟_{n−1} by the same extension rule as enumerate_dn.
/// Requires a group (closed, with inverses) acting equivariantly.
inline std::set<Chain> dn_orbit_representatives(const ModuleMap& rho, const PermutationAction& A, std::size_t n) {
  detail::require_action_on(rho, A);
  std::set<Chain> level;
  if (n == 0) return level;
  for (std::uint32_t s = 0; s < rho.source()->size(); ++s)
    for (int sg : {1, -1}) level.insert(canonical_representative(A, Chain::unit(rho.source(), BasisId(s), sg)));
  for (std::size_t k = 1; k < n; ++k) {
    std::set<Chain> next;
    for (const auto& y : level)
      for (const auto& x : extend_connected(rho, y)) next.insert(canonical_representative(A, x));
    level = std::move(next);
  }
  return level;
}

/// Union of the orbits of the given chains.
inline std::set<Chain> orbit_union(const PermutationAction& A, const std::set<Chain>& reps) {
  std::set<Chain> out;
  for (const auto& r : reps) {
    auto o = orbit(A, r);
    out.insert(o.begin(), o.end());
  }
  return out;
}

/// B_n over orbit representatives of 𝒟_1 … 𝒟_n only.
inline BnBound bn_via_orbits(const ModuleMap& rho, const ModuleMap& filler, const PermutationAction& A, std::size_t n) {
  if (!same_basis(rho.source(), filler.target())) throw InputError("filling map must land in the source of ρ");
  std::vector<Chain> reps;
  for (std::size_t i = 1; i <= n; ++i) {
    auto level = dn_orbit_representatives(rho, A, i);
    reps.insert(reps.end(), level.begin(), level.end());
  }
  return detail::bound_over(n, rho, filler, reps);
}

/// Builds a group element from label maps on both bases.
template <class SourceMap, class TargetMap>
GroupElement element_from_labels(std::string name, const Basis& source, const Basis& target, SourceMap&& fs,
                                 TargetMap&& ft) {
  GroupElement g{std::move(name), {}, {}};
  for (const auto& l : source.labels()) g.source.push_back(source.at(fs(l)).index);
  for (const auto& l : target.labels()) g.target.push_back(target.at(ft(l)).index);
  return g;
}

}  // namespace homfill
