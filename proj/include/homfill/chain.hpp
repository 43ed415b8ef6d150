#pragma once

// Exact sparse integer chains over named bases, module maps between them and
// finite chain complexes.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homfill/error.hpp"

namespace homfill {

using Coeff = std::int64_t;

namespace detail {

inline Coeff checked_add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("chain coefficient overflow");
  return r;
}

inline Coeff checked_mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("chain coefficient overflow");
  return r;
}

inline Coeff checked_neg(Coeff a) {
  if (a == std::numeric_limits<Coeff>::min()) throw std::overflow_error("chain coefficient overflow");
  return -a;
}

inline Coeff checked_abs(Coeff a) { return a < 0 ? checked_neg(a) : a; }

inline int sign(Coeff a) { return (a > 0) - (a < 0); }

}  // namespace detail

/// Index of a cell inside one basis.
struct BasisId {
  std::uint32_t index = 0;

  constexpr BasisId() = default;
  constexpr explicit BasisId(std::uint32_t i) : index(i) {}

  friend constexpr auto operator<=>(BasisId, BasisId) = default;
};

/// An ordered, finite set of distinctly labelled cells.
class Basis {
 public:
  Basis(std::string name, std::vector<std::string> labels) : name_(std::move(name)), labels_(std::move(labels)) {
    index_.reserve(labels_.size());
    for (std::uint32_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second)
        throw InputError("duplicate label '" + labels_[i] + "' in basis '" + name_ + "'");
    }
  }

  static std::shared_ptr<const Basis> make(std::string name, std::vector<std::string> labels) {
    return std::make_shared<const Basis>(std::move(name), std::move(labels));
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool contains(BasisId id) const noexcept { return id.index < labels_.size(); }

  const std::string& label(BasisId id) const {
    if (!contains(id)) throw InputError("basis id " + std::to_string(id.index) + " out of range for '" + name_ + "'");
    return labels_[id.index];
  }

  std::optional<BasisId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return BasisId(it->second);
  }

  BasisId at(std::string_view label) const {
    if (auto id = find(label)) return *id;
    throw InputError("unknown cell '" + std::string(label) + "' in basis '" + name_ + "'");
  }

  friend bool operator==(const Basis& a, const Basis& b) { return a.name_ == b.name_ && a.labels_ == b.labels_; }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

using BasisPtr = std::shared_ptr<const Basis>;

inline bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

/// A finitely supported integer combination of basis cells. Entries are kept
/// sorted by id and never hold a zero coefficient.
class Chain {
 public:
  using Entry = std::pair<BasisId, Coeff>;

  Chain() = default;
  explicit Chain(BasisPtr basis) : basis_(std::move(basis)) {}

  Chain(BasisPtr basis, std::vector<Entry> entries) : basis_(std::move(basis)), entries_(std::move(entries)) {
    normalize();
  }

  static Chain unit(BasisPtr basis, BasisId id, int sign = 1) {
    if (sign != 1 && sign != -1) throw InputError("unit chain sign must be +1 or -1");
    return Chain(std::move(basis), {{id, sign}});
  }

  static Chain from_dense(BasisPtr basis, std::span<const Coeff> values) {
    if (basis && values.size() != basis->size()) throw InputError("dense vector size does not match basis");
    Chain c(std::move(basis));
    for (std::uint32_t i = 0; i < values.size(); ++i)
      if (values[i] != 0) c.entries_.emplace_back(BasisId(i), values[i]);
    return c;
  }

  /// Trusted constructor: entries already sorted, distinct and nonzero.
  static Chain from_sorted(BasisPtr basis, std::vector<Entry> entries) {
    Chain c(std::move(basis));
    c.entries_ = std::move(entries);
    return c;
  }

  const BasisPtr& basis() const noexcept { return basis_; }
  std::span<const Entry> entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  std::size_t support_size() const noexcept { return entries_.size(); }

  /// Coefficient at `id`, 0 if absent. No range check.
  Coeff operator[](BasisId id) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry& e, BasisId k) { return e.first < k; });
    return (it != entries_.end() && it->first == id) ? it->second : 0;
  }

  std::vector<Coeff> to_dense() const {
    std::vector<Coeff> out(basis_ ? basis_->size() : 0, 0);
    for (auto [id, c] : entries_) out[id.index] = c;
    return out;
  }

  /// Lexicographic order on (id, coefficient) entry lists; bases are not compared.
  friend std::strong_ordering operator<=>(const Chain& a, const Chain& b) {
    return std::lexicographical_compare_three_way(
        a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
        [](const Entry& x, const Entry& y) {
          if (auto c = x.first <=> y.first; c != 0) return c;
          return x.second <=> y.second;
        });
  }
  friend bool operator==(const Chain& a, const Chain& b) { return a.entries_ == b.entries_; }

 private:
  void normalize() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries_.size();) {
      BasisId id = entries_[i].first;
      if (basis_ && !basis_->contains(id))
        throw InputError("basis id " + std::to_string(id.index) + " out of range for '" + basis_->name() + "'");
      Coeff sum = 0;
      for (; i < entries_.size() && entries_[i].first == id; ++i) sum = detail::checked_add(sum, entries_[i].second);
      if (sum != 0) entries_[out++] = {id, sum};
    }
    entries_.resize(out);
  }

  BasisPtr basis_;
  std::vector<Entry> entries_;
};

inline void require_same_basis(const Chain& x, const Chain& y) {
  if (!same_basis(x.basis(), y.basis())) throw InputError("chains live over different bases");
}

/// ⟨x, s⟩.
inline Coeff coeff(const Chain& x, BasisId s) {
  if (!x.basis() || !x.basis()->contains(s))
    throw InputError("basis id " + std::to_string(s.index) + " out of range");
  return x[s];
}

inline Coeff l1_norm(const Chain& x) {
  Coeff n = 0;
  for (auto [id, c] : x.entries()) n = detail::checked_add(n, detail::checked_abs(c));
  return n;
}

inline Chain add(const Chain& x, const Chain& y) {
  require_same_basis(x, y);
  auto a = x.entries();
  auto b = y.entries();
  std::vector<Chain::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Coeff s = detail::checked_add(a[i].second, b[j].second);
      if (s != 0) out.emplace_back(a[i].first, s);
      ++i;
      ++j;
    }
  }
  return Chain::from_sorted(x.basis(), std::move(out));
}

inline Chain scale(Coeff n, const Chain& x) {
  if (n == 0) return Chain(x.basis());
  std::vector<Chain::Entry> out(x.entries().begin(), x.entries().end());
  for (auto& e : out) e.second = detail::checked_mul(n, e.second);
  return Chain::from_sorted(x.basis(), std::move(out));
}

inline Chain negate(const Chain& x) { return scale(-1, x); }

inline Chain operator+(const Chain& x, const Chain& y) { return add(x, y); }
inline Chain operator-(const Chain& x) { return negate(x); }
inline Chain operator-(const Chain& x, const Chain& y) { return add(x, negate(y)); }
inline Chain operator*(Coeff n, const Chain& x) { return scale(n, x); }

/// x ⪯ y: ⟨x,s⟩⟨y,s⟩ ≥ ⟨x,s⟩² for every s.
inline bool is_part_of(const Chain& x, const Chain& y) {
  require_same_basis(x, y);
  for (auto [id, c] : x.entries()) {
    Coeff d = y[id];
    if (c > 0 ? d < c : d > c) return false;
  }
  return true;
}

/// Cells carrying coefficients of opposite sign in x and y.
inline std::vector<BasisId> s_intersection(const Chain& x, const Chain& y) {
  require_same_basis(x, y);
  std::vector<BasisId> out;
  auto a = x.entries();
  auto b = y.entries();
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      if ((a[i].second > 0) != (b[j].second > 0)) out.push_back(a[i].first);
      ++i;
      ++j;
    }
  }
  return out;
}

inline bool s_intersects(const Chain& x, const Chain& y) { return !s_intersection(x, y).empty(); }

/// Integer matrix ℤ[source] → ℤ[target], stored by columns with a row index.
class ModuleMap {
 public:
  ModuleMap() = default;

  ModuleMap(BasisPtr source, BasisPtr target, std::vector<Chain> columns)
      : source_(std::move(source)), target_(std::move(target)), columns_(std::move(columns)) {
    if (!source_ || !target_) throw InputError("module map needs both bases");
    if (columns_.size() != source_->size()) throw InputError("module map needs one column per source cell");
    rows_.resize(target_->size());
    for (std::uint32_t s = 0; s < columns_.size(); ++s) {
      if (!same_basis(columns_[s].basis(), target_))
        throw InputError("column " + source_->label(BasisId(s)) + " is not a chain over '" + target_->name() + "'");
      for (auto [t, c] : columns_[s].entries()) rows_[t.index].emplace_back(BasisId(s), c);
    }
  }

  static ModuleMap zero(BasisPtr source, BasisPtr target) {
    std::vector<Chain> cols(source->size(), Chain(target));
    return ModuleMap(std::move(source), std::move(target), std::move(cols));
  }

  const BasisPtr& source() const noexcept { return source_; }
  const BasisPtr& target() const noexcept { return target_; }
  const std::vector<Chain>& columns() const noexcept { return columns_; }
  const Chain& column(BasisId s) const { return columns_.at(s.index); }

  /// Nonzero (source id, coefficient) pairs of row t.
  std::span<const Chain::Entry> row(BasisId t) const { return rows_.at(t.index); }

  Coeff entry(BasisId t, BasisId s) const { return column(s)[t]; }

  bool is_zero() const {
    return std::all_of(columns_.begin(), columns_.end(), [](const Chain& c) { return c.is_zero(); });
  }

  Chain apply(const Chain& x) const {
    if (!same_basis(x.basis(), source_)) throw InputError("chain is not over the source of the map");
    std::vector<Chain::Entry> acc;
    for (auto [s, c] : x.entries())
      for (auto [t, w] : columns_[s.index].entries()) acc.emplace_back(t, detail::checked_mul(c, w));
    return Chain(target_, std::move(acc));
  }

 private:
  BasisPtr source_;
  BasisPtr target_;
  std::vector<Chain> columns_;
  std::vector<std::vector<Chain::Entry>> rows_;
};

inline Chain apply_map(const ModuleMap& rho, const Chain& x) { return rho.apply(x); }

/// Graded bases C_0..C_D with boundaries ∂_d : C_d → C_{d-1}.
class ChainComplex {
 public:
  ChainComplex() = default;

  ChainComplex(std::string name, std::vector<BasisPtr> bases, std::vector<ModuleMap> boundaries)
      : name_(std::move(name)), bases_(std::move(bases)), boundaries_(std::move(boundaries)) {
    if (bases_.empty()) throw InputError("complex needs at least a degree-0 basis");
    if (boundaries_.size() + 1 != bases_.size()) throw InputError("complex needs one boundary per positive degree");
    for (std::size_t d = 1; d < bases_.size(); ++d) {
      const auto& b = boundaries_[d - 1];
      if (!same_basis(b.source(), bases_[d]) || !same_basis(b.target(), bases_[d - 1]))
        throw InputError("boundary " + std::to_string(d) + " does not map C_" + std::to_string(d) + " to C_" +
                         std::to_string(d - 1));
    }
    auto above = Basis::make(name_ + ".C" + std::to_string(bases_.size()), {});
    top_filler_ = ModuleMap::zero(above, bases_.back());
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t top_degree() const noexcept { return bases_.size() - 1; }
  const std::vector<BasisPtr>& bases() const noexcept { return bases_; }

  const BasisPtr& basis(std::size_t d) const {
    if (d > top_degree()) throw InputError("degree " + std::to_string(d) + " exceeds top degree");
    return bases_[d];
  }

  const ModuleMap& boundary(std::size_t d) const {
    if (d == 0 || d > top_degree()) throw InputError("no boundary map in degree " + std::to_string(d));
    return boundaries_[d - 1];
  }

  /// ∂_{d+1}; the zero map from an empty basis when d is the top degree.
  const ModuleMap& filling_map(std::size_t d) const {
    if (d > top_degree()) throw InputError("degree " + std::to_string(d) + " exceeds top degree");
    return d == top_degree() ? top_filler_ : boundaries_[d];
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    for (const auto& b : bases_) out.push_back(b->size());
    return out;
  }

 private:
  std::string name_;
  std::vector<BasisPtr> bases_;
  std::vector<ModuleMap> boundaries_;
  ModuleMap top_filler_;
};

struct ComplexReport {
  bool ok = true;
  std::size_t degree = 0;  // degree of the first offending cell
  std::string cell;        // its label
  Chain residual;          // ∂∂ of that cell

  explicit operator bool() const noexcept { return ok; }
};

/// Checks ∂_{d} ∘ ∂_{d+1} = 0 on every basis cell; reports the first violation.
inline ComplexReport validate_complex(const ChainComplex& X) {
  for (std::size_t d = 2; d <= X.top_degree(); ++d) {
    const auto& upper = X.boundary(d);
    const auto& lower = X.boundary(d - 1);
    for (std::uint32_t s = 0; s < upper.source()->size(); ++s) {
      Chain r = lower.apply(upper.column(BasisId(s)));
      if (!r.is_zero()) return {false, d, upper.source()->label(BasisId(s)), std::move(r)};
    }
  }
  return {};
}

inline Coeff augmentation(const Chain& x) {
  Coeff sum = 0;
  for (auto [id, c] : x.entries()) sum = detail::checked_add(sum, c);
  return sum;
}

/// ε : C_0 → ℤ as a map onto a one-cell basis.
inline ModuleMap augmentation_map(const BasisPtr& vertices) {
  auto point = Basis::make("augmentation", {"*"});
  std::vector<Chain> cols(vertices->size(), Chain(point, {{BasisId(0), 1}}));
  return ModuleMap(vertices, point, std::move(cols));
}

}  // namespace homfill
