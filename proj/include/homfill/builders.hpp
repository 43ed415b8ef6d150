#pragma once

// Test complexes: simplices, grids, tori, paths, cycles, and truncated
// coned-off Cayley complexes of F₂ and ℤ² relative to ⟨b⟩. Also the circuit
// counter used for fineness checks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homfill/chain.hpp"
#include "homfill/error.hpp"

namespace homfill {

/// Accumulates labelled cells degree by degree, then freezes into a complex.
/// Boundary terms refer to cells of the degree below by index.
class ComplexBuilder {
 public:
  explicit ComplexBuilder(std::string name) : name_(std::move(name)) { degrees_.emplace_back(); }

  std::size_t top_degree() const noexcept { return degrees_.size() - 1; }

  std::uint32_t add_cell(std::size_t d, std::string label, std::vector<std::pair<std::uint32_t, Coeff>> boundary = {}) {
    while (degrees_.size() <= d) degrees_.emplace_back();
    auto& deg = degrees_[d];
    if (deg.index.count(label)) throw InputError("duplicate cell '" + label + "' in degree " + std::to_string(d));
    if (d == 0 && !boundary.empty()) throw InputError("vertices have no boundary");
    auto id = static_cast<std::uint32_t>(deg.labels.size());
    deg.index.emplace(label, id);
    deg.labels.push_back(std::move(label));
    deg.boundary.push_back(std::move(boundary));
    return id;
  }

  /// Declares degree d (possibly empty) so that the complex reaches it.
  void ensure_degree(std::size_t d) {
    while (degrees_.size() <= d) degrees_.emplace_back();
  }

  std::optional<std::uint32_t> find(std::size_t d, const std::string& label) const {
    if (d >= degrees_.size()) return std::nullopt;
    auto it = degrees_[d].index.find(label);
    if (it == degrees_[d].index.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t at(std::size_t d, const std::string& label) const {
    auto id = find(d, label);
    if (!id) throw InputError("no cell '" + label + "' in degree " + std::to_string(d));
    return *id;
  }

  void set_boundary(std::size_t d, std::uint32_t cell, std::vector<std::pair<std::uint32_t, Coeff>> boundary) {
    degrees_.at(d).boundary.at(cell) = std::move(boundary);
  }

  ChainComplex build() const {
    std::vector<BasisPtr> bases;
    for (std::size_t d = 0; d < degrees_.size(); ++d)
      bases.push_back(Basis::make(name_ + ".C" + std::to_string(d), degrees_[d].labels));
    std::vector<ModuleMap> maps;
    for (std::size_t d = 1; d < degrees_.size(); ++d) {
      std::vector<Chain> cols;
      for (const auto& terms : degrees_[d].boundary) {
        std::vector<Chain::Entry> entries;
        for (auto [t, c] : terms) entries.emplace_back(BasisId(t), c);
        cols.emplace_back(bases[d - 1], std::move(entries));
      }
      maps.emplace_back(bases[d], bases[d - 1], std::move(cols));
    }
    return ChainComplex(name_, std::move(bases), std::move(maps));
  }

 private:
  struct Degree {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::vector<std::pair<std::uint32_t, Coeff>>> boundary;
  };
  std::string name_;
  std::vector<Degree> degrees_;
};

/// Tetrahedron: faces f_ijk with ∂ = e_jk − e_ik + e_ij; the 3-cell when solid.
inline ChainComplex build_tetrahedron(bool solid) {
  ComplexBuilder b(solid ? "tetra_solid" : "tetra_hollow");
  for (int i = 0; i < 4; ++i) b.add_cell(0, "v" + std::to_string(i));
  auto edge = [](int i, int j) { return "e" + std::to_string(i) + std::to_string(j); };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      b.add_cell(1, edge(i, j), {{b.at(0, "v" + std::to_string(i)), -1}, {b.at(0, "v" + std::to_string(j)), 1}});
  std::vector<std::string> faces;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        auto f = "f" + std::to_string(i) + std::to_string(j) + std::to_string(k);
        b.add_cell(2, f, {{b.at(1, edge(j, k)), 1}, {b.at(1, edge(i, k)), -1}, {b.at(1, edge(i, j)), 1}});
      }
  if (solid)
    b.add_cell(3, "t0123", {{b.at(2, "f123"), 1}, {b.at(2, "f023"), -1}, {b.at(2, "f013"), 1}, {b.at(2, "f012"), -1}});
  return b.build();
}

namespace detail {

inline std::string grid_label(char kind, std::size_t x, std::size_t y) {
  return kind + std::to_string(x) + "_" + std::to_string(y);
}

/// Grid on [0,w]×[0,h], or the n×n torus when `periodic` (w = h = n).
inline ChainComplex grid_like(const std::string& name, std::size_t w, std::size_t h, bool periodic) {
  ComplexBuilder b(name);
  const std::size_t vw = periodic ? w : w + 1;
  const std::size_t vh = periodic ? h : h + 1;
  auto vx = [&](std::size_t x, std::size_t y) { return b.at(0, grid_label('p', x % vw, y % vh)); };
  for (std::size_t y = 0; y < vh; ++y)
    for (std::size_t x = 0; x < vw; ++x) b.add_cell(0, grid_label('p', x, y));
  for (std::size_t y = 0; y < vh; ++y)
    for (std::size_t x = 0; x < w; ++x) b.add_cell(1, grid_label('h', x, y), {{vx(x, y), -1}, {vx(x + 1, y), 1}});
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < vw; ++x) b.add_cell(1, grid_label('v', x, y), {{vx(x, y), -1}, {vx(x, y + 1), 1}});
  auto hx = [&](std::size_t x, std::size_t y) { return b.at(1, grid_label('h', x % vw, y % vh)); };
  auto vy = [&](std::size_t x, std::size_t y) { return b.at(1, grid_label('v', x % vw, y % vh)); };
  b.ensure_degree(2);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x)
      b.add_cell(2, grid_label('s', x, y), {{hx(x, y), 1}, {vy(x + 1, y), 1}, {hx(x, y + 1), -1}, {vy(x, y), -1}});
  return b.build();
}

}  // namespace detail

inline ChainComplex build_grid(std::size_t w, std::size_t h) {
  if (w == 0 || h == 0) throw InputError("grid dimensions must be positive");
  return detail::grid_like("grid_" + std::to_string(w) + "x" + std::to_string(h), w, h, false);
}

inline ChainComplex build_torus_grid(std::size_t n) {
  if (n < 2) throw InputError("torus size must be at least 2");
  return detail::grid_like("torus_" + std::to_string(n), n, n, true);
}

/// v0 − e1 → v1 − … − eN → vN.
inline ChainComplex build_path(std::size_t n) {
  ComplexBuilder b("path_" + std::to_string(n));
  for (std::size_t i = 0; i <= n; ++i) b.add_cell(0, "v" + std::to_string(i));
  b.ensure_degree(1);
  for (std::size_t i = 1; i <= n; ++i) b.add_cell(1, "e" + std::to_string(i), {{std::uint32_t(i - 1), -1}, {std::uint32_t(i), 1}});
  return b.build();
}

/// e_i : v_i → v_{i+1 mod n}.
inline ChainComplex build_cycle(std::size_t n) {
  if (n == 0) throw InputError("cycle graph needs at least one vertex");
  ComplexBuilder b("cycle_" + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) b.add_cell(0, "v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::uint32_t, Coeff>> terms;
    if (n > 1) terms = {{std::uint32_t(i), -1}, {std::uint32_t((i + 1) % n), 1}};
    b.add_cell(1, "e" + std::to_string(i), std::move(terms));
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Coned-off Cayley complexes.

/// Free group on a, b as reduced words; 'A' = a⁻¹, 'B' = b⁻¹.
struct FreeGroup2 {
  using Element = std::string;
  static constexpr bool kAbelian = false;

  static Element identity() { return {}; }
  static char inverse(char s) { return (s >= 'a') ? char(s - 'a' + 'A') : char(s - 'A' + 'a'); }
  static Element mul(Element g, char s) {
    if (!g.empty() && g.back() == inverse(s))
      g.pop_back();
    else
      g.push_back(s);
    return g;
  }
  static std::size_t length(const Element& g) { return g.size(); }
  static std::string label(const Element& g) { return g.empty() ? "1" : g; }
  /// Shortest element of g⟨b⟩.
  static Element coset_rep(Element g) {
    while (!g.empty() && (g.back() == 'b' || g.back() == 'B')) g.pop_back();
    return g;
  }
};

/// ℤ² = ⟨a, b | aba⁻¹b⁻¹⟩ as exponent pairs, written a^x b^y.
struct FreeAbelian2 {
  using Element = std::pair<long, long>;
  static constexpr bool kAbelian = true;

  static Element identity() { return {0, 0}; }
  static Element mul(Element g, char s) {
    switch (s) {
      case 'a': ++g.first; break;
      case 'A': --g.first; break;
      case 'b': ++g.second; break;
      case 'B': --g.second; break;
      default: throw InputError(std::string("unknown generator '") + s + "'");
    }
    return g;
  }
  static std::size_t length(const Element& g) { return std::size_t(std::labs(g.first) + std::labs(g.second)); }
  static std::string label(const Element& g) {
    if (g == identity()) return "1";
    std::string out(std::size_t(std::labs(g.first)), g.first > 0 ? 'a' : 'A');
    out.append(std::size_t(std::labs(g.second)), g.second > 0 ? 'b' : 'B');
    return out;
  }
  static Element coset_rep(Element g) { return {g.first, 0}; }
};

enum class GroupKind { kFree2, kFreeAbelian2 };

struct ConedOffSpec {
  GroupKind group_kind = GroupKind::kFree2;
  std::size_t radius = 1;
};

inline std::string group_word(const std::string& word) { return word.empty() ? "1" : word; }

/// Label of the cone vertex g⟨b⟩ for a coset representative label.
inline std::string cone_vertex_label(const std::string& rep_label) { return rep_label == "1" ? "P" : rep_label + "P"; }

/// Γ̂ of G relative to P = ⟨b⟩, truncated to the word ball of the given radius.
/// Vertices: ball elements, then cosets with a representative in the ball.
/// Edges: e[g.s] : g → gs (s ∈ {a, b}) and c[g] : g → g⟨b⟩. Faces: commutator
/// squares sq[g] (abelian case) and triangles tri[g] = e[g.b] + c[gb] − c[g].
template <class Group>
ChainComplex build_coned_off_group(std::size_t radius, const std::string& name) {
  using Element = typename Group::Element;
  if (radius == 0) throw InputError("coned-off truncation radius must be at least 1");

  // Ball by breadth-first search, then a deterministic (length, label) order.
  std::map<std::string, Element> seen;
  std::vector<Element> frontier{Group::identity()};
  seen.emplace(Group::label(Group::identity()), Group::identity());
  for (std::size_t r = 0; r < radius; ++r) {
    std::vector<Element> next;
    for (const auto& g : frontier)
      for (char s : {'a', 'A', 'b', 'B'}) {
        Element h = Group::mul(g, s);
        if (Group::length(h) != r + 1) continue;
        if (seen.emplace(Group::label(h), h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  std::vector<Element> ball;
  for (auto& [lbl, g] : seen) ball.push_back(g);
  auto by_length = [](const Element& x, const Element& y) {
    auto lx = Group::length(x);
    auto ly = Group::length(y);
    if (lx != ly) return lx < ly;
    return Group::label(x) < Group::label(y);
  };
  std::sort(ball.begin(), ball.end(), by_length);

  ComplexBuilder b(name);
  for (const auto& g : ball) b.add_cell(0, Group::label(g));
  std::vector<Element> reps;
  for (const auto& g : ball) {
    Element r = Group::coset_rep(g);
    if (std::find(reps.begin(), reps.end(), r) == reps.end()) reps.push_back(r);
  }
  std::sort(reps.begin(), reps.end(), by_length);
  for (const auto& r : reps) b.add_cell(0, cone_vertex_label(Group::label(r)));

  auto vertex = [&](const Element& g) { return b.find(0, Group::label(g)); };
  auto cone = [&](const Element& g) { return b.at(0, cone_vertex_label(Group::label(Group::coset_rep(g)))); };
  auto gen_edge = [](const Element& g, char s) { return "e[" + Group::label(g) + "." + s + "]"; };

  for (const auto& g : ball)
    for (char s : {'a', 'b'})
      if (auto h = vertex(Group::mul(g, s))) b.add_cell(1, gen_edge(g, s), {{*vertex(g), -1}, {*h, 1}});
  for (const auto& g : ball) b.add_cell(1, "c[" + Group::label(g) + "]", {{*vertex(g), -1}, {cone(g), 1}});

  b.ensure_degree(2);
  if constexpr (Group::kAbelian) {
    for (const auto& g : ball) {
      Element ga = Group::mul(g, 'a');
      Element gb = Group::mul(g, 'b');
      Element gab = Group::mul(ga, 'b');
      if (!vertex(ga) || !vertex(gb) || !vertex(gab)) continue;
      b.add_cell(2, "sq[" + Group::label(g) + "]",
                 {{b.at(1, gen_edge(g, 'a')), 1},
                  {b.at(1, gen_edge(ga, 'b')), 1},
                  {b.at(1, gen_edge(gb, 'a')), -1},
                  {b.at(1, gen_edge(g, 'b')), -1}});
    }
  }
  for (const auto& g : ball) {
    Element gb = Group::mul(g, 'b');
    if (!vertex(gb)) continue;
    b.add_cell(2, "tri[" + Group::label(g) + "]",
               {{b.at(1, gen_edge(g, 'b')), 1},
                {b.at(1, "c[" + Group::label(gb) + "]"), 1},
                {b.at(1, "c[" + Group::label(g) + "]"), -1}});
  }
  return b.build();
}

inline ChainComplex build_coned_off(const ConedOffSpec& spec) {
  std::string r = std::to_string(spec.radius);
  if (spec.group_kind == GroupKind::kFree2) return build_coned_off_group<FreeGroup2>(spec.radius, "coned_f2_" + r);
  return build_coned_off_group<FreeAbelian2>(spec.radius, "coned_z2_" + r);
}

/// Whether every cell of `small` appears in `big` under the same label with
/// the same boundary (compared by labels).
inline bool is_labelled_subcomplex(const ChainComplex& small, const ChainComplex& big) {
  if (small.top_degree() > big.top_degree()) return false;
  for (std::size_t d = 0; d <= small.top_degree(); ++d) {
    const auto& sb = *small.basis(d);
    const auto& bb = *big.basis(d);
    for (std::uint32_t i = 0; i < sb.size(); ++i) {
      auto j = bb.find(sb.label(BasisId(i)));
      if (!j) return false;
      if (d == 0) continue;
      std::map<std::string, Coeff> a;
      std::map<std::string, Coeff> c;
      for (auto [t, k] : small.boundary(d).column(BasisId(i)).entries()) a[small.basis(d - 1)->label(t)] = k;
      for (auto [t, k] : big.boundary(d).column(*j).entries()) c[big.basis(d - 1)->label(t)] = k;
      if (a != c) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Circuits in the 1-skeleton.

/// Closed edge path without repeated vertices. vertices[i] → vertices[i+1]
/// along edges[i] (indices mod length); signs[i] = +1 when edges[i] is
/// traversed along its orientation.
struct Circuit {
  std::vector<BasisId> vertices;
  std::vector<BasisId> edges;
  std::vector<int> signs;

  std::size_t length() const noexcept { return edges.size(); }
};

struct EdgeEnds {
  BasisId tail;
  BasisId head;
};

/// Tail and head of an edge with ∂e = head − tail.
inline EdgeEnds edge_ends(const ChainComplex& X, BasisId e) {
  if (X.top_degree() < 1) throw InputError("complex has no edges");
  const auto& col = X.boundary(1).column(e);
  auto entries = col.entries();
  const auto& lbl = X.basis(1)->label(e);
  if (entries.empty()) throw InputError("edge '" + lbl + "' has zero boundary");
  if (entries.size() != 2 || entries[0].second * entries[1].second != -1)
    throw InputError("edge '" + lbl + "' does not join two vertices");
  return entries[0].second < 0 ? EdgeEnds{entries[0].first, entries[1].first}
                               : EdgeEnds{entries[1].first, entries[0].first};
}

namespace detail {

struct Incidence {
  BasisId edge;
  BasisId other;
  int sign;  // +1 when leaving along the orientation
};

inline std::vector<std::vector<Incidence>> incidence_lists(const ChainComplex& X) {
  std::vector<std::vector<Incidence>> adj(X.basis(0)->size());
  for (std::uint32_t e = 0; e < X.basis(1)->size(); ++e) {
    auto col = X.boundary(1).column(BasisId(e)).entries();
    if (col.size() != 2 || col[0].second * col[1].second != -1) continue;
    auto [tail, head] = edge_ends(X, BasisId(e));
    adj[tail.index].push_back({BasisId(e), head, 1});
    adj[head.index].push_back({BasisId(e), tail, -1});
  }
  return adj;
}

}  // namespace detail

/// Circuits of length ≤ n through edge e. Each circuit contains e exactly once,
/// so walking it from head(e) back to tail(e) gives a unique representative up
/// to rotation and reflection.
inline std::vector<Circuit> circuits_through_edge(const ChainComplex& X, BasisId e, std::size_t n) {
  auto [tail, head] = edge_ends(X, e);
  std::vector<Circuit> out;
  if (n < 1) return out;
  auto adj = detail::incidence_lists(X);
  std::vector<char> on_path(adj.size(), 0);
  Circuit cur;
  cur.vertices = {tail, head};
  cur.edges = {e};
  cur.signs = {1};
  on_path[tail.index] = on_path[head.index] = 1;
  auto dfs = [&](auto&& self, BasisId at) -> void {
    for (const auto& inc : adj[at.index]) {
      if (inc.edge == e) continue;
      if (inc.other == tail) {
        if (cur.edges.size() + 1 > n) continue;
        Circuit c = cur;
        c.edges.push_back(inc.edge);
        c.signs.push_back(inc.sign);
        out.push_back(std::move(c));
        continue;
      }
      if (on_path[inc.other.index] || cur.edges.size() + 2 > n) continue;
      on_path[inc.other.index] = 1;
      cur.vertices.push_back(inc.other);
      cur.edges.push_back(inc.edge);
      cur.signs.push_back(inc.sign);
      self(self, inc.other);
      cur.vertices.pop_back();
      cur.edges.pop_back();
      cur.signs.pop_back();
      on_path[inc.other.index] = 0;
    }
  };
  dfs(dfs, head);
  return out;
}

inline std::size_t count_circuits_through_edge(const ChainComplex& X, BasisId e, std::size_t n) {
  return circuits_through_edge(X, e, n).size();
}

/// The 1-cycle traced by a circuit.
inline Chain circuit_chain(const ChainComplex& X, const Circuit& c) {
  std::vector<Chain::Entry> entries;
  for (std::size_t i = 0; i < c.edges.size(); ++i) entries.emplace_back(c.edges[i], c.signs[i]);
  return Chain(X.basis(1), std::move(entries));
}

/// Edge label → number of circuits of length ≤ n through it. With `edges`
/// given, only those labels are reported.
inline std::map<std::string, std::size_t> fineness_report(const ChainComplex& X, std::size_t n,
                                                          const std::optional<std::vector<std::string>>& edges = std::nullopt) {
  std::map<std::string, std::size_t> out;
  if (X.top_degree() < 1) return out;
  const auto& basis = *X.basis(1);
  if (edges) {
    for (const auto& lbl : *edges) out[lbl] = count_circuits_through_edge(X, basis.at(lbl), n);
  } else {
    for (std::uint32_t e = 0; e < basis.size(); ++e)
      out[basis.label(BasisId(e))] = count_circuits_through_edge(X, BasisId(e), n);
  }
  return out;
}

/// Labels of edges of `core`, which must be a labelled subcomplex of the
/// complexes it is compared against.
inline std::vector<std::string> edge_labels(const ChainComplex& core) {
  if (core.top_degree() < 1) return {};
  return core.basis(1)->labels();
}

/// γ_m = P → b → ab → a⟨b⟩ → abᵐ → bᵐ → P in the ℤ² coned-off complex.
inline Chain z2_hexagon(const ChainComplex& X, std::size_t m) {
  if (m < 2) throw InputError("hexagon family starts at m = 2");
  const auto& e = *X.basis(1);
  std::string bm(m, 'b');
  auto id = [&](const std::string& l) { return e.at(l); };
  return Chain(X.basis(1), {{id("c[b]"), -1},
                            {id("e[b.a]"), 1},
                            {id("c[ab]"), 1},
                            {id("c[a" + bm + "]"), -1},
                            {id("e[" + bm + ".a]"), -1},
                            {id("c[" + bm + "]"), 1}});
}

}  // namespace homfill
