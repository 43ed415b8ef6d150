#pragma once

// Named fixtures (tetra_solid, grid_3x3, coned_z2_4, ...) and the standard
// symmetry actions on cycle graphs and tori.

#include <cmath>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "homfill/builders.hpp"
#include "homfill/equivariance.hpp"

namespace homfill {

/// Builds a fixture by name; nullopt when the name is not a fixture.
inline std::optional<ChainComplex> resolve_fixture(const std::string& name) {
  static const std::regex grid(R"(grid_(\d+)x(\d+))");
  static const std::regex sized(R"((torus|coned_f2|coned_z2|path|cycle)_(\d+))");
  if (name == "tetra_solid") return build_tetrahedron(true);
  if (name == "tetra_hollow") return build_tetrahedron(false);
  std::smatch m;
  auto number = [](const std::string& s) -> std::size_t {
    if (s.size() > 6) throw InputError("fixture size '" + s + "' is too large");
    return std::stoul(s);
  };
  if (std::regex_match(name, m, grid)) return build_grid(number(m[1]), number(m[2]));
  if (std::regex_match(name, m, sized)) {
    std::size_t n = number(m[2]);
    const std::string kind = m[1];
    if (kind == "torus") return build_torus_grid(n);
    if (kind == "coned_f2") return build_coned_off({GroupKind::kFree2, n});
    if (kind == "coned_z2") return build_coned_off({GroupKind::kFreeAbelian2, n});
    if (kind == "path") return build_path(n);
    return build_cycle(n);
  }
  return std::nullopt;
}

namespace detail {

inline std::string shift_index_label(const std::string& l, std::size_t by, std::size_t n) {
  // "v3" or "e3"
  return l.substr(0, 1) + std::to_string((std::stoul(l.substr(1)) + by) % n);
}

/// Label of a grid cell p/h/v/s<x>_<y> translated on the n×n torus.
inline std::string shift_grid_label(const std::string& l, std::size_t dx, std::size_t dy, std::size_t n) {
  auto us = l.find('_');
  std::size_t x = std::stoul(l.substr(1, us - 1));
  std::size_t y = std::stoul(l.substr(us + 1));
  return grid_label(l[0], (x + dx) % n, (y + dy) % n);
}

}  // namespace detail

/// Cyclic group C_n acting on cycle_n by v_i ↦ v_{i+1}, e_i ↦ e_{i+1}.
inline PermutationAction cycle_rotation_action(const ChainComplex& cycle) {
  const std::size_t n = cycle.basis(0)->size();
  auto r = element_from_labels(
      "r", *cycle.basis(1), *cycle.basis(0), [&](const std::string& l) { return detail::shift_index_label(l, 1, n); },
      [&](const std::string& l) { return detail::shift_index_label(l, 1, n); });
  return PermutationAction::closure(cycle.basis(1), cycle.basis(0), {r});
}

/// The reflection v_i ↦ v_{−i}, e_i ↦ e_{−i−1} of cycle_n as a plain
/// permutation pair. It reverses edge orientations, so it does not commute
/// with ∂ as an unsigned permutation.
inline PermutationAction cycle_reflection_action(const ChainComplex& cycle) {
  const std::size_t n = cycle.basis(0)->size();
  auto s = element_from_labels(
      "s", *cycle.basis(1), *cycle.basis(0),
      [&](const std::string& l) { return "e" + std::to_string((2 * n - 1 - std::stoul(l.substr(1))) % n); },
      [&](const std::string& l) { return "v" + std::to_string((n - std::stoul(l.substr(1))) % n); });
  return PermutationAction::closure(cycle.basis(1), cycle.basis(0), {s});
}

/// Translations of torus_n acting on ∂_d (C_d → C_{d−1}). With `both_axes`
/// the group is ℤ_n × ℤ_n; otherwise translations along x only (C_n).
inline PermutationAction torus_translation_action(const ChainComplex& torus, std::size_t d, bool both_axes = false) {
  const std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(double(torus.basis(0)->size()))));
  auto shift = [&](std::size_t dx, std::size_t dy, std::string name) {
    auto f = [=](const std::string& l) { return detail::shift_grid_label(l, dx, dy, n); };
    return element_from_labels(std::move(name), *torus.basis(d), *torus.basis(d - 1), f, f);
  };
  std::vector<GroupElement> gens{shift(1, 0, "x")};
  if (both_axes) gens.push_back(shift(0, 1, "y"));
  return PermutationAction::closure(torus.basis(d), torus.basis(d - 1), gens);
}

}  // namespace homfill
