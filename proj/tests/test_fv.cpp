#include <gtest/gtest.h>

#include "homfill/builders.hpp"
#include "homfill/connectivity.hpp"
#include "homfill/fv.hpp"
#include "oracles.hpp"

using namespace homfill;

namespace {

ChainComplex two_points() {
  ComplexBuilder b("two_points");
  b.add_cell(0, "v0");
  b.add_cell(0, "v1");
  return b.build();
}

ChainComplex point() {
  ComplexBuilder b("pt");
  b.add_cell(0, "v");
  return b.build();
}

std::vector<Coeff> finite_values(const FvTable& t) {
  std::vector<Coeff> out;
  for (const auto& r : t.rows) out.push_back(r.is_finite() ? r.value : -1);
  return out;
}

}  // namespace

TEST(EnumerateCycles, Examples) {
  auto G = build_grid(3, 3);
  auto zero = enumerate_cycles(G.boundary(1), 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_TRUE(zero[0].is_zero());
  EXPECT_EQ(enumerate_cycles(G.boundary(1), 4).size(), 19u);
  // Three vertices a side: four squares.
  EXPECT_EQ(enumerate_cycles(build_grid(2, 2).boundary(1), 4).size(), 9u);
  auto tree = build_path(5);
  for (Coeff k : {0, 3, 8}) EXPECT_EQ(enumerate_cycles(tree.boundary(1), k).size(), 1u);
}

TEST(EnumerateCycles, MatchesBruteForce) {
  for (auto X : {build_grid(2, 2), build_torus_grid(2), build_tetrahedron(true), build_cycle(5)}) {
    for (std::size_t d = 1; d <= X.top_degree(); ++d) {
      auto fast = enumerate_cycles(X.boundary(d), 5);
      std::vector<Chain> slow;
      for (const auto& s : oracle::cycles(oracle::dense(X.boundary(d)), 5)) slow.push_back(oracle::to_chain(X.basis(d), s));
      std::sort(slow.begin(), slow.end());
      auto sorted = fast;
      std::sort(sorted.begin(), sorted.end());
      EXPECT_EQ(sorted, slow) << X.name() << " degree " << d;
      EXPECT_TRUE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      // Norm order.
      for (std::size_t i = 1; i < fast.size(); ++i) EXPECT_LE(l1_norm(fast[i - 1]), l1_norm(fast[i]));
    }
  }
}

TEST(Fv, Examples) {
  auto T = build_tetrahedron(true);
  EXPECT_EQ(fv(T, 2, 0).value, 0);
  EXPECT_EQ(fv(T, 2, 3).value, 0);
  auto four = fv(T, 2, 4);
  ASSERT_TRUE(four.is_finite());
  EXPECT_EQ(four.value, 1);
  EXPECT_EQ(T.boundary(3).apply(four.filling), four.cycle);

  auto G = build_grid(3, 3);
  auto g = fv(G, 1, 4);
  ASSERT_TRUE(g.is_finite());
  EXPECT_EQ(g.value, 1);
}

TEST(Fv, DegreeRange) {
  auto T = build_tetrahedron(true);
  EXPECT_THROW(fv(T, 0, 2), InputError);
  EXPECT_THROW(fv(T, 4, 2), InputError);
  EXPECT_THROW(fv(T, 2, -1), InputError);
  // Top degree: no cells above, so any nonzero cycle is unfillable.
  EXPECT_EQ(fv(T, 3, 5).value, 0);  // ∂₃ is injective
  auto H = build_tetrahedron(false);
  EXPECT_TRUE(fv(H, 2, 3).is_finite());
  EXPECT_TRUE(fv(H, 2, 4).is_infinite());
}

TEST(Fv, TableExamples) {
  EXPECT_EQ(finite_values(fv_table(build_tetrahedron(true), 2, 4)), (std::vector<Coeff>{0, 0, 0, 0, 1}));
  EXPECT_EQ(finite_values(fv_table(build_path(4), 1, 5)), (std::vector<Coeff>(6, 0)));

  // A 3-circuit with no 2-cells.
  auto C = build_cycle(3);
  auto t = fv_table(C, 1, 5);
  ASSERT_EQ(t.rows.size(), 6u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_TRUE(t.rows[k].is_finite());
    EXPECT_EQ(t.rows[k].value, 0);
  }
  for (int k = 3; k <= 5; ++k) {
    ASSERT_TRUE(t.rows[k].is_infinite());
    EXPECT_EQ(l1_norm(t.rows[k].cycle), 3);
  }
}

TEST(Fv, BudgetExceededRows) {
  auto G = build_grid(2, 2);
  auto t = fv_table(G, 1, 8, 3);
  EXPECT_TRUE(t.rows[6].is_finite());  // largest fill at norm 6 is 2
  EXPECT_EQ(t.rows[8].kind, FvValue::Kind::kBudgetExceeded);
  EXPECT_EQ(t.rows[8].budget, 3);
}

TEST(Fv0, Examples) {
  EXPECT_EQ(fv0(point(), 5).value, 0);
  auto inf = fv0(two_points(), 2);
  ASSERT_TRUE(inf.is_infinite());
  auto v = inf.cycle.basis();
  EXPECT_EQ(inf.cycle, Chain(v, {{v->at("v1"), 1}, {v->at("v0"), -1}}));
  for (std::size_t n = 1; n <= 5; ++n) {
    auto P = build_path(n);
    auto r = fv0(P, 2);
    ASSERT_TRUE(r.is_finite());
    EXPECT_EQ(r.value, static_cast<Coeff>(n));
    auto brute = oracle::brute_fv(oracle::dense(augmentation_map(P.basis(0))), oracle::dense(P.boundary(1)), 2, 6);
    EXPECT_FALSE(brute.unresolved);
    EXPECT_EQ(brute.value, static_cast<Coeff>(n));
  }
}

TEST(FvBound, Examples) {
  auto G = build_grid(3, 3);
  auto zero = fv_upper_bound(G.boundary(1), G.boundary(2), 0);
  ASSERT_TRUE(zero.is_finite());
  EXPECT_EQ(*zero.bound, 0);

  auto b = fv_upper_bound(G.boundary(1), G.boundary(2), 4);
  ASSERT_TRUE(b.is_finite());
  EXPECT_EQ(*b.b_n, 1);
  EXPECT_EQ(*b.bound, 4);
  EXPECT_EQ(b.connected_kernel_elements, 18u);
  EXPECT_LE(fv(G, 1, 4).value, *b.bound);

  auto tree = build_path(4);
  for (std::size_t n : {1u, 3u, 5u}) EXPECT_EQ(*fv_upper_bound(tree.boundary(1), tree.filling_map(1), n).bound, 0);

  EXPECT_THROW(fv_upper_bound(G.boundary(1), G.boundary(1), 2), InputError);
}

TEST(FvBound, ReportsUnfillable) {
  auto X = build_torus_grid(2);
  auto b = fv_upper_bound(X.boundary(1), X.boundary(2), 2);
  EXPECT_FALSE(b.is_finite());
  ASSERT_TRUE(b.unfillable);
  EXPECT_TRUE(X.boundary(1).apply(*b.unfillable).is_zero());
}

TEST(CycleDiameter, Examples) {
  auto G = build_grid(1, 1);
  auto s = Chain::unit(G.basis(2), BasisId(0));
  EXPECT_EQ(cycle_diameter(G, 2, s), 2u);
  EXPECT_EQ(cycle_diameter(G, 1, Chain::unit(G.basis(1), BasisId(0))), 1u);
  EXPECT_EQ(cycle_diameter(G, 1, G.boundary(2).apply(s)), 2u);
  EXPECT_THROW(cycle_diameter(G, 1, Chain(G.basis(1))), InputError);

  auto two = two_points();
  auto v = two.basis(0);
  EXPECT_FALSE(cycle_diameter(two, 0, Chain(v, {{BasisId(0), 1}, {BasisId(1), -1}})));
}

TEST(CycleDiameter, MatchesFloydWarshall) {
  for (auto X : {build_grid(3, 2), build_torus_grid(3), build_coned_off({GroupKind::kFree2, 2})}) {
    auto d1 = oracle::dense(X.boundary(1));
    std::mt19937 rng(3);
    for (std::size_t d = 0; d <= X.top_degree(); ++d)
      for (int i = 0; i < 60; ++i) {
        Chain s = oracle::random_chain(rng, X.basis(d), 4, 2);
        if (s.is_zero()) continue;
        std::vector<std::size_t> verts;
        for (auto id : incident_vertices(X, d, s)) verts.push_back(id.index);
        EXPECT_EQ(cycle_diameter(X, d, s), oracle::diameter(d1, verts));
      }
  }
}

// Property suite over the standing test complexes.

struct Case {
  ChainComplex X;
  std::size_t d;
};

std::vector<Case> property_cases() {
  return {{build_tetrahedron(true), 1}, {build_tetrahedron(true), 2}, {build_grid(3, 3), 1},
          {build_grid(2, 2), 1},        {build_torus_grid(2), 1},      {build_coned_off({GroupKind::kFree2, 2}), 1}};
}

TEST(FvProperties, Monotone) {
  for (auto& [X, d] : property_cases()) {
    auto t = fv_table(X, d, 6);
    for (std::size_t k = 1; k < t.rows.size(); ++k) EXPECT_TRUE(precedes_or_equal(t.rows[k - 1], t.rows[k])) << X.name();
    bool seen_inf = false;
    for (const auto& r : t.rows) {
      if (seen_inf) {
        EXPECT_TRUE(r.is_infinite());
      }
      seen_inf = seen_inf || r.is_infinite();
    }
  }
}

TEST(FvProperties, BoundIsSound) {
  for (auto& [X, d] : property_cases()) {
    auto t = fv_table(X, d, 6);
    for (std::size_t n = 0; n <= 6; ++n) {
      auto b = fv_upper_bound(X.boundary(d), X.filling_map(d), n);
      if (!b.is_finite() || !t.rows[n].is_finite()) continue;
      EXPECT_LE(t.rows[n].value, *b.bound) << X.name() << " n=" << n;
    }
  }
}

TEST(FvProperties, DecompositionConsistent) {
  for (auto& [X, d] : property_cases()) {
    FillingSolver solver(X.filling_map(d));
    for (const auto& z : enumerate_cycles(X.boundary(d), 6)) {
      auto whole = solver.solve(z);
      if (!whole.is_finite()) continue;
      Coeff sum = 0;
      bool finite = true;
      for (const auto& part : decompose(X.boundary(d), z)) {
        auto r = solver.solve(part);
        finite = finite && r.is_finite();
        if (r.is_finite()) sum += r.value;
      }
      // A finite whole can split into unfillable parts only with nontrivial homology.
      if (finite) {
        EXPECT_LE(whole.value, sum);
      }
    }
  }
}

TEST(FvProperties, ConnectedCyclesHaveBoundedDiameter) {
  for (auto& [X, d] : property_cases()) {
    auto C = max_cell_diameter(X, d);
    ASSERT_TRUE(C);
    for (const auto& z : enumerate_cycles(X.boundary(d), 6)) {
      if (z.is_zero() || !is_rho_connected(X.boundary(d), z)) continue;
      auto diam = cycle_diameter(X, d, z);
      ASSERT_TRUE(diam);
      EXPECT_LE(*diam, *C * static_cast<std::size_t>(l1_norm(z)));
    }
  }
}

TEST(FvProperties, ExactAgainstDoubleBruteForce) {
  std::vector<Case> small{{build_tetrahedron(true), 1}, {build_tetrahedron(true), 2}, {build_grid(2, 2), 1},
                          {build_torus_grid(2), 1},     {build_cycle(4), 1},           {build_tetrahedron(false), 2}};
  for (auto& [X, d] : small) {
    ASSERT_LE(X.basis(d)->size(), 12u);
    auto cyc = oracle::dense(X.boundary(d));
    auto fill = oracle::dense(X.filling_map(d));
    auto t = fv_table(X, d, 4);
    for (Coeff k = 0; k <= 4; ++k) {
      auto brute = oracle::brute_fv(cyc, fill, k, 8);
      const auto& row = t.rows[k];
      if (row.is_infinite()) {
        EXPECT_TRUE(brute.unresolved) << X.name() << " k=" << k;
      } else {
        ASSERT_TRUE(row.is_finite());
        EXPECT_FALSE(brute.unresolved) << X.name() << " k=" << k;
        EXPECT_EQ(row.value, brute.value) << X.name() << " k=" << k;
      }
    }
  }
}
