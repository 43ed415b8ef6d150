#include <set>

#include <gtest/gtest.h>

#include "homfill/builders.hpp"
#include "homfill/filling.hpp"
#include "oracles.hpp"

using namespace homfill;

namespace {

std::vector<std::size_t> sizes(const ChainComplex& X) {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d <= X.top_degree(); ++d) out.push_back(X.basis(d)->size());
  return out;
}

bool has_cell(const ChainComplex& X, std::size_t d, const std::string& label) {
  return d <= X.top_degree() && X.basis(d)->find(label).has_value();
}

// Circuits through e counted as ±1 edge cycles with ⟨z,e⟩ = +1 whose support
// is one simple closed curve.
std::vector<std::size_t> brute_circuit_counts(const ChainComplex& X, std::size_t n) {
  auto d1 = oracle::dense(X.boundary(1));
  std::vector<std::size_t> counts(d1.cols, 0);
  oracle::for_each_support(d1.cols, static_cast<Coeff>(n), [&](const oracle::Support& z) {
    for (auto [i, c] : z)
      if (c != 1 && c != -1) return;
    if (!oracle::in_kernel(d1, z)) return;
    std::vector<int> deg(d1.rows, 0);
    for (auto [i, c] : z)
      for (std::size_t t = 0; t < d1.rows; ++t)
        if (d1.at(t, i) != 0) ++deg[t];
    for (int k : deg)
      if (k != 0 && k != 2) return;
    // Connected: walk from the first edge.
    std::vector<char> used(z.size(), 0);
    std::vector<std::size_t> stack{0};
    used[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      auto a = z[stack.back()].first;
      stack.pop_back();
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (used[j]) continue;
        bool share = false;
        for (std::size_t t = 0; t < d1.rows; ++t) share = share || (d1.at(t, a) != 0 && d1.at(t, z[j].first) != 0);
        if (share) {
          used[j] = 1;
          ++reached;
          stack.push_back(j);
        }
      }
    }
    if (reached != z.size()) return;
    for (auto [i, c] : z)
      if (c == 1) ++counts[i];
  });
  return counts;
}

}  // namespace

TEST(Builders, Sizes) {
  EXPECT_EQ(sizes(build_tetrahedron(true)), (std::vector<std::size_t>{4, 6, 4, 1}));
  EXPECT_EQ(sizes(build_tetrahedron(false)), (std::vector<std::size_t>{4, 6, 4}));
  EXPECT_EQ(sizes(build_grid(1, 1)), (std::vector<std::size_t>{4, 4, 1}));
  EXPECT_EQ(sizes(build_grid(2, 2)), (std::vector<std::size_t>{9, 12, 4}));
  EXPECT_EQ(sizes(build_grid(3, 1)), (std::vector<std::size_t>{8, 10, 3}));
  EXPECT_EQ(sizes(build_torus_grid(2)), (std::vector<std::size_t>{4, 8, 4}));
  EXPECT_EQ(sizes(build_torus_grid(3)), (std::vector<std::size_t>{9, 18, 9}));
  EXPECT_EQ(sizes(build_path(3)), (std::vector<std::size_t>{4, 3}));
  EXPECT_EQ(sizes(build_cycle(5)), (std::vector<std::size_t>{5, 5}));
}

TEST(Builders, AllValidate) {
  std::vector<ChainComplex> all{build_tetrahedron(true), build_tetrahedron(false), build_grid(1, 1), build_grid(3, 2),
                                build_torus_grid(2),     build_torus_grid(4),      build_path(1),     build_cycle(2)};
  for (std::size_t r = 1; r <= 4; ++r) {
    all.push_back(build_coned_off({GroupKind::kFree2, r}));
    all.push_back(build_coned_off({GroupKind::kFreeAbelian2, r}));
  }
  for (const auto& X : all) {
    auto rep = validate_complex(X);
    EXPECT_TRUE(rep) << X.name() << ": " << rep.cell;
  }
}

TEST(Builders, TetrahedronOrientation) {
  auto T = build_tetrahedron(true);
  auto f = T.basis(2);
  Chain sphere = T.boundary(3).column(BasisId(0));
  EXPECT_EQ(l1_norm(sphere), 4);
  EXPECT_TRUE(T.boundary(2).apply(sphere).is_zero());
  auto H = build_tetrahedron(false);
  Chain same = Chain::from_dense(H.basis(2), sphere.to_dense());
  EXPECT_TRUE(H.boundary(2).apply(same).is_zero());
  EXPECT_TRUE(filling_norm(H.filling_map(2), same).is_infeasible());
}

TEST(Builders, GridAndTorusFacts) {
  auto G = build_grid(1, 1);
  auto sq = G.boundary(2).column(BasisId(0));
  EXPECT_EQ(filling_norm(G.boundary(2), sq).value, 1);
  EXPECT_EQ(filling_norm_oracle(G.boundary(2), sq, 3).value, 1);

  auto X = build_torus_grid(3);
  std::vector<Coeff> ones(X.basis(2)->size(), 1);
  EXPECT_TRUE(X.boundary(2).apply(Chain::from_dense(X.basis(2), ones)).is_zero());
  auto e = X.basis(1);
  Chain meridian(e, {{e->at("h0_0"), 1}, {e->at("h1_0"), 1}, {e->at("h2_0"), 1}});
  ASSERT_TRUE(X.boundary(1).apply(meridian).is_zero());
  EXPECT_TRUE(filling_norm(X.boundary(2), meridian).is_infeasible());
  EXPECT_THROW(build_torus_grid(1), InputError);
}

TEST(ConedOff, FreeRadiusOne) {
  auto X = build_coned_off({GroupKind::kFree2, 1});
  EXPECT_EQ(X.name(), "coned_f2_1");
  std::set<std::string> verts;
  for (const auto& l : X.basis(0)->labels()) verts.insert(l);
  EXPECT_EQ(verts, (std::set<std::string>{"1", "a", "A", "b", "B", "P", "aP", "AP"}));
  // Cone triangles (1, b, P) and (b⁻¹, 1, P).
  EXPECT_EQ(X.basis(2)->labels(), (std::vector<std::string>{"tri[1]", "tri[B]"}));
  auto tri = X.boundary(2).column(X.basis(2)->at("tri[1]"));
  auto e = X.basis(1);
  EXPECT_EQ(tri, Chain(e, {{e->at("e[1.b]"), 1}, {e->at("c[b]"), 1}, {e->at("c[1]"), -1}}));
  EXPECT_THROW(build_coned_off({GroupKind::kFree2, 0}), InputError);
}

TEST(ConedOff, AbelianRadiusTwo) {
  auto X = build_coned_off({GroupKind::kFreeAbelian2, 2});
  EXPECT_TRUE(has_cell(X, 2, "sq[1]"));
  for (const char* t : {"tri[BB]", "tri[B]", "tri[1]", "tri[b]"}) EXPECT_TRUE(has_cell(X, 2, t)) << t;
  EXPECT_FALSE(has_cell(X, 2, "tri[bb]"));
  EXPECT_TRUE(has_cell(X, 0, "P"));
  EXPECT_TRUE(has_cell(X, 0, "aaP"));
  EXPECT_EQ(X.basis(0)->size(), 13u + 5u);
}

TEST(ConedOff, MonotoneInRadius) {
  for (auto kind : {GroupKind::kFree2, GroupKind::kFreeAbelian2})
    for (std::size_t r = 1; r <= 3; ++r) {
      auto small = build_coned_off({kind, r});
      auto big = build_coned_off({kind, r + 1});
      EXPECT_TRUE(is_labelled_subcomplex(small, big)) << small.name();
      EXPECT_FALSE(is_labelled_subcomplex(big, small));
    }
}

TEST(Circuits, CycleGraph) {
  auto C = build_cycle(6);
  for (std::uint32_t e = 0; e < 6; ++e) {
    auto six = circuits_through_edge(C, BasisId(e), 6);
    ASSERT_EQ(six.size(), 1u);
    EXPECT_EQ(six[0].length(), 6u);
    EXPECT_EQ(count_circuits_through_edge(C, BasisId(e), 5), 0u);
  }
}

TEST(Circuits, AreSimpleClosedCurves) {
  auto X = build_coned_off({GroupKind::kFreeAbelian2, 3});
  for (std::uint32_t e = 0; e < X.basis(1)->size(); e += 3)
    for (const auto& c : circuits_through_edge(X, BasisId(e), 6)) {
      Chain z = circuit_chain(X, c);
      EXPECT_TRUE(X.boundary(1).apply(z).is_zero());
      EXPECT_EQ(l1_norm(z), static_cast<Coeff>(c.length()));
      EXPECT_EQ(coeff(z, BasisId(e)), 1);
      std::set<BasisId> distinct(c.vertices.begin(), c.vertices.end());
      EXPECT_EQ(distinct.size(), c.length());
    }
}

TEST(Circuits, MatchBruteForce) {
  for (auto X : {build_grid(2, 2), build_torus_grid(2), build_tetrahedron(true), build_coned_off({GroupKind::kFree2, 1})})
    for (std::size_t n : {2u, 4u, 6u}) {
      auto brute = brute_circuit_counts(X, n);
      for (std::uint32_t e = 0; e < X.basis(1)->size(); ++e)
        EXPECT_EQ(count_circuits_through_edge(X, BasisId(e), n), brute[e]) << X.name() << " n=" << n << " e=" << e;
    }
}

TEST(Circuits, ZeroBoundaryEdgeRejected) {
  ComplexBuilder b("loop");
  b.add_cell(0, "v");
  b.add_cell(1, "e");
  auto X = b.build();
  EXPECT_THROW(circuits_through_edge(X, BasisId(0), 3), InputError);
}

TEST(Fineness, TreeHasNoCircuits) {
  for (auto [lbl, count] : fineness_report(build_path(5), 6)) EXPECT_EQ(count, 0u) << lbl;
}

TEST(Fineness, AbelianConeEdgeGrows) {
  std::vector<std::size_t> counts;
  for (std::size_t r = 2; r <= 5; ++r) {
    auto X = build_coned_off({GroupKind::kFreeAbelian2, r});
    counts.push_back(count_circuits_through_edge(X, X.basis(1)->at("c[b]"), 6));
  }
  for (std::size_t i = 1; i < counts.size(); ++i) EXPECT_GT(counts[i], counts[i - 1]);
}

TEST(Fineness, FreeCountsStabilize) {
  // A length-n circuit through an edge of the radius-R core reaches word
  // length at most R + n − 2 (the walk P, g, gb, …, gbⁿ⁻², P).
  const std::size_t core_radius = 1;
  auto core = build_coned_off({GroupKind::kFree2, core_radius});
  auto edges = edge_labels(core);
  for (std::size_t n = 3; n <= 6; ++n) {
    auto lo = fineness_report(build_coned_off({GroupKind::kFree2, core_radius + n - 2}), n, edges);
    auto hi = fineness_report(build_coned_off({GroupKind::kFree2, core_radius + n - 1}), n, edges);
    EXPECT_EQ(lo, hi) << "n=" << n;
  }
  // One radius short, the b-power circuit through c[1] is still missing.
  auto short_by_one = build_coned_off({GroupKind::kFree2, 3});
  auto enough = build_coned_off({GroupKind::kFree2, 4});
  EXPECT_LT(count_circuits_through_edge(short_by_one, short_by_one.basis(1)->at("c[1]"), 6),
            count_circuits_through_edge(enough, enough.basis(1)->at("c[1]"), 6));
}

TEST(Hexagon, FillingNormsIncrease) {
  auto X = build_coned_off({GroupKind::kFreeAbelian2, 6});
  FillingSolver solver(X.boundary(2));
  Coeff prev = 0;
  for (std::size_t m = 2; m <= 4; ++m) {
    Chain g = z2_hexagon(X, m);
    EXPECT_EQ(l1_norm(g), 6);
    ASSERT_TRUE(X.boundary(1).apply(g).is_zero());
    auto r = solver.solve(g);
    ASSERT_TRUE(r.is_finite()) << "m=" << m;
    EXPECT_EQ(X.boundary(2).apply(r.witness), g);
    EXPECT_GT(r.value, prev) << "m=" << m;
    prev = r.value;
  }
  EXPECT_THROW(z2_hexagon(X, 1), InputError);
}
