#include <random>

#include <gtest/gtest.h>

#include "homfill/builders.hpp"
#include "homfill/smith.hpp"

using namespace homfill;

namespace {

// Fraction-free Gaussian elimination.
BigInt determinant(Matrix<BigInt> a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      a.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Matrix<BigInt> random_matrix(std::mt19937& rng, std::size_t m, std::size_t n, int range, double density) {
  std::uniform_int_distribution<int> v(-range, range);
  std::bernoulli_distribution keep(density);
  Matrix<BigInt> a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (keep(rng)) a(i, j) = v(rng);
  return a;
}

void expect_valid_snf(const Matrix<BigInt>& A, const SmithDecomposition<BigInt>& s) {
  EXPECT_EQ(s.U * A * s.V, s.D);
  EXPECT_EQ(abs(determinant(s.U)), 1);
  EXPECT_EQ(abs(determinant(s.V)), 1);
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) { EXPECT_EQ(s.D(i, j), 0); }
  for (std::size_t i = 0; i < s.rank; ++i) {
    EXPECT_GT(s.D(i, i), 0);
    if (i + 1 < s.rank) { EXPECT_EQ(s.D(i + 1, i + 1) % s.D(i, i), 0); }
  }
  for (std::size_t i = s.rank; i < std::min(s.D.rows(), s.D.cols()); ++i) EXPECT_EQ(s.D(i, i), 0);
}

}  // namespace

TEST(Smith, OneByOne) {
  Matrix<BigInt> a(1, 1);
  a(0, 0) = 2;
  auto s = smith_normal_form(a);
  EXPECT_EQ(s.D(0, 0), 2);
  EXPECT_EQ(s.rank, 1u);
}

TEST(Smith, NegativeEntryGivesPositiveDivisor) {
  Matrix<BigInt> a(1, 1);
  a(0, 0) = -6;
  auto s = smith_normal_form(a);
  EXPECT_EQ(s.D(0, 0), 6);
  expect_valid_snf(a, s);
}

TEST(Smith, Identity) {
  auto a = Matrix<BigInt>::identity(4);
  auto s = smith_normal_form(a);
  EXPECT_EQ(s.D, a);
  EXPECT_EQ(s.rank, 4u);
}

TEST(Smith, ZeroMap) {
  Matrix<BigInt> a(3, 2);
  auto s = smith_normal_form(a);
  EXPECT_EQ(s.D, a);
  EXPECT_EQ(s.rank, 0u);
}

TEST(Smith, DivisibilityNeedsCombination) {
  // diag(2, 3) has Smith form diag(1, 6).
  Matrix<BigInt> a(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 3;
  auto s = smith_normal_form(a);
  EXPECT_EQ(s.D(0, 0), 1);
  EXPECT_EQ(s.D(1, 1), 6);
  expect_valid_snf(a, s);
}

TEST(Smith, RandomMatrices) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    auto a = random_matrix(rng, dim(rng), dim(rng), 5, 0.6);
    expect_valid_snf(a, smith_normal_form(a));
  }
}

TEST(Smith, TorusHasExpectedDivisors) {
  // ∂₂ of the 2-torus has rank n² − 1 with all divisors 1.
  auto X = build_torus_grid(3);
  auto s = smith_normal_form<BigInt>(X.boundary(2));
  EXPECT_EQ(s.rank, 8u);
  for (std::size_t i = 0; i < s.rank; ++i) EXPECT_EQ(s.D(i, i), 1);
}

TEST(Smith, WorksOverMachineIntegers) {
  std::mt19937 rng(5);
  auto a = random_matrix(rng, 4, 5, 3, 0.7);
  Matrix<Coeff> b(4, 5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) b(i, j) = static_cast<Coeff>(a(i, j));
  auto s = smith_normal_form(b);
  EXPECT_EQ(s.U * b * s.V, s.D);
}

TEST(ColumnEchelon, KernelBasisProperties) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    auto a = random_matrix(rng, dim(rng), dim(rng), 4, 0.5);
    auto s = smith_normal_form(a);
    auto k = kernel_from_smith(s);
    const std::size_t n = a.cols();
    ASSERT_EQ(k.K.rows(), n);
    ASSERT_EQ(k.K.cols(), n - s.rank);
    for (std::size_t j = 0; j < k.K.cols(); ++j) {
      // In the kernel.
      for (std::size_t i = 0; i < a.rows(); ++i) {
        BigInt acc = 0;
        for (std::size_t r = 0; r < n; ++r) acc += a(i, r) * k.K(r, j);
        EXPECT_EQ(acc, 0);
      }
      // Echelon shape.
      EXPECT_GT(k.K(k.pivots[j], j), 0);
      for (std::size_t r = 0; r < k.pivots[j]; ++r) EXPECT_EQ(k.K(r, j), 0);
      if (j > 0) { EXPECT_LT(k.pivots[j - 1], k.pivots[j]); }
    }
  }
}

TEST(ColumnEchelon, RejectsRankDeficient) {
  Matrix<BigInt> k(2, 2);
  k(0, 0) = 1;
  k(0, 1) = 2;
  k(1, 0) = 2;
  k(1, 1) = 4;
  EXPECT_THROW(column_echelon(k), InternalError);
}

TEST(ToCoeff, NarrowsOrThrows) {
  EXPECT_EQ(to_coeff(BigInt(-42)), -42);
  BigInt huge = BigInt(std::numeric_limits<Coeff>::max()) + 1;
  EXPECT_THROW(to_coeff(huge), std::overflow_error);
}
