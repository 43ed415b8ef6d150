#pragma once

// Smith normal form over ℤ with unimodular transforms, and integer kernel
// bases in column echelon form.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "homfill/chain.hpp"

namespace homfill {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k·row[src]
  void add_row(std::size_t dst, std::size_t src, const T& k) {
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(src, j) != 0) (*this)(dst, j) += k * (*this)(src, j);
  }
  /// col[dst] += k·col[src]
  void add_col(std::size_t dst, std::size_t src, const T& k) {
    for (std::size_t i = 0; i < rows_; ++i)
      if ((*this)(i, src) != 0) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) out(i, j) += x * b(k, j);
      }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Target-by-source matrix of a module map.
template <class T = BigInt>
Matrix<T> to_matrix(const ModuleMap& rho) {
  Matrix<T> m(rho.target()->size(), rho.source()->size());
  for (std::uint32_t s = 0; s < rho.source()->size(); ++s)
    for (auto [t, c] : rho.column(BasisId(s)).entries()) m(t.index, s) = T(c);
  return m;
}

/// U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | … ≥ 0.
template <class T = BigInt>
struct SmithDecomposition {
  Matrix<T> U;
  Matrix<T> D;
  Matrix<T> V;
  std::size_t rank = 0;

  const T& divisor(std::size_t i) const { return D(i, i); }
};

namespace detail {

template <class T>
T trunc_div(const T& a, const T& b) {
  return a / b;  // truncates toward zero for both int64 and cpp_int
}

template <class T>
T abs_value(const T& a) {
  return a < 0 ? T(-a) : a;
}

}  // namespace detail

/// Smallest-magnitude pivoting with row and column swaps.
template <class T = BigInt>
SmithDecomposition<T> smith_normal_form(const Matrix<T>& A) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  SmithDecomposition<T> out{Matrix<T>::identity(m), A, Matrix<T>::identity(n), 0};
  auto& D = out.D;
  auto& U = out.U;
  auto& V = out.V;

  auto smallest = [&](std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> pivot;
    T best = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (D(i, j) == 0) continue;
        T a = detail::abs_value(D(i, j));
        if (!pivot || a < best) {
          best = a;
          pivot = {i, j};
          if (best == 1) return pivot;
        }
      }
    return pivot;
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    auto found = smallest(t);
    if (!found) break;
    auto [pi, pj] = *found;
    for (;;) {
      D.swap_rows(t, pi);
      U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        T q = detail::trunc_div(D(i, t), D(t, t));
        D.add_row(i, t, T(-q));
        U.add_row(i, t, T(-q));
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        T q = detail::trunc_div(D(t, j), D(t, t));
        D.add_col(j, t, T(-q));
        V.add_col(j, t, T(-q));
        if (D(t, j) != 0) clean = false;
      }
      if (clean) {
        // Divisibility: pull an offending row into row t and reduce again.
        std::optional<std::size_t> offender;
        for (std::size_t i = t + 1; i < m && !offender; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (D(i, j) != 0 && D(i, j) % D(t, t) != 0) {
              offender = i;
              break;
            }
        if (!offender) break;
        D.add_row(t, *offender, T(1));
        U.add_row(t, *offender, T(1));
      }
      // D(t, t) is still nonzero, so a pivot exists.
      std::tie(pi, pj) = smallest(t).value();
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
  }
  out.rank = t;
  return out;
}

template <class T = BigInt>
SmithDecomposition<T> smith_normal_form(const ModuleMap& rho) {
  return smith_normal_form(to_matrix<T>(rho));
}

/// Column echelon form of a full-column-rank integer matrix: column j has its
/// first nonzero (positive) entry at row pivots[j], strictly increasing, and
/// entries to the left of a pivot are reduced modulo it.
template <class T>
struct EchelonBasis {
  Matrix<T> K;
  std::vector<std::size_t> pivots;
};

template <class T>
EchelonBasis<T> column_echelon(Matrix<T> K) {
  const std::size_t n = K.rows();
  const std::size_t r = K.cols();
  std::vector<std::size_t> pivots;
  std::size_t p = 0;
  for (std::size_t i = 0; i < n && p < r; ++i) {
    // gcd-combine columns p..r-1 on row i into column p.
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t j = p; j < r; ++j)
        if (K(i, j) != 0 && (!best || detail::abs_value(K(i, j)) < detail::abs_value(K(i, *best)))) best = j;
      if (!best) break;
      K.swap_cols(p, *best);
      bool done = true;
      for (std::size_t j = p + 1; j < r; ++j) {
        if (K(i, j) == 0) continue;
        T q = detail::trunc_div(K(i, j), K(i, p));
        K.add_col(j, p, T(-q));
        if (K(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (K(i, p) == 0) continue;
    if (K(i, p) < 0) K.negate_col(p);
    for (std::size_t j = 0; j < p; ++j) {
      T q = K(i, j) / K(i, p);
      if (K(i, j) - q * K(i, p) < 0) q -= 1;  // floor division
      if (q != 0) K.add_col(j, p, T(-q));
    }
    pivots.push_back(i);
    ++p;
  }
  if (p != r) throw InternalError("kernel basis is not of full column rank");
  return {std::move(K), std::move(pivots)};
}

/// Converts a big integer to a machine coefficient, throwing on overflow.
inline Coeff to_coeff(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<Coeff>::max()) || v < BigInt(std::numeric_limits<Coeff>::min()))
    throw std::overflow_error("integer does not fit a chain coefficient");
  return static_cast<Coeff>(v);
}

/// ℤ-basis of ker A from a Smith decomposition (columns rank.. of V),
/// brought to column echelon form and narrowed to machine coefficients.
inline EchelonBasis<Coeff> kernel_from_smith(const SmithDecomposition<BigInt>& snf) {
  const std::size_t n = snf.V.rows();
  const std::size_t r = n - snf.rank;
  Matrix<BigInt> raw(n, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r; ++j) raw(i, j) = snf.V(i, snf.rank + j);
  auto echelon = column_echelon(std::move(raw));
  Matrix<Coeff> K(n, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r; ++j) K(i, j) = to_coeff(echelon.K(i, j));
  return {std::move(K), std::move(echelon.pivots)};
}

inline EchelonBasis<Coeff> integer_kernel(const ModuleMap& rho) { return kernel_from_smith(smith_normal_form<BigInt>(rho)); }

}  // namespace homfill
