#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "subsig/scalar.hpp"

namespace subsig {

// Dense square-ish matrix over a scalar ring. Sizes here are tiny (the
// largest consumers are n x n curvature blocks), so everything is O(n^3)
// without ceremony.
template <class S>
class Matrix {
 public:
  Matrix() : r_(0), c_(0) {}
  Matrix(int rows, int cols) : r_(rows), c_(cols), d_(size_t(rows) * cols, scalar_ring<S>::zero()) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_ring<S>::one();
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  S& operator()(int i, int j) { return d_[size_t(i) * c_ + j]; }
  const S& operator()(int i, int j) const { return d_[size_t(i) * c_ + j]; }

  Matrix operator-() const {
    Matrix m = *this;
    for (S& v : m.d_) v = -v;
    return m;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix m = a;
    for (size_t i = 0; i < m.d_.size(); ++i) m.d_[i] += b.d_[i];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-b); }
  friend Matrix operator*(const Matrix& a, const S& s) {
    Matrix m = a;
    for (S& v : m.d_) v = v * s;
    return m;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("Matrix: shape mismatch");
    Matrix m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int l = 0; l < a.c_; ++l) {
        const S& x = a(i, l);
        if (scalar_ring<S>::is_zero(x)) continue;
        for (int j = 0; j < b.c_; ++j) m(i, j) += x * b(l, j);
      }
    return m;
  }

  Matrix transpose() const {
    Matrix m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  double max_abs() const {
    double v = 0.0;
    for (const S& x : d_) v = std::max(v, scalar_ring<S>::mag(x));
    return v;
  }

 private:
  int r_, c_;
  std::vector<S> d_;
};

// Determinant by Gaussian elimination over a field; pivots chosen by the
// magnitude of the invertible part, which keeps rational mode exact and the
// nilpotent mode well-posed (a pivot needs a nonzero constant term).
template <class S>
S det(Matrix<S> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: square matrices only");
  int n = m.rows();
  S result = scalar_ring<S>::one();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int r = col; r < n; ++r) {
      double v = scalar_ring<S>::pivot_mag(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) return scalar_ring<S>::zero();
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      result = -result;
    }
    result = result * m(col, col);
    S inv = scalar_ring<S>::one() / m(col, col);
    for (int r = col + 1; r < n; ++r) {
      S f = m(r, col) * inv;
      if (scalar_ring<S>::is_zero(f)) continue;
      for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return result;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  int n = a.rows();
  Matrix<S> m = a, inv = Matrix<S>::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int r = col; r < n; ++r) {
      double v = scalar_ring<S>::pivot_mag(m(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) throw std::domain_error("inverse: singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(m(piv, j), m(col, j));
      std::swap(inv(piv, j), inv(col, j));
    }
    S d = scalar_ring<S>::one() / m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) = m(col, j) * d;
      inv(col, j) = inv(col, j) * d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = m(r, col);
      if (scalar_ring<S>::is_zero(f)) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// Matrix exponential by scaling and squaring on the Taylor series; fine at
// these sizes and norms.
template <class S>
Matrix<S> matexp(const Matrix<S>& a, double tol = 1e-16, int max_terms = 60) {
  int n = a.rows();
  double norm = a.max_abs() * n;
  int squarings = 0;
  while (norm > 0.5 && squarings < 60) {
    norm /= 2;
    ++squarings;
  }
  Matrix<S> x = a * scalar_ring<S>::from_double(std::ldexp(1.0, -squarings));
  Matrix<S> acc = Matrix<S>::identity(n);
  Matrix<S> term = Matrix<S>::identity(n);
  for (int m = 1; m <= max_terms; ++m) {
    term = term * x;
    term = term * scalar_ring<S>::from_double(1.0 / m);
    acc = acc + term;
    if (term.max_abs() < tol) break;
  }
  for (int j = 0; j < squarings; ++j) acc = acc * acc;
  return acc;
}

template <class S>
S trace(const Matrix<S>& a) {
  S t = scalar_ring<S>::zero();
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

template <class Sout, class Sin>
Matrix<Sout> mat_cast(const Matrix<Sin>& a) {
  Matrix<Sout> m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if constexpr (std::is_same_v<Sin, double>)
        m(i, j) = scalar_ring<Sout>::from_double(a(i, j));
      else
        m(i, j) = a(i, j);
    }
  return m;
}

using DMat = Matrix<double>;

inline bool is_antisymmetric(const DMat& m, double tol = 0.0) {
  if (m.rows() != m.cols()) return false;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j) + m(j, i)) > tol) return false;
  return true;
}

// Antisymmetric matrix assembled from 2x2 blocks [[0, -theta], [theta, 0]],
// optionally followed by a trailing zero row/column.
inline DMat block_antisymmetric(const std::vector<double>& angles, bool zero_row = false) {
  int m = 2 * int(angles.size()) + (zero_row ? 1 : 0);
  DMat a(m, m);
  for (size_t j = 0; j < angles.size(); ++j) {
    a(2 * j, 2 * j + 1) = -angles[j];
    a(2 * j + 1, 2 * j) = angles[j];
  }
  return a;
}

// Same 2x2 layout over an arbitrary ring (used for form-valued test data).
template <class S>
Matrix<S> block_antisymmetric_s(const std::vector<S>& angles, bool zero_row = false) {
  int m = 2 * int(angles.size()) + (zero_row ? 1 : 0);
  Matrix<S> a(m, m);
  for (size_t j = 0; j < angles.size(); ++j) {
    a(2 * j, 2 * j + 1) = -angles[j];
    a(2 * j + 1, 2 * j) = angles[j];
  }
  return a;
}

// Isometry fixing the first `fixed` coordinates and rotating each following
// 2-plane, with an optional trailing reflected coordinate. Orientation is
// pinned so that the rotation lift acts on 1-forms exactly as this matrix:
// column p maps to cos*e_p + sin*e_{p+1}.
inline DMat block_rotation_matrix(const std::vector<double>& angles, int fixed = 0,
                                  bool reflect_last = false) {
  int m = fixed + 2 * int(angles.size()) + (reflect_last ? 1 : 0);
  DMat g(m, m);
  for (int i = 0; i < fixed; ++i) g(i, i) = 1.0;
  for (size_t j = 0; j < angles.size(); ++j) {
    int p = fixed + 2 * int(j);
    double cth = std::cos(angles[j]), sth = std::sin(angles[j]);
    g(p, p) = cth;
    g(p, p + 1) = -sth;
    g(p + 1, p) = sth;
    g(p + 1, p + 1) = cth;
  }
  if (reflect_last) g(m - 1, m - 1) = -1.0;
  return g;
}

}  // namespace subsig
