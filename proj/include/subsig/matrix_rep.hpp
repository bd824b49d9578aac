#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include "subsig/lift.hpp"
#include "subsig/smallmat.hpp"

namespace subsig {

// Brute-force oracle: the faithful action of the blade algebra on the
// exterior algebra of R^n by c = wedge - contraction, chat = wedge +
// contraction. Deliberately the slow trusted path; everything the blade
// engine computes is cross-checked against it.

constexpr int kRepDimCap = 10;

// Basis of Lambda R^n: subset S of {1..n} as a bitmask, position = mask.
struct ExteriorBasis {
  int n;
  explicit ExteriorBasis(int n_) : n(n_) {
    if (n < 0 || n > kRepDimCap)
      throw std::length_error("ExteriorBasis: dimension exceeds the oracle cap");
  }
  int size() const { return 1 << n; }
};

namespace detail {

// Sign of e_i wedging/contracting past the generators below it.
inline int below_sign(Mask u, int i) {
  return (std::popcount(u & ((Mask(1) << i) - 1)) & 1) ? -1 : 1;
}

}  // namespace detail

// Signed basis permutation: the action of a single generator word.
template <class S>
void apply_generator(std::vector<S>& vec, int n, int i0, bool hat) {
  // i0 is 0-based. c: wedge - contraction; chat: wedge + contraction.
  std::vector<S> out(vec.size(), scalar_ring<S>::zero());
  Mask bit = Mask(1) << i0;
  for (Mask u = 0; u < Mask(vec.size()); ++u) {
    if (scalar_ring<S>::is_zero(vec[u])) continue;
    int s = detail::below_sign(u, i0);
    if (!(u & bit)) {
      S v = vec[u];
      if (s < 0) v = -v;
      out[u | bit] += v;  // wedge
    } else {
      S v = vec[u];
      bool negate = hat ? (s < 0) : (s > 0);  // -contraction for c
      if (negate) v = -v;
      out[u & ~bit] += v;
    }
  }
  (void)n;
  vec = std::move(out);
}

template <class S>
Matrix<S> rep(const CliffordElement<S>& x) {
  ExteriorBasis basis(x.dim());
  int dim = basis.size();
  Matrix<S> m(dim, dim);
  for (const auto& [b, coeff] : x.terms()) {
    // Column-by-column action of c-word then chat-word, rightmost first.
    for (int col = 0; col < dim; ++col) {
      std::vector<S> vec(dim, scalar_ring<S>::zero());
      vec[col] = coeff;
      for (int i = x.dim() - 1; i >= 0; --i)
        if (b.h >> i & 1) apply_generator(vec, x.dim(), i, true);
      for (int i = x.dim() - 1; i >= 0; --i)
        if (b.c >> i & 1) apply_generator(vec, x.dim(), i, false);
      for (int row = 0; row < dim; ++row)
        if (!scalar_ring<S>::is_zero(vec[row])) m(row, col) += vec[row];
    }
  }
  return m;
}

// Row-parallel product for the 2^n x 2^n oracle matrices, with the serial
// loop kept as the reference implementation.
template <class S>
Matrix<S> rep_mul_serial(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b;
}

template <class S>
Matrix<S> rep_mul(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("rep_mul: shape mismatch");
  Matrix<S> m(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows(); ++i)
    for (int l = 0; l < a.cols(); ++l) {
      const S& x = a(i, l);
      if (scalar_ring<S>::is_zero(x)) continue;
      for (int j = 0; j < b.cols(); ++j) m(i, j) += x * b(l, j);
    }
  return m;
}

// Supertrace on End(Lambda V): trace against the parity grading (-1)^{|S|}.
template <class S>
S oracle_supertrace(const CliffordElement<S>& x) {
  Matrix<S> m = rep(x);
  S t = scalar_ring<S>::zero();
  for (int u = 0; u < m.rows(); ++u) {
    if (std::popcount(unsigned(u)) & 1)
      t -= m(u, u);
    else
      t += m(u, u);
  }
  return t;
}

template <class S>
S oracle_trace(const CliffordElement<S>& x) {
  Matrix<S> m = rep(x);
  S t = scalar_ring<S>::zero();
  for (int u = 0; u < m.rows(); ++u) t += m(u, u);
  return t;
}

// The grading operator as a diagonal matrix, for tau checks.
template <class S>
Matrix<S> grading_matrix(int n) {
  ExteriorBasis basis(n);
  Matrix<S> m(basis.size(), basis.size());
  for (int u = 0; u < basis.size(); ++u)
    m(u, u) = (std::popcount(unsigned(u)) & 1) ? -scalar_ring<S>::one() : scalar_ring<S>::one();
  return m;
}

// Functorial action of an isometry g on Lambda R^n (the pullback lift of
// g^{-1}): e^{i1} ^ ... ^ e^{ip} maps to (g e_{i1}) ^ ... ^ (g e_{ip}).
inline Matrix<double> exterior_power_matrix(const DMat& g) {
  int n = g.rows();
  ExteriorBasis basis(n);
  int dim = basis.size();
  Matrix<double> m(dim, dim);
  for (int col = 0; col < dim; ++col) {
    // Expand the wedge of the image vectors.
    std::vector<std::pair<Mask, double>> acc = {{0u, 1.0}};
    for (int i = 0; i < n; ++i) {
      if (!(col >> i & 1)) continue;
      std::vector<std::pair<Mask, double>> nxt;
      for (const auto& [mask, w] : acc) {
        for (int j = 0; j < n; ++j) {
          double gji = g(j, i);
          if (gji == 0.0) continue;
          if (mask >> j & 1) continue;
          // wedge on the right: sign counts generators above j already present
          int above = std::popcount(mask & ~((Mask(2) << j) - 1));
          nxt.emplace_back(mask | (Mask(1) << j), w * gji * ((above & 1) ? -1.0 : 1.0));
        }
      }
      acc = std::move(nxt);
    }
    for (const auto& [mask, w] : acc) m(mask, col) += w;
  }
  return m;
}

// Oracle for the rotation lift: the exterior-power action of the block
// rotation fixing the first `a` coordinates.
inline Matrix<double> pullback_lift(const std::vector<double>& angles, int n, int a,
                                    bool reflect_last = false) {
  DMat g = block_rotation_matrix(angles, a, reflect_last);
  if (g.rows() != n) throw std::invalid_argument("pullback_lift: dimension mismatch");
  return exterior_power_matrix(g);
}

template <class S>
Matrix<double> to_double_matrix(const Matrix<S>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      Cplx v = scalar_ring<S>::to_complex(m(i, j));
      r(i, j) = v.real();
    }
  return r;
}

}  // namespace subsig
