#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "subsig/blade.hpp"
#include "subsig/smallmat.hpp"

namespace subsig {

// Characteristic-form kernels on real antisymmetric matrices. Every kernel
// has two independent routes: a closed form through the 2x2-block rotation
// angles (Chern roots) and a truncated exp-trace-log power series; the
// verification suites require the routes to agree.
//
// Conventions, pinned once for the whole project:
//  * block(theta) means [[0, -theta], [theta, 0]];
//  * the Pfaffian sign is the Berezin one: Pf(block(theta)) = +theta;
//  * square roots are principal, continuous from value 1 at zero argument.
//
// Normalization table: every pi factor and internal rescaling lives here,
// nowhere else.
//   det_sqrt_cosh(M)        = det^{1/2} cosh(M/2)
//   det_sqrt_sinhc(M)       = det^{1/2} (sinh(M/2) / (M/2))
//   a_hat(M)                = det^{1/2} ((M/4pi) / sinh(M/4pi))
//   nu_equivariant(g, M)    = det^{-1/2} (1 - g exp(-M/2pi))
//   det_invsqrt_one_minus   = det^{-1/2} (1 - g exp(-M))        (no rescale)
//   x_over_sinh(M, c)       = det^{1/2} (cM / sinh(cM))         (caller's c)
//   pfaffian*(M)            = Pf(M)                             (no rescale)
// The density assembly passes M/2pi - L to the cosh/sinhc kernels and
// (M/2pi - L)/2 to the Pfaffian, which together realize the printed
// cosh(M/4pi - L/2) arguments.

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Chern roots: orthogonal block-diagonalization of a real antisymmetric M.

struct ChernRoots {
  std::vector<double> angles;  // nonnegative, one per 2-plane
  DMat basis;                  // columns: plane pairs (u_j, M u_j / theta_j), then kernel
  int zero_modes = 0;

  DMat reconstruct() const {
    DMat b = block_antisymmetric(angles, false);
    int m = basis.rows();
    DMat full(m, m);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) full(i, j) = b(i, j);
    return basis * full * basis.transpose();
  }
};

namespace detail {

// Cyclic Jacobi eigensolver for symmetric matrices; plenty at these sizes.
inline void jacobi_eigen(DMat a, std::vector<double>& eval, DMat& evec, double tol = 1e-13) {
  int n = a.rows();
  evec = DMat::identity(n);
  double scale = std::max(a.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < tol * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
        double c = std::cos(theta), s = std::sin(theta);
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          double vip = evec(i, p), viq = evec(i, q);
          evec(i, p) = c * vip - s * viq;
          evec(i, q) = s * vip + c * viq;
        }
      }
  }
  eval.resize(n);
  for (int i = 0; i < n; ++i) eval[i] = a(i, i);
}

}  // namespace detail

inline ChernRoots chern_roots(const DMat& m, double tol = 1e-12) {
  int n = m.rows();
  if (!is_antisymmetric(m, 1e-12 * std::max(1.0, m.max_abs())))
    throw std::invalid_argument("chern_roots: matrix is not antisymmetric");
  DMat mtm = m.transpose() * m;  // symmetric PSD, eigenvalues theta^2 doubled
  std::vector<double> eval;
  DMat evec;
  detail::jacobi_eigen(mtm, eval, evec);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return eval[x] > eval[y]; });

  auto dot = [n](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  };
  auto matvec = [&](const std::vector<double>& x) {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y[i] += m(i, j) * x[j];
    return y;
  };

  std::vector<std::vector<double>> taken;
  auto deflate = [&](std::vector<double> v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& t : taken) {
        double d = dot(v, t);
        for (int i = 0; i < n; ++i) v[i] -= d * t[i];
      }
    double nrm = std::sqrt(dot(v, v));
    if (nrm < 1e-8) return std::vector<double>{};
    for (double& x : v) x /= nrm;
    return v;
  };

  double theta_tol = tol * std::max(1.0, m.max_abs());
  std::vector<std::pair<std::vector<double>, std::vector<double>>> planes;
  std::vector<std::vector<double>> kernels;
  ChernRoots roots;
  for (int idx : order) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = evec(i, idx);
    std::vector<double> u = deflate(std::move(v));
    if (u.empty()) continue;  // span already covered by an earlier plane mate
    std::vector<double> mu = matvec(u);
    double theta = std::sqrt(dot(mu, mu));
    if (theta <= theta_tol) {
      kernels.push_back(u);
      taken.push_back(std::move(u));
      continue;
    }
    std::vector<double> w = mu;
    for (double& x : w) x /= theta;
    w = deflate(std::move(w));  // numerical hygiene only; w is orthogonal in theory
    if (w.empty()) throw std::runtime_error("chern_roots: failed to complete a plane");
    roots.angles.push_back(theta);
    planes.emplace_back(u, w);
    taken.push_back(std::move(u));
    taken.push_back(std::move(w));
  }

  roots.zero_modes = int(kernels.size());
  roots.basis = DMat(n, n);
  int col = 0;
  for (const auto& [u, w] : planes) {
    for (int i = 0; i < n; ++i) roots.basis(i, col) = u[i];
    ++col;
    for (int i = 0; i < n; ++i) roots.basis(i, col) = w[i];
    ++col;
  }
  for (const auto& u : kernels) {
    for (int i = 0; i < n; ++i) roots.basis(i, col) = u[i];
    ++col;
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Even power series in t = x^2 for the log of each determinant kernel.

namespace detail {

inline std::vector<double> series_log_one_plus(const std::vector<double>& f) {
  // f[0] = 1; returns the series of log f.
  size_t K = f.size();
  std::vector<double> g(K, 0.0);
  for (size_t m = 1; m < K; ++m) {
    double acc = f[m];
    for (size_t j = 1; j < m; ++j) acc -= (double(j) / double(m)) * g[j] * f[m - j];
    g[m] = acc;
  }
  return g;
}

constexpr int kSeriesTerms = 96;

inline const std::vector<double>& log_cosh_series() {  // in t = x^2
  static const std::vector<double> g = [] {
    std::vector<double> f(kSeriesTerms, 0.0);
    double fact = 1.0;  // (2k)!
    for (int k = 0; k < kSeriesTerms; ++k) {
      f[k] = 1.0 / fact;
      fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return series_log_one_plus(f);
  }();
  return g;
}

inline const std::vector<double>& log_sinhc_series() {  // in t = x^2
  static const std::vector<double> g = [] {
    std::vector<double> f(kSeriesTerms, 0.0);
    double fact = 1.0;  // (2k+1)!
    for (int k = 0; k < kSeriesTerms; ++k) {
      f[k] = 1.0 / fact;
      fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
    }
    return series_log_one_plus(f);
  }();
  return g;
}

// exp(scale/2 * sum_{k>=1} g_k tr((M^2)^k)).
template <class S>
S det_sqrt_even_series(const Matrix<S>& m, const std::vector<double>& g, double scale = 1.0) {
  Matrix<S> p = m * m;
  Matrix<S> pk = Matrix<S>::identity(m.rows());
  S acc = scalar_ring<S>::zero();
  double tail = 0.0;
  for (int k = 1; k < int(g.size()); ++k) {
    pk = pk * p;
    if (g[k] != 0.0) acc += trace(pk) * scalar_ring<S>::from_double(g[k]);
    tail = pk.max_abs() * std::abs(g[k]) * m.rows();
    if (k > 6 && tail < 1e-19) break;
  }
  if (tail > 1e-11 * std::max(1.0, scalar_ring<S>::mag(acc)))
    throw std::runtime_error(
        "det_sqrt series did not converge: matrix norm too large for the log "
        "branch, use the Chern-root path");
  return exp_s(acc * scalar_ring<S>::from_double(0.5 * scale));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// det^{1/2} kernels. The matrix argument is the raw antisymmetric input; the
// normalization (the /2 and /4pi of the curvature formulas) lives inside the
// kernel so there is exactly one authoritative place per pi factor.

// det^{1/2} cosh(M/2): closed form prod cos(theta_j/2).
template <class S>
S det_sqrt_cosh_angles(const std::vector<S>& th) {
  S v = scalar_ring<S>::one();
  for (const S& t : th) v = v * cos_s(t * scalar_ring<S>::from_double(0.5));
  return v;
}
inline double det_sqrt_cosh(const DMat& m) {
  ChernRoots r = chern_roots(m);
  double v = 1.0;
  for (double th : r.angles) v *= std::cos(th / 2);
  return v;
}
template <class S>
S det_sqrt_cosh_series(const Matrix<S>& m) {
  return detail::det_sqrt_even_series(m * scalar_ring<S>::from_double(0.5),
                                      detail::log_cosh_series());
}

// det^{1/2} (sinh(M/2)/(M/2)): closed form prod sin(theta_j/2)/(theta_j/2);
// zero blocks contribute 1.
template <class S>
S det_sqrt_sinhc_angles(const std::vector<S>& th) {
  S v = scalar_ring<S>::one();
  for (const S& t : th) {
    S h = t * scalar_ring<S>::from_double(0.5);
    v = v * (sin_s(h) / h);
  }
  return v;
}
inline double det_sqrt_sinhc(const DMat& m) {
  ChernRoots r = chern_roots(m);
  double v = 1.0;
  for (double th : r.angles) v *= std::sin(th / 2) / (th / 2);
  return v;
}
template <class S>
S det_sqrt_sinhc_series(const Matrix<S>& m) {
  return detail::det_sqrt_even_series(m * scalar_ring<S>::from_double(0.5),
                                      detail::log_sinhc_series());
}

// det^{1/2} (X / sinh X) at X = M * prescale: the reciprocal sinhc kernel.
template <class S>
S det_sqrt_x_over_sinh_series(const Matrix<S>& m, double prescale) {
  return detail::det_sqrt_even_series(m * scalar_ring<S>::from_double(prescale),
                                      detail::log_sinhc_series(), -1.0);
}
inline double det_sqrt_x_over_sinh(const DMat& m, double prescale) {
  ChernRoots r = chern_roots(m);
  double v = 1.0;
  for (double th : r.angles) {
    double x = th * prescale;
    if (std::abs(std::sin(x)) < 1e-12 * std::max(1.0, std::abs(x)))
      throw std::domain_error("det_sqrt_x_over_sinh: pole of x/sin(x)");
    v *= x / std::sin(x);
  }
  return v;
}

// The A-hat kernel det^{1/2}((M/4pi)/sinh(M/4pi)).
template <class S>
S a_hat_series(const Matrix<S>& m) {
  return det_sqrt_x_over_sinh_series(m, 1.0 / (4.0 * kPi));
}
inline double a_hat(const DMat& m) {
  double v = det_sqrt_x_over_sinh(m, 1.0 / (4.0 * kPi));
  if (!std::isfinite(v)) throw std::domain_error("a_hat: pole of x/sin(x)");
  return v;
}

// ---------------------------------------------------------------------------
// Pfaffian: Berezin definition, recursive expansion, Chern-root product.

// Coefficient of the top monomial in exp(sum_{s<t} M_ts x_s x_t). This is
// the sign-defining route; it works over every ring and is exact in
// rational mode.
template <class S>
S pfaffian_berezin(const Matrix<S>& m) {
  int n = m.rows();
  if (n % 2) throw std::invalid_argument("pfaffian: odd side, use pfaffian_odd");
  if (n == 0) return scalar_ring<S>::one();
  using Poly = std::map<Mask, S>;
  Poly omega;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      const S& v = m(t, s);  // <M e_s, e_t>
      if (!scalar_ring<S>::is_zero(v)) omega[(Mask(1) << s) | (Mask(1) << t)] = v;
    }
  // omega^j / j!; monomials commute as 2-forms but interleaving their
  // generators into the canonical order still carries a permutation sign.
  Poly pw{{0u, scalar_ring<S>::one()}};
  for (int j = 1; j <= n / 2; ++j) {
    Poly nxt;
    for (const auto& [ma, va] : pw)
      for (const auto& [mb, vb] : omega) {
        if (ma & mb) continue;
        S v = va * vb;
        if (detail::merge_inversions(ma, mb) & 1) v = -v;
        auto [it, fresh] = nxt.emplace(ma | mb, v);
        if (!fresh) it->second += v;
      }
    const S jj = scalar_ring<S>::from_int(j);
    pw.clear();
    for (auto& [mb, vb] : nxt) {
      S v = vb / jj;
      if (!scalar_ring<S>::is_zero(v)) pw.emplace(mb, std::move(v));
    }
    if (pw.empty()) break;
  }
  auto it = pw.find(full_mask(n));
  return it == pw.end() ? scalar_ring<S>::zero() : it->second;
}

// Independent route: expansion along the first column, same sign convention.
template <class S>
S pfaffian_recursive(const Matrix<S>& m) {
  int n = m.rows();
  if (n % 2) throw std::invalid_argument("pfaffian: odd side, use pfaffian_odd");
  if (n == 0) return scalar_ring<S>::one();
  if (n == 2) return m(1, 0);
  S acc = scalar_ring<S>::zero();
  for (int j = 1; j < n; ++j) {
    if (scalar_ring<S>::is_zero(m(j, 0))) continue;
    Matrix<S> minor(n - 2, n - 2);
    int ri = 0;
    for (int r = 1; r < n; ++r) {
      if (r == j) continue;
      int ci = 0;
      for (int c = 1; c < n; ++c) {
        if (c == j) continue;
        minor(ri, ci) = m(r, c);
        ++ci;
      }
      ++ri;
    }
    S term = m(j, 0) * pfaffian_recursive(minor);
    if ((j + 1) % 2) term = -term;  // (-1)^{j+1} with 1-based column j+1
    acc += term;
  }
  return acc;
}

inline double pfaffian_chern(const DMat& m) {
  if (m.rows() % 2) throw std::invalid_argument("pfaffian: odd side, use pfaffian_odd");
  ChernRoots r = chern_roots(m);
  if (r.zero_modes > 0) return 0.0;
  double v = det(r.basis);
  for (double th : r.angles) v *= th;
  return v;
}

// The odd-side Pfaffian is convention-bound to the block shape with a
// trailing zero row: the product over the 2x2 blocks only.
template <class S>
S pfaffian_odd(const Matrix<S>& m) {
  int n = m.rows();
  if (n % 2 == 0) throw std::invalid_argument("pfaffian_odd: even side, use pfaffian");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool block_entry = (i / 2 == j / 2) && (i != j) && (i < n - 1) && (j < n - 1);
      if (!block_entry && !scalar_ring<S>::is_zero(m(i, j)))
        throw std::invalid_argument("pfaffian_odd: matrix is not in trailing-zero block form");
    }
  S v = scalar_ring<S>::one();
  for (int l = 0; 2 * l + 1 < n; ++l) v = v * m(2 * l + 1, 2 * l);
  return v;
}

// ---------------------------------------------------------------------------
// The equivariant normal factor det^{-1/2}(1 - g exp(-M)) and its /2pi form.

// Direct route: assemble the matrix, take the determinant, principal root.
template <class S>
S det_invsqrt_one_minus(const DMat& g, const Matrix<S>& m) {
  if (g.rows() != m.rows()) throw std::invalid_argument("det_invsqrt_one_minus: shape mismatch");
  Matrix<S> arg = mat_cast<S>(g) * matexp(-m);
  Matrix<S> one_minus = Matrix<S>::identity(g.rows()) - arg;
  S d = det(one_minus);
  if (scalar_ring<S>::mag(d) == 0.0)
    throw std::domain_error("det_invsqrt_one_minus: singular argument");
  return scalar_ring<S>::one() / sqrt_s(d);
}

// Series route: det(1 - g e^{-M}) = det(1-g) det(1 - W) with
// W = (1-g)^{-1} g (e^{-M} - 1), and log det(1-W) = -sum tr(W^j)/j.
template <class S>
S det_invsqrt_one_minus_series(const DMat& g, const Matrix<S>& m, int max_terms = 200) {
  int n = g.rows();
  DMat one_minus_g = DMat::identity(n) - g;
  double base = det(one_minus_g);
  if (base == 0.0) throw std::domain_error("det_invsqrt_one_minus_series: singular 1-g");
  Matrix<S> em = matexp(-m) - Matrix<S>::identity(n);
  Matrix<S> w = mat_cast<S>(inverse(one_minus_g) * g) * em;
  if (w.max_abs() > 0.9)
    throw std::runtime_error("det_invsqrt_one_minus_series: series argument too large");
  S logdet = scalar_ring<S>::from_double(std::log(std::abs(base)));
  if (base < 0.0) throw std::domain_error("det_invsqrt_one_minus_series: negative base determinant");
  Matrix<S> wj = Matrix<S>::identity(n);
  for (int j = 1; j <= max_terms; ++j) {
    wj = wj * w;
    S t = trace(wj) * scalar_ring<S>::from_double(-1.0 / j);
    logdet += t;
    if (wj.max_abs() < 1e-18) break;
  }
  return exp_s(logdet * scalar_ring<S>::from_double(-0.5));
}

// nu(g, M) = det^{-1/2}(1 - g exp(-M/2pi)).
template <class S>
S nu_equivariant(const DMat& g, const Matrix<S>& m) {
  return det_invsqrt_one_minus(g, m * scalar_ring<S>::from_double(1.0 / (2.0 * kPi)));
}
template <class S>
S nu_equivariant_series(const DMat& g, const Matrix<S>& m) {
  return det_invsqrt_one_minus_series(g, m * scalar_ring<S>::from_double(1.0 / (2.0 * kPi)));
}

// ---------------------------------------------------------------------------
// Ring-dispatched kernel entry points for the density assembly. Float-mode
// arguments are real matrices in disguise and go through the Chern-root
// closed forms, which are valid for every angle; nilpotent-mode arguments
// go through the power series, which converges on the angle domain the
// nilpotent suites use (spectral radius below pi for the cosh kernel).

inline DMat real_part_checked(const Matrix<Cplx>& m) {
  DMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j).imag()) > 1e-14 * std::max(1.0, std::abs(m(i, j))))
        throw std::invalid_argument("charforms: float-mode matrices must be real valued");
      r(i, j) = m(i, j).real();
    }
  return r;
}

template <class S>
S det_sqrt_cosh_kernel(const Matrix<S>& m) {
  if constexpr (std::is_same_v<S, Cplx>)
    return Cplx(det_sqrt_cosh(real_part_checked(m)));
  else
    return det_sqrt_cosh_series(m);
}

template <class S>
S det_sqrt_sinhc_kernel(const Matrix<S>& m) {
  if constexpr (std::is_same_v<S, Cplx>)
    return Cplx(det_sqrt_sinhc(real_part_checked(m)));
  else
    return det_sqrt_sinhc_series(m);
}

template <class S>
S a_hat_kernel(const Matrix<S>& m) {
  if constexpr (std::is_same_v<S, Cplx>)
    return Cplx(a_hat(real_part_checked(m)));
  else
    return a_hat_series(m);
}

template <class S>
S x_over_sinh_kernel(const Matrix<S>& m, double prescale) {
  if constexpr (std::is_same_v<S, Cplx>)
    return Cplx(det_sqrt_x_over_sinh(real_part_checked(m), prescale));
  else
    return det_sqrt_x_over_sinh_series(m, prescale);
}

}  // namespace subsig
