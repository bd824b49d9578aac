#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "subsig/nilpotent.hpp"
#include "subsig/rational.hpp"

namespace subsig {

using Cplx = std::complex<double>;

// The three coefficient rings: exact Gaussian rationals for combinatorial
// identities, complex doubles for trigonometric closed forms, and the
// truncated nilpotent ring for form-valued curvature.
template <class S>
struct scalar_ring {
  static constexpr bool exact = false;
};

template <>
struct scalar_ring<GaussianRational> {
  static constexpr bool exact = true;
  static GaussianRational zero() { return GaussianRational(); }
  static GaussianRational one() { return GaussianRational(1); }
  static GaussianRational from_int(long v) { return GaussianRational(v); }
  static bool is_zero(const GaussianRational& v) { return v.is_zero(); }
  static double mag(const GaussianRational& v) { return std::abs(v.to_complex()); }
  static double pivot_mag(const GaussianRational& v) { return is_zero(v) ? 0.0 : 1.0; }
  static Cplx to_complex(const GaussianRational& v) { return v.to_complex(); }
  static std::string str(const GaussianRational& v) { return v.str(); }
};

template <>
struct scalar_ring<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return double(v); }
  static double from_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
  static double mag(double v) { return std::abs(v); }
  static double pivot_mag(double v) { return std::abs(v); }
  static Cplx to_complex(double v) { return Cplx(v); }
  static std::string str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

template <>
struct scalar_ring<Cplx> {
  static constexpr bool exact = false;
  static Cplx zero() { return Cplx(0.0); }
  static Cplx one() { return Cplx(1.0); }
  static Cplx from_int(long v) { return Cplx(double(v)); }
  static Cplx from_double(double v) { return Cplx(v); }
  static bool is_zero(const Cplx& v) { return v == Cplx(0.0); }
  static double mag(const Cplx& v) { return std::abs(v); }
  static double pivot_mag(const Cplx& v) { return std::abs(v); }
  static Cplx to_complex(const Cplx& v) { return v; }
  static std::string str(const Cplx& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
    return buf;
  }
};

template <>
struct scalar_ring<NilPoly> {
  static constexpr bool exact = false;
  static NilPoly zero() { return NilPoly(); }
  static NilPoly one() { return NilPoly(1.0); }
  static NilPoly from_int(long v) { return NilPoly(double(v)); }
  static NilPoly from_double(double v) { return NilPoly(v); }
  static bool is_zero(const NilPoly& v) { return v.is_zero(); }
  static double mag(const NilPoly& v) { return v.max_abs(); }
  // pivots need an invertible constant part, not just a large coefficient
  static double pivot_mag(const NilPoly& v) { return std::abs(v.constant()); }
  static Cplx to_complex(const NilPoly& v) { return v.constant(); }
  static std::string str(const NilPoly& v) {
    return scalar_ring<Cplx>::str(v.constant()) + (v.ngen() ? "+nil" : "");
  }
};

// Analytic functions on the float-capable rings. On NilPoly they expand
// around the constant term; the nilpotent tail terminates the series.
inline Cplx exp_s(const Cplx& x) { return std::exp(x); }
inline Cplx log_s(const Cplx& x) { return std::log(x); }
inline Cplx sqrt_s(const Cplx& x) { return std::sqrt(x); }
inline Cplx cos_s(const Cplx& x) { return std::cos(x); }
inline Cplx sin_s(const Cplx& x) { return std::sin(x); }

namespace detail {
inline std::vector<Cplx> taylor_exp(Cplx c, int order) {
  std::vector<Cplx> d(order, std::exp(c));
  double f = 1.0;
  for (int j = 1; j < order; ++j) {
    f *= j;
    d[j] /= f;
  }
  return d;
}
}  // namespace detail

inline NilPoly exp_s(const NilPoly& x) {
  return x.apply_series(detail::taylor_exp(x.constant(), x.series_order()));
}

inline NilPoly log_s(const NilPoly& x) {
  Cplx c = x.constant();
  if (c == Cplx(0.0)) throw std::domain_error("log_s: zero constant term");
  int order = x.series_order();
  std::vector<Cplx> d(order);
  d[0] = std::log(c);
  Cplx p = c;  // c^j
  double sign = 1.0;
  for (int j = 1; j < order; ++j) {
    d[j] = sign / (double(j) * p);  // (-1)^{j-1} (j-1)!/c^j / j!
    p *= c;
    sign = -sign;
  }
  return x.apply_series(d);
}

inline NilPoly sqrt_s(const NilPoly& x) {
  Cplx c = x.constant();
  if (c == Cplx(0.0)) throw std::domain_error("sqrt_s: zero constant term");
  int order = x.series_order();
  std::vector<Cplx> d(order);
  Cplx r = std::sqrt(c);
  d[0] = r;
  // binomial series: C(1/2, j) c^{1/2-j}
  Cplx coef = r;
  for (int j = 1; j < order; ++j) {
    coef *= (Cplx(0.5) - Cplx(double(j - 1))) / (Cplx(double(j)) * c);
    d[j] = coef;
  }
  return x.apply_series(d);
}

inline NilPoly cos_s(const NilPoly& x) {
  Cplx c = x.constant();
  int order = x.series_order();
  std::vector<Cplx> d(order);
  const Cplx table[4] = {std::cos(c), -std::sin(c), -std::cos(c), std::sin(c)};
  double f = 1.0;
  for (int j = 0; j < order; ++j) {
    if (j > 0) f *= j;
    d[j] = table[j % 4] / f;
  }
  return x.apply_series(d);
}

inline NilPoly sin_s(const NilPoly& x) {
  Cplx c = x.constant();
  int order = x.series_order();
  std::vector<Cplx> d(order);
  const Cplx table[4] = {std::sin(c), std::cos(c), -std::sin(c), -std::cos(c)};
  double f = 1.0;
  for (int j = 0; j < order; ++j) {
    if (j > 0) f *= j;
    d[j] = table[j % 4] / f;
  }
  return x.apply_series(d);
}

// i^p for integer p (p may be negative).
template <class S>
S imaginary_power(long p) {
  long r = ((p % 4) + 4) % 4;
  S i = scalar_ring<S>::one();
  if constexpr (std::is_same_v<S, GaussianRational>) {
    i = GaussianRational::unit_i();
  } else if constexpr (std::is_same_v<S, Cplx>) {
    i = Cplx(0.0, 1.0);
  } else {
    i = NilPoly(Cplx(0.0, 1.0));
  }
  S v = scalar_ring<S>::one();
  for (long j = 0; j < r; ++j) v = v * i;
  return v;
}

}  // namespace subsig
