#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subsig {

// Truncated polynomial ring C[eps_1..eps_m] with eps_i^2 = 0 and all
// monomials of total degree > trunc dropped. The generators stand in for
// commuting curvature 2-forms on the fixed-point set, so every power series
// in a purely nilpotent argument terminates.
//
// A constant is a generator-free value (ngen = 0); binary operations promote
// to the wider context and keep the tighter truncation.
class NilPoly {
 public:
  using C = std::complex<double>;

  NilPoly() : ngen_(0), trunc_(kMaxTrunc), c_(1, C(0.0)) {}
  NilPoly(double v) : ngen_(0), trunc_(kMaxTrunc), c_(1, C(v)) {}
  NilPoly(C v) : ngen_(0), trunc_(kMaxTrunc), c_(1, v) {}
  NilPoly(int ngen, int trunc) : ngen_(ngen), trunc_(trunc), c_(size_t(1) << ngen, C(0.0)) {
    if (ngen < 0 || ngen > 20) throw std::invalid_argument("NilPoly: bad generator count");
  }

  static NilPoly generator(int i, int ngen, int trunc) {
    NilPoly p(ngen, trunc);
    if (i < 0 || i >= ngen) throw std::invalid_argument("NilPoly: bad generator index");
    if (trunc >= 1) p.c_[size_t(1) << i] = C(1.0);
    return p;
  }

  int ngen() const { return ngen_; }
  int trunc() const { return trunc_; }

  C constant() const { return c_[0]; }
  C coeff(uint32_t mask) const { return mask < c_.size() ? c_[mask] : C(0.0); }
  void set_coeff(uint32_t mask, C v) {
    if (mask >= c_.size()) throw std::invalid_argument("NilPoly: mask out of range");
    c_[mask] = v;
  }

  bool is_zero() const {
    for (const C& v : c_)
      if (v != C(0.0)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const C& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  NilPoly operator-() const {
    NilPoly r = *this;
    for (C& v : r.c_) v = -v;
    return r;
  }

  friend NilPoly operator+(const NilPoly& a, const NilPoly& b) {
    NilPoly r = promote(a, b);
    const NilPoly rb = b.resized(r.ngen_, r.trunc_);
    for (size_t m = 0; m < r.c_.size(); ++m) r.c_[m] += rb.c_[m];
    return r;
  }
  friend NilPoly operator-(const NilPoly& a, const NilPoly& b) { return a + (-b); }

  friend NilPoly operator*(const NilPoly& a, const NilPoly& b) {
    int ngen = std::max(a.ngen_, b.ngen_);
    int trunc = std::min(a.trunc_, b.trunc_);
    NilPoly r(ngen, trunc);
    for (size_t x = 0; x < a.c_.size(); ++x) {
      if (a.c_[x] == C(0.0)) continue;
      int dx = std::popcount(uint32_t(x));
      if (dx > trunc) continue;
      for (size_t y = 0; y < b.c_.size(); ++y) {
        if (b.c_[y] == C(0.0)) continue;
        if (x & y) continue;  // eps_i^2 = 0
        if (dx + std::popcount(uint32_t(y)) > trunc) continue;
        r.c_[x | y] += a.c_[x] * b.c_[y];
      }
    }
    return r;
  }

  // Inverse exists iff the constant term does; Neumann series in the
  // nilpotent part terminates after at most trunc steps.
  NilPoly inverse() const {
    C c0 = c_[0];
    if (c0 == C(0.0)) throw std::domain_error("NilPoly: inverting a non-unit");
    NilPoly nu = *this;
    nu.c_[0] = C(0.0);
    nu = nu * NilPoly(C(-1.0) / c0);
    NilPoly acc(1.0), pw(1.0);
    int steps = std::min(trunc_, ngen_);
    for (int j = 1; j <= steps; ++j) {
      pw = pw * nu;
      if (pw.is_zero()) break;
      acc = acc + pw;
    }
    return acc * NilPoly(C(1.0) / c0);
  }

  friend NilPoly operator/(const NilPoly& a, const NilPoly& b) { return a * b.inverse(); }

  friend bool operator==(const NilPoly& a, const NilPoly& b) { return (a - b).is_zero(); }
  friend bool operator!=(const NilPoly& a, const NilPoly& b) { return !(a == b); }

  NilPoly& operator+=(const NilPoly& o) { return *this = *this + o; }
  NilPoly& operator-=(const NilPoly& o) { return *this = *this - o; }
  NilPoly& operator*=(const NilPoly& o) { return *this = *this * o; }

  // f(c0 + nu) = sum_j f^(j)(c0) nu^j / j! with nu nilpotent; `derivs[j]`
  // supplies f^(j)(c0)/j!.
  NilPoly apply_series(const std::vector<C>& derivs) const {
    NilPoly nu = *this;
    nu.c_[0] = C(0.0);
    NilPoly acc(derivs.empty() ? C(0.0) : derivs[0]);
    NilPoly pw(1.0);
    for (size_t j = 1; j < derivs.size(); ++j) {
      pw = pw * nu;
      if (pw.is_zero()) break;
      acc = acc + pw * NilPoly(derivs[j]);
    }
    return acc;
  }

  int series_order() const { return std::min(trunc_, ngen_) + 1; }

 private:
  static constexpr int kMaxTrunc = 1 << 20;

  NilPoly resized(int ngen, int trunc) const {
    NilPoly r(ngen, trunc);
    for (size_t m = 0; m < c_.size(); ++m)
      if (std::popcount(uint32_t(m)) <= trunc) r.c_[m] = c_[m];
    return r;
  }
  static NilPoly promote(const NilPoly& a, const NilPoly& b) {
    return a.resized(std::max(a.ngen_, b.ngen_), std::min(a.trunc_, b.trunc_));
  }

  int ngen_;
  int trunc_;
  std::vector<C> c_;
};

}  // namespace subsig
