#pragma once

#include <stdexcept>

#include "subsig/blade.hpp"

namespace subsig {

// Element of Lambda(n) graded-tensor Lambda(n): plain form words e^S ⊗ ê^T
// with wedge multiplication (no contractions). Carries the fixed/normal
// split position `a` used for bidegree extraction: indices 1..a are the
// fixed directions, a+1..n the normal ones.
template <class S>
class BigradedForm {
 public:
  using Terms = std::map<BladePair, S>;

  BigradedForm() : n_(0), a_(0) {}
  BigradedForm(int n, int a) : n_(n), a_(a) {
    if (a < 0 || a > n) throw std::invalid_argument("BigradedForm: bad split");
  }

  static BigradedForm one(int n, int a) {
    BigradedForm w(n, a);
    w.add_term({0, 0}, scalar_ring<S>::one());
    return w;
  }

  int dim() const { return n_; }
  int split() const { return a_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S coeff(BladePair b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? scalar_ring<S>::zero() : it->second;
  }

  void add_term(BladePair b, S v) {
    if ((b.c | b.h) & ~full_mask(n_))
      throw std::invalid_argument("BigradedForm: word outside dimension");
    if (scalar_ring<S>::is_zero(v)) return;
    auto [it, fresh] = terms_.emplace(b, v);
    if (!fresh) {
      it->second += v;
      if (scalar_ring<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  BigradedForm operator-() const {
    BigradedForm r(n_, a_);
    for (const auto& [b, v] : terms_) r.terms_.emplace(b, -v);
    return r;
  }

  friend BigradedForm operator+(const BigradedForm& x, const BigradedForm& y) {
    x.check_compatible(y);
    BigradedForm r = x;
    for (const auto& [b, v] : y.terms_) r.add_term(b, v);
    return r;
  }
  friend BigradedForm operator-(const BigradedForm& x, const BigradedForm& y) {
    return x + (-y);
  }
  friend BigradedForm operator*(const BigradedForm& x, const S& s) {
    BigradedForm r(x.n_, x.a_);
    for (const auto& [b, v] : x.terms_) r.add_term(b, v * s);
    return r;
  }

  // Wedge in the graded tensor algebra: same crossing sign as the Clifford
  // product, but repeated indices kill a term instead of contracting.
  friend BigradedForm operator*(const BigradedForm& x, const BigradedForm& y) {
    x.check_compatible(y);
    BigradedForm r(x.n_, x.a_);
    for (const auto& [p, pv] : x.terms_) {
      for (const auto& [q, qv] : y.terms_) {
        if ((p.c & q.c) || (p.h & q.h)) continue;
        int sign = word_merge_sign(p.c, q.c, 0) * word_merge_sign(p.h, q.h, 0);
        if ((bits(p.h) & 1) && (bits(q.c) & 1)) sign = -sign;
        S v = pv * qv;
        if (sign < 0) v = -v;
        r.add_term({p.c | q.c, p.h | q.h}, std::move(v));
      }
    }
    return r;
  }

  friend bool operator==(const BigradedForm& x, const BigradedForm& y) {
    return x.n_ == y.n_ && (x - y).is_zero();
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [b, v] : terms_) m = std::max(m, scalar_ring<S>::mag(v));
    return m;
  }

 private:
  void check_compatible(const BigradedForm& o) const {
    if (n_ != o.n_ || a_ != o.a_)
      throw std::invalid_argument("BigradedForm: dimension or split mismatch");
  }

  int n_;
  int a_;
  Terms terms_;
};

// Blade-wise quantization inverse: c-words become form words, chat-words
// hatted form words.
template <class S>
BigradedForm<S> symbol(const CliffordElement<S>& x, int a = 0) {
  BigradedForm<S> w(x.dim(), a);
  for (const auto& [b, v] : x.terms()) w.add_term(b, v);
  return w;
}

// Coefficient of the volume word e^1..e^n ê^1..ê^n.
template <class S>
S berezin_top(const BigradedForm<S>& w) {
  Mask f = full_mask(w.dim());
  return w.coeff({f, f});
}

struct Bidegree {
  int k;     // form degree carried by fixed indices 1..a
  int lbar;  // form degree carried by normal indices a+1..n
};

// Projection onto the component with c-word bidegree d1 and chat-word
// bidegree d2. Components over all bidegrees partition the element.
template <class S>
BigradedForm<S> bigraded_component(const BigradedForm<S>& w, Bidegree d1, Bidegree d2) {
  int a = w.split(), n = w.dim();
  if (d1.k < 0 || d1.k > a || d2.k < 0 || d2.k > a || d1.lbar < 0 || d1.lbar > n - a ||
      d2.lbar < 0 || d2.lbar > n - a)
    throw std::invalid_argument("bigraded_component: bidegree out of range");
  Mask fixed = full_mask(a);
  BigradedForm<S> r(n, a);
  for (const auto& [b, v] : w.terms()) {
    if (bits(b.c & fixed) == d1.k && bits(b.c & ~fixed) == d1.lbar &&
        bits(b.h & fixed) == d2.k && bits(b.h & ~fixed) == d2.lbar)
      r.add_term(b, v);
  }
  return r;
}

}  // namespace subsig
