#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "subsig/scalar.hpp"

namespace subsig {

using Mask = uint32_t;

inline int bits(Mask m) { return std::popcount(m); }
inline Mask full_mask(int n) { return n == 0 ? 0u : ((Mask(1) << n) - 1u); }

// One basis word c(e_{i1})...c(e_{ip}) chat(e_{j1})...chat(e_{jq}) with both
// index sets strictly ascending; bit b stands for index b+1.
struct BladePair {
  Mask c = 0;
  Mask h = 0;

  friend bool operator<(const BladePair& a, const BladePair& b) {
    return a.c != b.c ? a.c < b.c : a.h < b.h;
  }
  friend bool operator==(const BladePair& a, const BladePair& b) {
    return a.c == b.c && a.h == b.h;
  }
};

namespace detail {

// Sign from stable-sorting word(A)++word(B) into ascending order: parity of
// strict inversions, i.e. pairs a in A, b in B with a > b.
inline int merge_inversions(Mask a, Mask b) {
  int inv = 0;
  while (b) {
    int j = std::countr_zero(b);
    b &= b - 1;
    inv += std::popcount(a & ~((Mask(2) << j) - 1));  // bits of a strictly above j
  }
  return inv;
}

// Reference implementation: expand both words into symbol lists and bubble
// sort, counting transpositions. Kept for exhaustive cross-checks.
inline int merge_inversions_slow(Mask a, Mask b) {
  std::vector<int> w;
  for (int i = 0; i < 32; ++i)
    if (a >> i & 1) w.push_back(i);
  for (int i = 0; i < 32; ++i)
    if (b >> i & 1) w.push_back(i);
  int swaps = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    for (size_t j = 0; j + 1 < w.size() - i; ++j)
      if (w[j] > w[j + 1]) {
        std::swap(w[j], w[j + 1]);
        ++swaps;
      }
  return swaps;
}

}  // namespace detail

// Product of two one-family words with generator square q (q = -1 for c,
// q = +1 for chat): word(A)*word(B) = sign * word(A xor B).
inline int word_merge_sign(Mask a, Mask b, int square) {
  int s = (detail::merge_inversions(a, b) & 1) ? -1 : 1;
  if (square < 0 && (bits(a & b) & 1)) s = -s;
  return s;
}

// Finite linear combination of blade pairs over a scalar ring. Immutable in
// spirit: all operations return fresh values and prune exact zeros.
template <class S>
class CliffordElement {
 public:
  using Terms = std::map<BladePair, S>;

  CliffordElement() : n_(0) {}
  explicit CliffordElement(int n) : n_(n) {
    if (n < 0 || n > 20) throw std::invalid_argument("CliffordElement: bad dimension");
  }

  static CliffordElement one(int n) {
    CliffordElement e(n);
    e.add_term({0, 0}, scalar_ring<S>::one());
    return e;
  }
  static CliffordElement zero(int n) { return CliffordElement(n); }
  static CliffordElement scalar(int n, S v) {
    CliffordElement e(n);
    e.add_term({0, 0}, std::move(v));
    return e;
  }
  // c(e_i), chat(e_i); i is 1-based.
  static CliffordElement c_gen(int n, int i) {
    CliffordElement e(n);
    e.add_term({Mask(1) << (i - 1), 0}, scalar_ring<S>::one());
    return e;
  }
  static CliffordElement h_gen(int n, int i) {
    CliffordElement e(n);
    e.add_term({0, Mask(1) << (i - 1)}, scalar_ring<S>::one());
    return e;
  }
  static CliffordElement blade(int n, Mask c, Mask h, S v = scalar_ring<S>::one()) {
    CliffordElement e(n);
    e.add_term({c, h}, std::move(v));
    return e;
  }

  int dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  S coeff(BladePair b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? scalar_ring<S>::zero() : it->second;
  }

  void add_term(BladePair b, S v) {
    if ((b.c | b.h) & ~full_mask(n_))
      throw std::invalid_argument("CliffordElement: blade outside dimension");
    if (scalar_ring<S>::is_zero(v)) return;
    auto [it, fresh] = terms_.emplace(b, v);
    if (!fresh) {
      it->second += v;
      if (scalar_ring<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  CliffordElement operator-() const {
    CliffordElement r(n_);
    for (const auto& [b, v] : terms_) r.terms_.emplace(b, -v);
    return r;
  }

  friend CliffordElement operator+(const CliffordElement& a, const CliffordElement& b) {
    a.check_compatible(b);
    CliffordElement r = a;
    for (const auto& [blade, v] : b.terms_) r.add_term(blade, v);
    return r;
  }
  friend CliffordElement operator-(const CliffordElement& a, const CliffordElement& b) {
    return a + (-b);
  }

  friend CliffordElement operator*(const CliffordElement& a, const S& s) {
    CliffordElement r(a.n_);
    for (const auto& [b, v] : a.terms_) r.add_term(b, v * s);
    return r;
  }
  friend CliffordElement operator*(const S& s, const CliffordElement& a) { return a * s; }

  // The graded product: c and chat generators anticommute across families
  // for every index pair, c squares to -1, chat squares to +1.
  friend CliffordElement operator*(const CliffordElement& a, const CliffordElement& b) {
    a.check_compatible(b);
    CliffordElement r(a.n_);
    for (const auto& [x, xv] : a.terms_) {
      for (const auto& [y, yv] : b.terms_) {
        int sign = word_merge_sign(x.c, y.c, -1) * word_merge_sign(x.h, y.h, +1);
        if ((bits(x.h) & 1) && (bits(y.c) & 1)) sign = -sign;
        S v = xv * yv;
        if (sign < 0) v = -v;
        r.add_term({x.c ^ y.c, x.h ^ y.h}, std::move(v));
      }
    }
    return r;
  }

  friend bool operator==(const CliffordElement& a, const CliffordElement& b) {
    return a.n_ == b.n_ && (a - b).is_zero();
  }
  friend bool operator!=(const CliffordElement& a, const CliffordElement& b) {
    return !(a == b);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [b, v] : terms_) m = std::max(m, scalar_ring<S>::mag(v));
    return m;
  }

  // Canonical text form, one term per line, terms in blade order.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, v] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << scalar_ring<S>::str(v) << ") * c[";
      bool sp = false;
      for (int i = 0; i < n_; ++i)
        if (b.c >> i & 1) {
          if (sp) os << " ";
          os << (i + 1);
          sp = true;
        }
      os << "] ^ ĉ[";
      sp = false;
      for (int i = 0; i < n_; ++i)
        if (b.h >> i & 1) {
          if (sp) os << " ";
          os << (i + 1);
          sp = true;
        }
      os << "]";
    }
    return os.str();
  }

 private:
  void check_compatible(const CliffordElement& o) const {
    if (n_ != o.n_) throw std::invalid_argument("CliffordElement: dimension mismatch");
  }

  int n_;
  Terms terms_;
};

// exp(x) by scaling and squaring on the series sum_m x^m/m!. In float mode
// truncation is by term magnitude; purely nilpotent arguments terminate
// exactly.
template <class S>
CliffordElement<S> clifford_exp(const CliffordElement<S>& x, double tol = 1e-14,
                                int max_terms = 200) {
  static_assert(!scalar_ring<S>::exact, "clifford_exp: float or nilpotent mode only");
  int n = x.dim();
  double norm = 0.0;
  for (const auto& [b, v] : x.terms()) norm += scalar_ring<S>::mag(v);
  int squarings = 0;
  while (norm > 0.5 && squarings < 40) {
    norm /= 2;
    ++squarings;
  }
  CliffordElement<S> xs = x;
  for (int j = 0; j < squarings; ++j) xs = xs * scalar_ring<S>::from_double(0.5);
  CliffordElement<S> acc = CliffordElement<S>::one(n);
  CliffordElement<S> term = CliffordElement<S>::one(n);
  int m = 1;
  for (; m <= max_terms; ++m) {
    term = term * xs;
    term = term * scalar_ring<S>::from_double(1.0 / m);
    if (term.is_zero()) break;
    acc = acc + term;
    if (term.max_abs() < tol) break;
  }
  if (m > max_terms)
    throw std::runtime_error("clifford_exp: series did not converge within term cap");
  for (int j = 0; j < squarings; ++j) acc = acc * acc;
  return acc;
}

}  // namespace subsig
