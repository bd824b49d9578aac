#pragma once

#include <vector>

#include "subsig/bigraded.hpp"
#include "subsig/blade.hpp"

namespace subsig {

// chat(e_1)...chat(e_k): the subbundle word. Convention: the frame of E is
// the first k coordinate vectors.
template <class S>
CliffordElement<S> chat_word(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("chat_word: need 0 <= k <= n");
  return CliffordElement<S>::blade(n, 0, full_mask(k));
}

// The even/odd grading operator of the exterior algebra as a Clifford
// element: product over i of chat(e_i) c(e_i).
template <class S>
CliffordElement<S> grading_element(int n) {
  auto g = CliffordElement<S>::one(n);
  for (int i = 1; i <= n; ++i) {
    Mask m = Mask(1) << (i - 1);
    g = g * (CliffordElement<S>::blade(n, 0, m) * CliffordElement<S>::blade(n, m, 0));
  }
  return g;
}

// tau = epsilon * chat(E): stored as the pair, multiplied out on demand.
// Identities involving tau are checked through the matrix representation.
template <class S>
struct TauElement {
  int n;
  int k;
  CliffordElement<S> as_element() const {
    return grading_element<S>(n) * chat_word<S>(n, k);
  }
};

template <class S>
TauElement<S> make_tau(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("make_tau: need 0 <= k <= n");
  return {n, k};
}

// (-1)^{n(n+1)/2} 2^n, the proportionality constant between the supertrace
// and the Berezin coefficient of the symbol.
template <class S>
S supertrace_scale(int n) {
  S v = scalar_ring<S>::from_int(1);
  for (int i = 0; i < n; ++i) v = v * scalar_ring<S>::from_int(2);
  if ((n * (n + 1) / 2) % 2) v = -v;
  return v;
}

template <class S>
S blade_supertrace(const CliffordElement<S>& x) {
  return supertrace_scale<S>(x.dim()) * berezin_top(symbol(x));
}

// Plain operator trace: 2^n times the identity-blade coefficient.
template <class S>
S blade_trace(const CliffordElement<S>& x) {
  S v = x.coeff({0, 0});
  for (int i = 0; i < x.dim(); ++i) v = v + v;
  return v;
}

// Product of per-plane lift factors; plane j rotates the coordinate pair
// (first+2j+1, first+2j+2) by angles[j] (1-based indices). Trailing
// coordinates stay untouched.
template <class S>
CliffordElement<S> plane_lift_product(const std::vector<double>& angles, int n, int first) {
  static_assert(!scalar_ring<S>::exact, "plane lifts: float or nilpotent mode only");
  if (first + 2 * int(angles.size()) > n)
    throw std::invalid_argument("plane_lift_product: planes exceed dimension");
  auto lift = CliffordElement<S>::one(n);
  for (size_t j = 0; j < angles.size(); ++j) {
    double cth = std::cos(angles[j]);
    double sth = std::sin(angles[j]);
    Mask plane = Mask(3) << (first + 2 * j);
    CliffordElement<S> f(n);
    f.add_term({0, 0}, scalar_ring<S>::from_double(0.5 * (1.0 + cth)));
    f.add_term({plane, plane}, scalar_ring<S>::from_double(-0.5 * (1.0 - cth)));
    f.add_term({plane, 0}, scalar_ring<S>::from_double(0.5 * sth));
    f.add_term({0, plane}, scalar_ring<S>::from_double(-0.5 * sth));
    lift = lift * f;
  }
  return lift;
}

// The lift of a block rotation to the Clifford algebra: the first a
// coordinates are fixed and every normal 2-plane rotates.
template <class S>
CliffordElement<S> rotation_lift(const std::vector<double>& angles, int n, int a) {
  int b = n - a;
  if (b < 0 || b % 2 || int(angles.size()) != b / 2)
    throw std::invalid_argument("rotation_lift: need one angle per normal 2-plane");
  return plane_lift_product<S>(angles, n, a);
}

// Lift of the reflection e_i -> -e_i: chat(e_i) c(e_i).
template <class S>
CliffordElement<S> reflection_lift(int n, int i) {
  Mask m = Mask(1) << (i - 1);
  return CliffordElement<S>::blade(n, 0, m) * CliffordElement<S>::blade(n, m, 0);
}

}  // namespace subsig
