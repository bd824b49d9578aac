#pragma once

#include "subsig/fixed_point.hpp"
#include "subsig/matrix_rep.hpp"

namespace subsig {

// Both sides of the local equivariant index identity at a fixed point,
// assembled by two code paths that share no kernels:
//
//  * the supertrace side works entirely in the blade algebra: rotation
//    lift, subbundle word, model heat-kernel value, graded expansion of the
//    supertrace pairing;
//  * the characteristic-form side multiplies the determinant kernels
//    (A-hat, the equivariant normal factor, cosh / sinh determinants, the
//    Pfaffian) at the printed pi-normalizations.
//
// Factor bookkeeping for the supertrace side is centralized in
// `density_scale`; the acceptance suites are the arbiter for every sign and
// power of two in it.

// Coefficient of the fixed-set volume form carried by the scalar ring: the
// identity at a = 0, the top nilpotent monomial for a > 0 (generator j
// standing for the 2-form on the j-th fixed plane).
inline Cplx form_top_coeff(const Cplx& v, int a) {
  if (a != 0) throw std::invalid_argument("form_top_coeff: numeric mode needs a = 0");
  return v;
}
inline Cplx form_top_coeff(const NilPoly& v, int a) {
  if (a == 0) return v.constant();
  return v.coeff(full_mask(a / 2));
}

// ---------------------------------------------------------------------------
// Symbol expansion of the rotation lift: the fully-contracted-in-c
// component of sigma(lift) against its closed form. Returns both sides.

template <class S>
struct SymbolExpansionPair {
  BigradedForm<S> lift_side;    // component of sigma(rotation_lift)
  BigradedForm<S> closed_side;  // normal volume word * det^{1/2}(1-g) * sigma(exp)
};

template <class S>
SymbolExpansionPair<S> symbol_expansion_lift(const std::vector<double>& angles, int n, int a,
                                             int l2) {
  int b = n - a;
  if (b <= 0 || b % 2 || int(angles.size()) != b / 2)
    throw std::invalid_argument("symbol_expansion_lift: even-case normal data required");
  for (double th : angles)
    if (std::abs(std::sin(th / 2)) < 1e-12)
      throw std::domain_error("symbol_expansion_lift: degenerate rotation");
  if (l2 < 0 || l2 > b) {
    // out-of-range bidegrees are zero on both sides
    return {BigradedForm<S>(n, a), BigradedForm<S>(n, a)};
  }

  auto lift = rotation_lift<S>(angles, n, a);
  BigradedForm<S> left = bigraded_component(symbol(lift, a), {0, b}, {0, l2});

  // closed form: (1/2)^{b/2} e^{a+1}..e^n det^{1/2}(1 - g) sigma(exp(Q))
  double root_det = 1.0;
  for (double th : angles) root_det *= 2.0 * std::sin(th / 2);
  Matrix<S> log_blocks(n, n);  // -block(theta) at the normal planes
  for (size_t j = 0; j < angles.size(); ++j) {
    int p = a + 2 * int(j);
    S th = scalar_ring<S>::from_double(angles[j]);
    log_blocks(p, p + 1) = th;
    log_blocks(p + 1, p) = -th;
  }
  auto expq = clifford_exp(quadratic_chat(log_blocks, n, 0));
  BigradedForm<S> hat_part = bigraded_component(symbol(expq, a), {0, 0}, {0, l2});
  BigradedForm<S> volume(n, a);
  volume.add_term({full_mask(n) ^ full_mask(a), 0},
                  scalar_ring<S>::from_double(std::ldexp(root_det, -(b / 2))));
  return {left, volume * hat_part};
}

template <class S>
SymbolExpansionPair<S> symbol_expansion_lift(const FixedPointData<S>& d, int l2) {
  validate(d);
  if (d.orientation_reversing)
    throw std::invalid_argument("symbol_expansion_lift: even case only");
  return symbol_expansion_lift<S>(d.phi_angles, d.n, d.a, l2);
}

// ---------------------------------------------------------------------------
// The top-degree symbol identity: Berezin coefficient of
// chat(E) exp(curvature words) against the determinant-kernel product.

template <class S>
struct TopSymbolPair {
  S lhs;  // top chat coefficient through the blade algebra
  S rhs;  // cosh/sinhc/Pfaffian kernel product
};

// m_e, m_p are the shifted curvature blocks R^E - L1 and R^Eperp - L2.
template <class S>
TopSymbolPair<S> top_symbol_pair(const Matrix<S>& m_e, const Matrix<S>& m_p, int n) {
  int k = m_e.rows();
  if (k % 2 || m_p.rows() != n - k)
    throw std::invalid_argument("top_symbol_pair: bad block shapes");
  auto word = chat_word<S>(n, k) *
              clifford_exp(quadratic_chat(m_e, n, 0) + quadratic_chat(m_p, n, k));
  // Top coefficient; the odd case has a trailing zero slot that the word
  // cannot reach, so its top excludes that direction (as does the odd
  // Pfaffian, which runs over the 2x2 blocks only).
  Mask top = full_mask(n);
  if ((n - k) % 2) top ^= Mask(1) << (n - 1);
  S lhs = word.coeff({0, top});
  S rhs = det_sqrt_cosh_kernel(m_e) * det_sqrt_sinhc_kernel(m_p);
  S half = scalar_ring<S>::one() / scalar_ring<S>::from_int(2);
  if ((n - k) % 2)
    rhs = rhs * pfaffian_odd(m_p * half);
  else
    rhs = rhs * pfaffian_berezin(m_p * half);
  return {lhs, rhs};
}

template <class S>
TopSymbolPair<S> top_symbol_pair(const FixedPointData<S>& d) {
  validate(d);
  Matrix<S> m_e = d.RE - mat_cast<S>(d.L1);
  Matrix<S> m_p = d.REperp - mat_cast<S>(d.L2);
  return top_symbol_pair(m_e, m_p, d.n);
}

// ---------------------------------------------------------------------------
// Model heat-kernel value at the fixed point (time t, Getzler scale).

template <class S>
struct ModelKernelValue {
  S prefactor;                      // (4 pi t)^{-a/2} and the determinant factors
  CliffordElement<S> exp_factor;    // exp(t (curvature - log) words)
  CliffordElement<S> chat_factor;   // i^{k/2} chat(E), kept separate for callers
};

template <class S>
ModelKernelValue<S> model_kernel_value(const FixedPointData<S>& d, double t) {
  validate(d);
  if (t <= 0.0) throw std::domain_error("model_kernel_value: positive time required");
  DMat g = d.normal_rotation();
  double det_g = det(DMat::identity(d.b()) - g);
  if (det_g <= 0.0) throw std::domain_error("model_kernel_value: degenerate rotation");
  S pref = scalar_ring<S>::from_double(std::pow(4.0 * kPi * t, -0.5 * d.a) / std::sqrt(det_g));
  pref = pref * x_over_sinh_kernel(d.Rprime, 0.5 * t);
  pref = pref * det_invsqrt_one_minus(g, d.Rdoubleprime * scalar_ring<S>::from_double(t));
  auto curv = curvature_elements(d);
  auto arg = (curv.re_shifted + curv.reperp_shifted) * scalar_ring<S>::from_double(t);
  return {pref, clifford_exp(arg), chat_word<S>(d.n, d.k) * imaginary_power<S>(d.k / 2)};
}

// ---------------------------------------------------------------------------
// The graded expansion of the supertrace pairing: the sum over hat-degrees
// of |sigma(lift)^{((0,b),(0,l2))} sigma(A)^{((*,0),(a,b-l2))}| at the top
// word, with the fixed-direction form degrees carried by the scalar ring.

template <class S>
S paired_top_sum(const BigradedForm<S>& lift_sym, const BigradedForm<S>& a_sym, int n, int a) {
  int b = n - a;
  Mask normal_c = full_mask(n) ^ full_mask(a);
  S acc = scalar_ring<S>::zero();
  for (int l2 = 0; l2 <= b; ++l2) {
    BigradedForm<S> left = bigraded_component(lift_sym, {0, b}, {0, l2});
    if (left.is_zero()) continue;
    BigradedForm<S> right = bigraded_component(a_sym, {0, 0}, {a, b - l2});
    if (right.is_zero()) continue;
    acc += (left * right).coeff({normal_c, full_mask(n)});
  }
  return acc;
}

// (-1)^{n/2} 2^n (4 pi)^{-a/2} i^{k/2}: the assembly constant of the
// supertrace side, derived once and pinned by the density suites.
template <class S>
S density_scale(int n, int a, int k) {
  S v = imaginary_power<S>(k / 2) * scalar_ring<S>::from_double(std::pow(4.0 * kPi, -0.5 * a));
  for (int i = 0; i < n; ++i) v = v + v;
  if ((n / 2) % 2) v = -v;
  return v;
}

// Supertrace side of the even-dimensional density. The model kernel enters
// with its curvature-only exponential; the rotation part of the kernel
// exponent is exactly what the lift contributes through the pairing, so
// including it twice would cancel the angle dependence (this is the one
// place the assembly deviates from a literal reading of the printed model
// kernel; the suites pin it).
template <class S>
S lhs_density(const FixedPointData<S>& d) {
  validate(d);
  if (d.orientation_reversing) throw std::invalid_argument("lhs_density: even case only");
  if (d.a > 0 && !std::is_same_v<S, NilPoly>)
    throw std::invalid_argument("lhs_density: a > 0 needs the nilpotent-form ring");

  DMat g = d.normal_rotation();
  double det_g = det(DMat::identity(d.b()) - g);
  if (det_g <= 0.0) throw std::domain_error("lhs_density: degenerate rotation");

  S pref = scalar_ring<S>::from_double(1.0 / std::sqrt(det_g));
  pref = pref * x_over_sinh_kernel(d.Rprime, 0.5);
  pref = pref * det_invsqrt_one_minus(g, d.Rdoubleprime);

  auto kernel_exp = clifford_exp(-(quadratic_chat(d.RE, d.n, 0) +
                                   quadratic_chat(d.REperp, d.n, d.k)));
  auto a_elem = (chat_word<S>(d.n, d.k) * kernel_exp) * pref;

  auto lift = rotation_lift<S>(d.phi_angles, d.n, d.a);
  S paired = paired_top_sum(symbol(lift, d.a), symbol(a_elem, d.a), d.n, d.a);
  S scale = density_scale<S>(d.n, d.a, d.k);
  return paired * scale;
}

// Characteristic-form side of the even-dimensional density.
template <class S>
S rhs_density(const FixedPointData<S>& d) {
  validate(d);
  if (d.orientation_reversing) throw std::invalid_argument("rhs_density: even case only");
  if (d.a > 0 && !std::is_same_v<S, NilPoly>)
    throw std::invalid_argument("rhs_density: a > 0 needs the nilpotent-form ring");
  double inv2pi = 1.0 / (2.0 * kPi);
  Matrix<S> arg_e = d.RE * scalar_ring<S>::from_double(inv2pi) - mat_cast<S>(d.L1);
  Matrix<S> arg_p = d.REperp * scalar_ring<S>::from_double(inv2pi) - mat_cast<S>(d.L2);
  S half = scalar_ring<S>::one() / scalar_ring<S>::from_int(2);

  S v = imaginary_power<S>(-(d.k / 2));
  for (int i = 0; i < d.n / 2; ++i) v = v + v;  // 2^{n/2}
  v = v * a_hat_kernel(d.Rprime);
  v = v * nu_equivariant(d.normal_rotation(), d.Rdoubleprime);
  v = v * det_sqrt_cosh_kernel(arg_e);
  v = v * det_sqrt_sinhc_kernel(arg_p);
  v = v * pfaffian_berezin(arg_p * half);
  return v;
}

// ---------------------------------------------------------------------------
// Odd (orientation-reversing) case: the plain trace pairs the kernel with
// the parity-twisted lift, which is the rotation lift with every plane
// angle shifted by pi and the reflected direction dropped.

template <class S>
CliffordElement<S> parity_twisted_lift(const FixedPointData<S>& d) {
  std::vector<double> shifted = d.phi_angles;
  for (double& th : shifted) th += kPi;
  return plane_lift_product<S>(shifted, d.n, d.a);
}

template <class S>
struct DensityPair {
  S lhs;
  S rhs;
};

template <class S>
DensityPair<S> odd_density_pair(const FixedPointData<S>& d) {
  validate(d);
  if (!d.orientation_reversing)
    throw std::invalid_argument("odd_density_pair: orientation-reversing case only");
  if (d.a != 0)
    throw std::invalid_argument("odd_density_pair: isolated fixed points only");

  DMat g = d.normal_rotation();
  double det_g = det(DMat::identity(d.b()) - g);
  if (det_g <= 0.0) throw std::domain_error("odd_density_pair: degenerate rotation");

  // trace side
  S pref = scalar_ring<S>::from_double(1.0 / std::sqrt(det_g));
  pref = pref * det_invsqrt_one_minus(g, d.Rdoubleprime);
  auto kernel_exp = clifford_exp(-(quadratic_chat(d.RE, d.n, 0) +
                                   quadratic_chat(d.REperp, d.n, d.k)));
  auto word = parity_twisted_lift(d) * (chat_word<S>(d.n, d.k) * kernel_exp);
  S lhs = blade_trace(word) * pref * imaginary_power<S>(d.k / 2);

  // characteristic-form side
  double inv2pi = 1.0 / (2.0 * kPi);
  Matrix<S> arg_e = d.RE * scalar_ring<S>::from_double(inv2pi) - mat_cast<S>(d.L1);
  Matrix<S> arg_p = d.REperp * scalar_ring<S>::from_double(inv2pi) - mat_cast<S>(d.L2);
  S half = scalar_ring<S>::one() / scalar_ring<S>::from_int(2);
  S rhs = imaginary_power<S>(-(d.k / 2));
  for (int i = 0; i < d.n / 2; ++i) rhs = rhs + rhs;
  rhs = rhs * scalar_ring<S>::from_double(std::sqrt(2.0));  // completes 2^{n/2}, n odd
  rhs = rhs * a_hat_kernel(d.Rprime);
  rhs = rhs * nu_equivariant(g, d.Rdoubleprime);
  rhs = rhs * det_sqrt_cosh_kernel(arg_e);
  rhs = rhs * det_sqrt_sinhc_kernel(arg_p);
  rhs = rhs * pfaffian_odd(arg_p * half);
  return {lhs, rhs};
}

}  // namespace subsig
