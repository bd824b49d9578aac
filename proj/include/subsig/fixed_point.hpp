#pragma once

#include <vector>

#include "subsig/charforms.hpp"
#include "subsig/lift.hpp"
#include "subsig/smallmat.hpp"

namespace subsig {

// Everything the local index density depends on at one fixed-point
// component.
//
// Frame and orientation conventions, pinned project-wide:
//  * e_1..e_a span the fixed directions, e_{a+1}..e_n the normal ones;
//  * the subbundle frame is f_alpha = e_alpha (alpha <= k), h_s = e_{k+s};
//  * normal plane p covers (a+2p-1, a+2p) and rotates by phi_angles[p-1];
//  * the stored rotation logs use L = -block(theta) per plane, with
//    block(t) = [[0,-t],[t,0]], so the curvature-side arguments are
//    R - L = R + block(theta). The rotation lift and this orientation are
//    tied to each other by the two-path density suites.
//  * the odd case (orientation_reversing) appends one reflected normal
//    coordinate e_n after the rotation planes; L2 carries a trailing zero
//    slot for it.
template <class S>
struct FixedPointData {
  int n = 0;
  int a = 0;
  int k = 0;
  bool orientation_reversing = false;
  std::vector<double> phi_angles;  // one per normal rotation plane
  DMat L1, L2;                     // derived from phi_angles; see above
  Matrix<S> RE, REperp, Rprime, Rdoubleprime;

  int b() const { return n - a; }
  int planes() const { return int(phi_angles.size()); }
  int planes_in_E() const { return std::max(0, (k - a) / 2); }

  // The normal rotation as a matrix (includes the reflection slot when
  // orientation reversing).
  DMat normal_rotation() const {
    return block_rotation_matrix(phi_angles, 0, orientation_reversing);
  }
};

namespace detail {

template <class S>
void check_antisymmetric(const Matrix<S>& m, int side, const char* name) {
  if (m.rows() != side || m.cols() != side)
    throw std::invalid_argument(std::string("fixed-point data: bad shape for ") + name);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      if (!scalar_ring<S>::is_zero(m(i, j) + m(j, i)))
        throw std::invalid_argument(std::string("fixed-point data: ") + name +
                                    " is not antisymmetric");
}

}  // namespace detail

inline void validate_shape(int n, int a, int k, const std::vector<double>& angles,
                           bool orientation_reversing) {
  if (n <= 0 || a < 0 || a > n) throw std::invalid_argument("fixed-point data: bad n or a");
  if (k < 0 || k > n || k % 2) throw std::invalid_argument("fixed-point data: k must be even");
  if (a % 2) throw std::invalid_argument("fixed-point data: a must be even");
  int b = n - a;
  if (!orientation_reversing) {
    if (n % 2 || b <= 0 || b % 2)
      throw std::invalid_argument("fixed-point data: even case needs even n and even b > 0");
    if (k > n - 2)
      throw std::invalid_argument("fixed-point data: the subbundle may not span every normal plane");
    if (int(angles.size()) != b / 2)
      throw std::invalid_argument("fixed-point data: need one angle per normal 2-plane");
  } else {
    if (n % 2 == 0 || b % 2 == 0)
      throw std::invalid_argument("fixed-point data: reversing case needs odd n and odd b");
    if (int(angles.size()) != (b - 1) / 2)
      throw std::invalid_argument("fixed-point data: need one angle per rotation plane");
  }
  for (double th : angles)
    if (!(th > 0.0 && th < 2.0 * kPi) || std::abs(std::sin(th / 2)) < 1e-12)
      throw std::domain_error("fixed-point data: degenerate normal rotation angle");
}

template <class S>
void validate(const FixedPointData<S>& d) {
  validate_shape(d.n, d.a, d.k, d.phi_angles, d.orientation_reversing);
  detail::check_antisymmetric(d.RE, d.k, "RE");
  detail::check_antisymmetric(d.REperp, d.n - d.k, "REperp");
  detail::check_antisymmetric(d.Rprime, d.a, "Rprime");
  detail::check_antisymmetric(d.Rdoubleprime, d.b(), "Rdoubleprime");
}

// Build the data from the angle list; curvature matrices default to zero
// (the isolated fixed-point case).
template <class S>
FixedPointData<S> make_fixed_point(int n, int a, int k, std::vector<double> angles,
                                   bool orientation_reversing = false) {
  validate_shape(n, a, k, angles, orientation_reversing);
  FixedPointData<S> d;
  d.n = n;
  d.a = a;
  d.k = k;
  d.orientation_reversing = orientation_reversing;
  d.phi_angles = std::move(angles);
  d.RE = Matrix<S>(k, k);
  d.REperp = Matrix<S>(n - k, n - k);
  d.Rprime = Matrix<S>(a, a);
  d.Rdoubleprime = Matrix<S>(n - a, n - a);

  // rotation logs, kernel orientation: L = -block(theta) per plane
  int in_e = std::max(0, (k - a) / 2);
  std::vector<double> th_e(d.phi_angles.begin(), d.phi_angles.begin() + in_e);
  std::vector<double> th_p(d.phi_angles.begin() + in_e, d.phi_angles.end());
  d.L1 = DMat(k, k);
  DMat blk_e = block_antisymmetric(th_e);
  for (int i = 0; i < blk_e.rows(); ++i)
    for (int j = 0; j < blk_e.cols(); ++j) d.L1(std::min(a, k) + i, std::min(a, k) + j) = -blk_e(i, j);
  d.L2 = DMat(n - k, n - k);
  int fixed_perp = std::max(0, a - k);
  DMat blk_p = block_antisymmetric(th_p);
  for (int i = 0; i < blk_p.rows(); ++i)
    for (int j = 0; j < blk_p.cols(); ++j) d.L2(fixed_perp + i, fixed_perp + j) = -blk_p(i, j);
  validate(d);
  return d;
}

// 1/4 sum_{s,t} <M b_s, b_t> chat(b_s) chat(b_t) with b_s = e_{offset+s};
// for antisymmetric M this is sum_{s<t} M_ts/2 chat chat.
template <class S>
CliffordElement<S> quadratic_chat(const Matrix<S>& m, int n, int offset) {
  CliffordElement<S> q(n);
  S half = scalar_ring<S>::one() / scalar_ring<S>::from_int(2);
  for (int s = 0; s < m.rows(); ++s)
    for (int t = s + 1; t < m.cols(); ++t) {
      if (scalar_ring<S>::is_zero(m(t, s))) continue;
      Mask h = (Mask(1) << (offset + s)) | (Mask(1) << (offset + t));
      q.add_term({0, h}, m(t, s) * half);
    }
  return q;
}

// The two curvature words of the model kernel: quadratic chat elements built
// from R^E - L1 on the subbundle frame and R^Eperp - L2 on its complement.
template <class S>
struct CurvatureElements {
  CliffordElement<S> re_shifted;      // from RE - L1
  CliffordElement<S> reperp_shifted;  // from REperp - L2
};

template <class S>
CurvatureElements<S> curvature_elements(const FixedPointData<S>& d) {
  Matrix<S> me = d.RE - mat_cast<S>(d.L1);
  Matrix<S> mp = d.REperp - mat_cast<S>(d.L2);
  return {quadratic_chat(me, d.n, 0), quadratic_chat(mp, d.n, d.k)};
}

}  // namespace subsig
