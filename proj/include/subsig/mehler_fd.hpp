#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include "subsig/charforms.hpp"

namespace subsig {

// Numerical sanity layer for the model operator. The oscillator
//   H = -sum_r (d_r + (B y)_r / 4)^2
// has an on-diagonal heat kernel whose ratio to the free kernel is the
// determinant factor det^{1/2}((tB/2)/sinh(tB/2)); an explicit
// finite-difference evolution provides an independent oracle for it.

struct OscillatorSpec {
  int m = 2;           // 1 or 2 spatial dimensions
  DMat B;              // m x m real antisymmetric coupling
  double extent = 0;   // grid half-width; 0 selects 6 sqrt(t) max(1, |B|)
  int npoints = 129;   // nodes per axis, odd so the origin is a node
  double cfl = 0.35;   // dt = cfl h^2 / (2m)
};

inline double closed_form_trace_factor(const DMat& b, double t) {
  if (t <= 0.0) throw std::domain_error("closed_form_trace_factor: positive time required");
  double v = det_sqrt_x_over_sinh(b, 0.5 * t);
  if (!std::isfinite(v) || v <= 0.0)
    throw std::domain_error("closed_form_trace_factor: resonance of x/sin(x)");
  return v;
}

template <class S>
S closed_form_trace_factor_series(const Matrix<S>& b, double t) {
  return det_sqrt_x_over_sinh_series(b, 0.5 * t);
}

namespace detail {

// One explicit Euler step of du/dt = Lap u + (By/2).grad u + |By/4|^2 u on a
// square grid with Dirichlet boundary. The row loop is the parallel kernel;
// `parallel = false` runs the serial reference. Each cell writes only its
// own output, so both paths produce bitwise-identical results.
inline void oscillator_step_2d(const std::vector<double>& u, std::vector<double>& out, int npts,
                               double h, double beta, double dt, bool parallel) {
  double inv_h2 = 1.0 / (h * h);
  double half_beta = 0.5 * beta;
  double pot = beta * beta / 16.0;
  double lo = -0.5 * h * (npts - 1);
  auto body = [&](int i) {
    double y2 = lo + i * h;  // row index i is the second coordinate
    for (int j = 0; j < npts; ++j) {
      double y1 = lo + j * h;
      size_t c = size_t(i) * npts + j;
      if (i == 0 || j == 0 || i == npts - 1 || j == npts - 1) {
        out[c] = 0.0;
        continue;
      }
      double uc = u[c];
      double ue = u[c + 1], uw = u[c - 1];
      double un = u[c + npts], us = u[c - npts];
      double lap = (ue + uw + un + us - 4.0 * uc) * inv_h2;
      double d1 = (ue - uw) / (2.0 * h);
      double d2 = (un - us) / (2.0 * h);
      double adv = half_beta * (-y2 * d1 + y1 * d2);
      double v = pot * (y1 * y1 + y2 * y2) * uc;
      out[c] = uc + dt * (lap + adv + v);
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < npts; ++i) body(i);
  } else {
    for (int i = 0; i < npts; ++i) body(i);
  }
}

inline void free_step_1d(const std::vector<double>& u, std::vector<double>& out, int npts,
                         double h, double dt) {
  double inv_h2 = 1.0 / (h * h);
  out[0] = out[npts - 1] = 0.0;
  for (int j = 1; j < npts - 1; ++j)
    out[j] = u[j] + dt * (u[j + 1] + u[j - 1] - 2.0 * u[j]) * inv_h2;
}

}  // namespace detail

// On-diagonal kernel value at the origin, normalized by the free evolution
// of the same initial bump; converges to closed_form_trace_factor at
// second order in the grid spacing.
inline double fd_heat_trace(const OscillatorSpec& spec, double t, bool parallel = true) {
  if (spec.m < 1 || spec.m > 2) throw std::invalid_argument("fd_heat_trace: m must be 1 or 2");
  if (t <= 0.0) throw std::domain_error("fd_heat_trace: positive time required");
  if (spec.npoints < 17 || spec.npoints % 2 == 0)
    throw std::invalid_argument("fd_heat_trace: odd npoints >= 17 required");
  if (!is_antisymmetric(spec.B, 0.0) || spec.B.rows() != spec.m)
    throw std::invalid_argument("fd_heat_trace: B must be m x m antisymmetric");
  double beta = spec.m == 2 ? spec.B(1, 0) : 0.0;
  double extent = spec.extent > 0 ? spec.extent
                                  : 6.0 * std::sqrt(t) * std::max(1.0, spec.B.max_abs());
  int npts = spec.npoints;
  double h = 2.0 * extent / (npts - 1);
  double dt = spec.cfl * h * h / (2.0 * spec.m);
  int nsteps = int(std::ceil(t / dt));
  dt = t / nsteps;

  double sigma = 2.0 * h;  // delta approximation: narrow Gaussian
  double lo = -extent;

  if (spec.m == 1) {
    std::vector<double> u(npts), nxt(npts);
    for (int j = 0; j < npts; ++j) {
      double y = lo + j * h;
      u[j] = std::exp(-y * y / (2.0 * sigma * sigma));
    }
    std::vector<double> u0 = u;
    std::vector<double> nxt0(npts);
    for (int s = 0; s < nsteps; ++s) {
      detail::free_step_1d(u, nxt, npts, h, dt);
      u.swap(nxt);
      detail::free_step_1d(u0, nxt0, npts, h, dt);
      u0.swap(nxt0);
    }
    int mid = npts / 2;
    if (!(std::isfinite(u[mid]) && u0[mid] > 0))
      throw std::runtime_error("fd_heat_trace: evolution went unstable");
    return u[mid] / u0[mid];
  }

  size_t cells = size_t(npts) * npts;
  std::vector<double> u(cells), nxt(cells), u0(cells), nxt0(cells);
  for (int i = 0; i < npts; ++i)
    for (int j = 0; j < npts; ++j) {
      double y2 = lo + i * h, y1 = lo + j * h;
      u[size_t(i) * npts + j] = std::exp(-(y1 * y1 + y2 * y2) / (2.0 * sigma * sigma));
    }
  u0 = u;
  for (int s = 0; s < nsteps; ++s) {
    detail::oscillator_step_2d(u, nxt, npts, h, beta, dt, parallel);
    u.swap(nxt);
    detail::oscillator_step_2d(u0, nxt0, npts, h, 0.0, dt, parallel);
    u0.swap(nxt0);
  }
  size_t mid = (size_t(npts / 2)) * npts + npts / 2;
  if (!(std::isfinite(u[mid]) && u0[mid] > 0))
    throw std::runtime_error("fd_heat_trace: evolution went unstable");
  return u[mid] / u0[mid];
}

struct ConvergencePoint {
  double spacing;
  double value;
  double error;
};

// Error against the closed form over a sequence of halved spacings.
inline std::vector<ConvergencePoint> fd_convergence_study(OscillatorSpec spec, double t,
                                                          int levels, bool parallel = true) {
  std::vector<ConvergencePoint> pts;
  double target = closed_form_trace_factor(spec.B, t);
  for (int l = 0; l < levels; ++l) {
    double extent = spec.extent > 0 ? spec.extent
                                    : 6.0 * std::sqrt(t) * std::max(1.0, spec.B.max_abs());
    double h = 2.0 * extent / (spec.npoints - 1);
    double v = fd_heat_trace(spec, t, parallel);
    pts.push_back({h, v, std::abs(v - target)});
    spec.npoints = 2 * spec.npoints - 1;
  }
  return pts;
}

}  // namespace subsig
