#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subsig/charforms.hpp"
#include "subsig/rng.hpp"

using namespace subsig;

using QR = GaussianRational;

namespace {

DMat random_antisymmetric(Rng& rng, int m, double scale) {
  DMat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double v = rng.uniform(-scale, scale);
      a(i, j) = v;
      a(j, i) = -v;
    }
  return a;
}

DMat random_special_orthogonal(Rng& rng, int m) {
  DMat q = DMat::identity(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double phi = rng.uniform(0.0, 2.0 * kPi);
      DMat g = DMat::identity(m);
      g(i, i) = std::cos(phi);
      g(j, j) = std::cos(phi);
      g(i, j) = -std::sin(phi);
      g(j, i) = std::sin(phi);
      q = q * g;
    }
  return q;
}

double norm_spectralish(const DMat& m) { return m.max_abs() * m.rows(); }

}  // namespace

TEST_CASE("chern roots: block input, conjugated input, zero matrix") {
  DMat b = block_antisymmetric({0.7, 1.3});
  auto r = chern_roots(b);
  REQUIRE(r.angles.size() == 2);
  std::vector<double> sorted = r.angles;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(sorted[1] == doctest::Approx(1.3).epsilon(1e-12));
  CHECK((r.reconstruct() - b).max_abs() < 1e-10);

  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    int half = rng.next_int(1, 3);
    std::vector<double> th(half);
    for (double& t : th) t = rng.uniform(0.1, 1.9);
    bool pad = rng.next_below(2);
    DMat blk = block_antisymmetric(th, pad);
    DMat q = random_special_orthogonal(rng, blk.rows());
    DMat m = q * blk * q.transpose();
    auto roots = chern_roots(m);
    REQUIRE(roots.angles.size() == th.size());
    CHECK(roots.zero_modes == (pad ? 1 : 0));
    CHECK((roots.reconstruct() - m).max_abs() < 1e-10);
  }

  DMat z(4, 4);
  auto rz = chern_roots(z);
  CHECK(rz.angles.empty());
  CHECK(rz.zero_modes == 4);
}

TEST_CASE("chern roots: repeated angles") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    DMat blk = block_antisymmetric({0.9, 0.9, 0.4});
    DMat q = random_special_orthogonal(rng, 6);
    DMat m = q * blk * q.transpose();
    auto roots = chern_roots(m);
    REQUIRE(roots.angles.size() == 3);
    CHECK((roots.reconstruct() - m).max_abs() < 1e-9);
  }
}

TEST_CASE("pfaffian routes agree; square equals determinant") {
  DMat b = block_antisymmetric({0.8});
  CHECK(pfaffian_berezin(mat_cast<Cplx>(b)).real() == doctest::Approx(0.8));
  CHECK(pfaffian_recursive(mat_cast<Cplx>(b)).real() == doctest::Approx(0.8));
  CHECK(pfaffian_chern(b) == doctest::Approx(0.8));

  DMat z(2, 2);
  CHECK(pfaffian_berezin(mat_cast<Cplx>(z)) == Cplx(0.0));

  // halved block: Pf(block(th)/2) = th/2
  DMat h = block_antisymmetric({1.1}) * 0.5;
  CHECK(pfaffian_recursive(mat_cast<Cplx>(h)).real() == doctest::Approx(0.55));

  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 2 * rng.next_int(1, 3);
    // exact rational antisymmetric matrix
    Matrix<QR> a(m, m);
    DMat ad(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        long num = rng.next_int(-6, 6);
        long den = rng.next_int(1, 4);
        a(i, j) = QR::frac(num, den);
        a(j, i) = -a(i, j);
        ad(i, j) = double(num) / double(den);
        ad(j, i) = -ad(i, j);
      }
    QR p1 = pfaffian_berezin(a);
    QR p2 = pfaffian_recursive(a);
    CHECK(p1 == p2);
    CHECK(p1 * p1 == det(a));
    if (std::abs(scalar_ring<QR>::mag(p1)) > 1e-9)
      CHECK(pfaffian_chern(ad) == doctest::Approx(p1.to_complex().real()).epsilon(1e-8));
  }
}

TEST_CASE("pfaffian odd block form") {
  DMat one_block = block_antisymmetric({1.2}, true) * 0.5;
  CHECK(pfaffian_odd(mat_cast<Cplx>(one_block)).real() == doctest::Approx(0.6));
  Matrix<Cplx> single(1, 1);
  CHECK(pfaffian_odd(single) == Cplx(1.0));
  DMat two_blocks = block_antisymmetric({1.0, 0.5}, true) * 0.5;
  CHECK(pfaffian_odd(mat_cast<Cplx>(two_blocks)).real() == doctest::Approx(0.125));

  DMat bad(3, 3);
  bad(0, 2) = 1.0;
  bad(2, 0) = -1.0;
  CHECK_THROWS_AS(pfaffian_odd(mat_cast<Cplx>(bad)), std::invalid_argument);
  CHECK_THROWS_AS(pfaffian_odd(mat_cast<Cplx>(block_antisymmetric({1.0}))),
                  std::invalid_argument);
}

TEST_CASE("det_sqrt_cosh worked values and dual path") {
  DMat z(4, 4);
  CHECK(det_sqrt_cosh(z) == doctest::Approx(1.0));
  DMat b1 = block_antisymmetric({0.9});
  CHECK(det_sqrt_cosh(b1) == doctest::Approx(std::cos(0.45)));
  DMat b2 = block_antisymmetric({0.9, 1.7});
  CHECK(det_sqrt_cosh(b2) == doctest::Approx(std::cos(0.45) * std::cos(0.85)));

  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    int m = rng.next_int(2, 6);
    DMat a = random_antisymmetric(rng, m, 2.0 / m);
    if (norm_spectralish(a) > 2.0) continue;
    double closed = det_sqrt_cosh(a);
    Cplx series = det_sqrt_cosh_series(mat_cast<Cplx>(a));
    CHECK(std::abs(series - Cplx(closed)) < 1e-9);
  }
}

TEST_CASE("det_sqrt_sinhc worked values and dual path") {
  DMat z(3, 3);
  CHECK(det_sqrt_sinhc(z) == doctest::Approx(1.0));
  DMat b1 = block_antisymmetric({1.3});
  CHECK(det_sqrt_sinhc(b1) == doctest::Approx(std::sin(0.65) / 0.65));
  DMat bodd = block_antisymmetric({1.3}, true);
  CHECK(det_sqrt_sinhc(bodd) == doctest::Approx(std::sin(0.65) / 0.65));

  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    int m = rng.next_int(2, 6);
    DMat a = random_antisymmetric(rng, m, 2.0 / m);
    if (norm_spectralish(a) > 2.0) continue;
    double closed = det_sqrt_sinhc(a);
    Cplx series = det_sqrt_sinhc_series(mat_cast<Cplx>(a));
    CHECK(std::abs(series - Cplx(closed)) < 1e-9);
  }
}

TEST_CASE("a_hat worked values and dual path") {
  DMat z(2, 2);
  CHECK(a_hat(z) == doctest::Approx(1.0));
  DMat b1 = block_antisymmetric({1.1});
  double x = 1.1 / (4 * kPi);
  CHECK(a_hat(b1) == doctest::Approx(x / std::sin(x)));

  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    int m = rng.next_int(2, 6);
    DMat a = random_antisymmetric(rng, m, 2.0 / m);
    double closed = a_hat(a);
    Cplx series = a_hat_series(mat_cast<Cplx>(a));
    CHECK(std::abs(series - Cplx(closed)) < 1e-9);
  }
}

TEST_CASE("nu factor worked values and dual path") {
  // one block, theta = pi, M = 0: det(1 - g) = 4, nu = 1/2
  DMat g = block_rotation_matrix({kPi});
  Matrix<Cplx> z(2, 2);
  CHECK(nu_equivariant(g, z).real() == doctest::Approx(0.5));
  // theta = pi/2: det = 2, nu = 1/sqrt(2)
  DMat g2 = block_rotation_matrix({kPi / 2});
  CHECK(nu_equivariant(g2, z).real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    int half = rng.next_int(1, 3);
    std::vector<double> th(half);
    for (double& t : th) t = rng.angle(0.4);
    DMat rot = block_rotation_matrix(th);
    DMat m = random_antisymmetric(rng, 2 * half, 1.0);
    Cplx direct = nu_equivariant(rot, mat_cast<Cplx>(m));
    Cplx series = nu_equivariant_series(rot, mat_cast<Cplx>(m));
    CHECK(std::abs(direct - series) < 1e-9 * std::abs(direct));
  }
}

TEST_CASE("conjugation invariance of all kernels") {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 * rng.next_int(1, 3);
    DMat a = random_antisymmetric(rng, m, 1.5 / m);
    DMat q = random_special_orthogonal(rng, m);
    DMat c = q * a * q.transpose();
    CHECK(det_sqrt_cosh(c) == doctest::Approx(det_sqrt_cosh(a)).epsilon(1e-9));
    CHECK(det_sqrt_sinhc(c) == doctest::Approx(det_sqrt_sinhc(a)).epsilon(1e-9));
    CHECK(a_hat(c) == doctest::Approx(a_hat(a)).epsilon(1e-9));
    CHECK(pfaffian_chern(c) == doctest::Approx(pfaffian_chern(a)).epsilon(1e-8));
  }
}

TEST_CASE("nilpotent mode: closed vs series paths on block data") {
  // angles with nilpotent parts: theta + rho * eps
  int ngen = 2, tr = 2;
  NilPoly e0 = NilPoly::generator(0, ngen, tr);
  NilPoly e1 = NilPoly::generator(1, ngen, tr);
  std::vector<NilPoly> th = {NilPoly(0.8) + e0 * NilPoly(0.31) + e1 * NilPoly(-0.12),
                             NilPoly(1.4) + e0 * NilPoly(0.05) + e1 * NilPoly(0.44)};
  Matrix<NilPoly> m = block_antisymmetric_s(th);

  NilPoly closed = det_sqrt_cosh_angles(th);
  NilPoly series = det_sqrt_cosh_series(m);
  CHECK((closed - series).max_abs() < 1e-12);

  closed = det_sqrt_sinhc_angles(th);
  series = det_sqrt_sinhc_series(m);
  CHECK((closed - series).max_abs() < 1e-12);

  NilPoly pf_b = pfaffian_berezin(m);
  NilPoly pf_r = pfaffian_recursive(m);
  CHECK((pf_b - pf_r).max_abs() < 1e-14);
  CHECK((pf_b - th[0] * th[1]).max_abs() < 1e-14);

  // nu with a genuinely nilpotent curvature argument
  std::vector<double> rot_angles = {0.9, 2.2};
  DMat rot = block_rotation_matrix(rot_angles);
  Matrix<NilPoly> curv = block_antisymmetric_s(
      std::vector<NilPoly>{e0 * NilPoly(0.7), e1 * NilPoly(-0.3)});
  NilPoly nu_d = nu_equivariant(rot, curv);
  NilPoly nu_s = nu_equivariant_series(rot, curv);
  CHECK((nu_d - nu_s).max_abs() < 1e-12);
}

TEST_CASE("antisymmetry is validated") {
  DMat bad(2, 2);
  bad(0, 1) = 1.0;
  bad(1, 0) = 1.0;
  CHECK_THROWS_AS(chern_roots(bad), std::invalid_argument);
}

TEST_CASE("series outside its radius reports non-convergence with advice") {
  DMat big = block_antisymmetric({4.4});  // cosh series radius is pi in the angle
  CHECK_THROWS_AS(det_sqrt_cosh_series(mat_cast<Cplx>(big)), std::runtime_error);
  // the closed path stays valid there
  CHECK(det_sqrt_cosh(big) == doctest::Approx(std::cos(2.2)));
}

TEST_CASE("pole and singularity guards") {
  DMat pole = block_antisymmetric({4.0 * kPi * kPi});
  CHECK_THROWS_AS(a_hat(pole), std::domain_error);
  Matrix<Cplx> z(2, 2);
  CHECK_THROWS_AS(nu_equivariant(DMat::identity(2), z), std::domain_error);
  // near-identity rotation: (1-g)^{-1} blows up the series argument
  DMat nearly = block_rotation_matrix({0.01});
  Matrix<Cplx> bump = mat_cast<Cplx>(block_antisymmetric({1.5}));
  CHECK_THROWS_AS(nu_equivariant_series(nearly, bump), std::runtime_error);
}
