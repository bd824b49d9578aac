#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subsig/density.hpp"
#include "subsig/rng.hpp"

using namespace subsig;

namespace {

std::vector<double> random_angles(Rng& rng, int count) {
  std::vector<double> th(count);
  for (double& t : th) t = rng.angle();
  return th;
}

double rel_gap(Cplx x, Cplx y) {
  double scale = std::max({std::abs(x), std::abs(y), 1e-30});
  return std::abs(x - y) / scale;
}

}  // namespace

TEST_CASE("symbol expansion of the lift: worked half-turn") {
  // n = 2, theta = pi: lift is -c1 c2 chat1 chat2; only l2 = 2 survives.
  auto pair0 = symbol_expansion_lift<Cplx>({kPi}, 2, 0, 0);
  CHECK(pair0.lift_side.max_abs() < 1e-12);
  CHECK(pair0.closed_side.max_abs() < 1e-12);
  auto pair2 = symbol_expansion_lift<Cplx>({kPi}, 2, 0, 2);
  CHECK(std::abs(pair2.lift_side.coeff({3, 3}) - Cplx(-1.0)) < 1e-12);
  CHECK((pair2.lift_side - pair2.closed_side).max_abs() < 1e-12);
}

TEST_CASE("symbol expansion of the lift: all hat degrees, random angles") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    auto th = random_angles(rng, 2);
    for (int l2 = 0; l2 <= 5; ++l2) {  // includes one out-of-range degree
      auto pair = symbol_expansion_lift<Cplx>(th, 4, 0, l2);
      CHECK((pair.lift_side - pair.closed_side).max_abs() < 1e-10);
      if (l2 % 2 == 1) CHECK(pair.lift_side.max_abs() < 1e-12);
    }
  }
}

TEST_CASE("top symbol pair: worked block values") {
  // k = 2, n = 4, one angle per side: top coefficient cos(th/2) sin(thhat/2).
  double th = 0.9, thh = 1.7;
  Matrix<Cplx> me = mat_cast<Cplx>(block_antisymmetric({th}));
  Matrix<Cplx> mp = mat_cast<Cplx>(block_antisymmetric({thh}));
  auto pair = top_symbol_pair(me, mp, 4);
  CHECK(std::abs(pair.lhs - Cplx(std::cos(th / 2) * std::sin(thh / 2))) < 1e-12);
  CHECK(std::abs(pair.lhs - pair.rhs) < 1e-12);

  // all angles zero: both sides vanish when the complement is nontrivial
  Matrix<Cplx> z2(2, 2), z22(2, 2);
  auto zero_pair = top_symbol_pair(z2, z22, 4);
  CHECK(std::abs(zero_pair.lhs) < 1e-15);
  CHECK(std::abs(zero_pair.rhs) < 1e-15);
}

TEST_CASE("top symbol pair: random angle tuples at the suite shapes") {
  Rng rng(72);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {6, 2}, {6, 4}}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto th_e = random_angles(rng, k / 2);
      auto th_p = random_angles(rng, (n - k) / 2);
      Matrix<Cplx> me = mat_cast<Cplx>(block_antisymmetric(th_e));
      Matrix<Cplx> mp = mat_cast<Cplx>(block_antisymmetric(th_p));
      auto pair = top_symbol_pair(me, mp, n);
      CHECK(rel_gap(pair.lhs, pair.rhs) < 1e-9);
    }
  }
}

TEST_CASE("top symbol pair: odd side with trailing zero block") {
  Rng rng(73);
  for (int trial = 0; trial < 25; ++trial) {
    auto th_e = random_angles(rng, 1);
    auto th_p = random_angles(rng, 1);
    Matrix<Cplx> me = mat_cast<Cplx>(block_antisymmetric(th_e));
    Matrix<Cplx> mp = mat_cast<Cplx>(block_antisymmetric(th_p, true));
    auto pair = top_symbol_pair(me, mp, 5);
    CHECK(rel_gap(pair.lhs, pair.rhs) < 1e-10);
  }
}

TEST_CASE("model kernel value: prefactor and exponential factor") {
  auto d = make_fixed_point<Cplx>(4, 0, 2, {1.1, 2.3});
  auto mk = model_kernel_value(d, 1.0);
  double det_g = 16.0 * std::pow(std::sin(0.55) * std::sin(1.15), 2.0);
  CHECK(std::abs(mk.prefactor - Cplx(1.0 / det_g)) < 1e-12);

  // exponential factor: per-plane closed form against the series
  CliffordElement<Cplx> want(4);
  want.add_term({0, 0}, Cplx(std::cos(0.55) * std::cos(1.15)));
  want.add_term({0, 0b0011}, Cplx(std::sin(0.55) * std::cos(1.15)));
  want.add_term({0, 0b1100}, Cplx(std::cos(0.55) * std::sin(1.15)));
  want.add_term({0, 0b1111}, Cplx(std::sin(0.55) * std::sin(1.15)));
  CHECK((mk.exp_factor - want).max_abs() < 1e-12);

  CHECK(mk.chat_factor.coeff({0, 0b0011}) == imaginary_power<Cplx>(1));

  // time scaling of the exponential factor argument
  auto mk2 = model_kernel_value(d, 0.5);
  CliffordElement<Cplx> want2(4);
  want2.add_term({0, 0}, Cplx(std::cos(0.275) * std::cos(0.575)));
  want2.add_term({0, 0b0011}, Cplx(std::sin(0.275) * std::cos(0.575)));
  want2.add_term({0, 0b1100}, Cplx(std::cos(0.275) * std::sin(0.575)));
  want2.add_term({0, 0b1111}, Cplx(std::sin(0.275) * std::sin(0.575)));
  CHECK((mk2.exp_factor - want2).max_abs() < 1e-12);
}

TEST_CASE("model kernel prefactor is time independent at an isolated fixed point") {
  auto d = make_fixed_point<Cplx>(4, 0, 0, {0.8, 1.4});
  Cplx base = model_kernel_value(d, 1.0).prefactor;
  for (double t : {0.25, 0.5, 2.0, 7.0})
    CHECK(std::abs(model_kernel_value(d, t).prefactor - base) < 1e-14);
}

TEST_CASE("even density: worked closed values at isolated fixed points") {
  // k = 0: the pairing collapses to the classical fixed-point count 1.
  for (double th : {0.7, kPi, 2.9}) {
    auto d = make_fixed_point<Cplx>(2, 0, 0, {th});
    CHECK(rel_gap(lhs_density(d), Cplx(1.0)) < 1e-12);
    CHECK(rel_gap(rhs_density(d), Cplx(1.0)) < 1e-12);
  }
  // k = 2, n = 4: -i cot(theta_1into/2)
  auto d42 = make_fixed_point<Cplx>(4, 0, 2, {0.9, 2.1});
  Cplx want = Cplx(0, -1) * Cplx(std::cos(0.45) / std::sin(0.45));
  CHECK(rel_gap(lhs_density(d42), want) < 1e-12);
  CHECK(rel_gap(rhs_density(d42), want) < 1e-12);
  // k = 4, n = 6: -cot(theta_1/2) cot(theta_2/2)
  auto d64 = make_fixed_point<Cplx>(6, 0, 4, {0.8, 1.9, 2.6});
  Cplx want64 = Cplx(-std::cos(0.4) / std::sin(0.4) * std::cos(0.95) / std::sin(0.95));
  CHECK(rel_gap(lhs_density(d64), want64) < 1e-12);
  CHECK(rel_gap(rhs_density(d64), want64) < 1e-12);
}

TEST_CASE("even density: two paths agree on random data") {
  Rng rng(74);
  for (int n : {2, 4, 6}) {
    for (int k = 0; k <= n - 2; k += 2) {
      for (int trial = 0; trial < 50; ++trial) {
        auto d = make_fixed_point<Cplx>(n, 0, k, random_angles(rng, n / 2));
        CHECK(rel_gap(lhs_density(d), rhs_density(d)) < 1e-8);
      }
    }
  }
}

TEST_CASE("even density at a = 0 equals the plain blade supertrace route") {
  Rng rng(75);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 * rng.next_int(1, 3);
    int k = 2 * rng.next_int(0, (n - 2) / 2);
    auto d = make_fixed_point<Cplx>(n, 0, k, random_angles(rng, n / 2));

    DMat g = d.normal_rotation();
    double det_g = det(DMat::identity(n) - g);
    auto full = rotation_lift<Cplx>(d.phi_angles, n, 0) * chat_word<Cplx>(n, k);
    Cplx direct = blade_supertrace(full) * imaginary_power<Cplx>(k / 2) / det_g;
    CHECK(rel_gap(direct, lhs_density(d)) < 1e-11);
  }
}

TEST_CASE("density validation rejects a subbundle spanning all normal planes") {
  CHECK_THROWS_AS(make_fixed_point<Cplx>(4, 0, 4, {0.9, 2.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_fixed_point<Cplx>(4, 0, 3, {0.9, 2.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_fixed_point<Cplx>(4, 0, 2, {0.9}), std::invalid_argument);
  CHECK_THROWS_AS(make_fixed_point<Cplx>(4, 0, 2, {0.0, 1.0}), std::domain_error);
}

TEST_CASE("odd density: worked values and random agreement") {
  // n = 3, k = 0: both paths give 1
  for (double th : {0.6, 1.9}) {
    auto d = make_fixed_point<Cplx>(3, 0, 0, {th}, true);
    auto pair = odd_density_pair(d);
    CHECK(rel_gap(pair.lhs, Cplx(1.0)) < 1e-12);
    CHECK(rel_gap(pair.rhs, Cplx(1.0)) < 1e-12);
  }
  // n = 3, k = 2: -i cot(theta/2)
  auto d32 = make_fixed_point<Cplx>(3, 0, 2, {1.3}, true);
  Cplx want = Cplx(0, -1) * Cplx(std::cos(0.65) / std::sin(0.65));
  auto pair32 = odd_density_pair(d32);
  CHECK(rel_gap(pair32.lhs, want) < 1e-12);
  CHECK(rel_gap(pair32.rhs, want) < 1e-12);

  Rng rng(76);
  for (int n : {3, 5}) {
    for (int k : {0, 2}) {
      for (int trial = 0; trial < 50; ++trial) {
        auto d = make_fixed_point<Cplx>(n, 0, k, random_angles(rng, (n - 1) / 2), true);
        auto pair = odd_density_pair(d);
        CHECK(rel_gap(pair.lhs, pair.rhs) < 1e-8);
      }
    }
  }
}

TEST_CASE("parity-twisted lift equals the grading times the reflecting lift") {
  Rng rng(77);
  auto th = random_angles(rng, 2);
  int n = 5;
  auto d = make_fixed_point<Cplx>(n, 0, 2, th, true);
  auto gamma = plane_lift_product<Cplx>(th, n, 0) * reflection_lift<Cplx>(n, n);
  auto twisted = grading_element<Cplx>(n) * gamma;
  CHECK((twisted - parity_twisted_lift(d)).max_abs() < 1e-12);

  // and the reflecting lift itself matches the exterior-power oracle
  auto lm = to_double_matrix(rep(gamma));
  auto om = pullback_lift(th, n, 0, true);
  double err = 0;
  for (int i = 0; i < lm.rows(); ++i)
    for (int j = 0; j < lm.cols(); ++j) err = std::max(err, std::abs(lm(i, j) - om(i, j)));
  CHECK(err < 1e-10);
}

TEST_CASE("nilpotent mode: densities agree at a positive-dimensional fixed set") {
  // a = 2 = k: the subbundle is the fixed plane; one normal plane.
  int ngen = 1, tr = 1;
  auto eps = NilPoly::generator(0, ngen, tr);
  auto d = make_fixed_point<NilPoly>(4, 2, 2, {1.15});
  d.Rprime = block_antisymmetric_s(std::vector<NilPoly>{eps * NilPoly(0.83)});
  d.Rdoubleprime = block_antisymmetric_s(std::vector<NilPoly>{eps * NilPoly(-0.41)});
  d.RE = block_antisymmetric_s(std::vector<NilPoly>{eps * NilPoly(0.37)});
  d.REperp = block_antisymmetric_s(std::vector<NilPoly>{eps * NilPoly(0.59)});

  NilPoly lhs = lhs_density(d);
  NilPoly rhs = rhs_density(d);
  Cplx lt = form_top_coeff(lhs, 2), rt = form_top_coeff(rhs, 2);
  CHECK(rel_gap(lt, rt) < 1e-10);
  CHECK(std::abs(lt) > 1e-12);  // the comparison is not vacuous
}

TEST_CASE("nilpotent mode: general (non-block) curvature data at a > 0") {
  Rng rng(78);
  for (int trial = 0; trial < 5; ++trial) {
    int ngen = 2, tr = 2;
    auto e0 = NilPoly::generator(0, ngen, tr);
    auto e1 = NilPoly::generator(1, ngen, tr);
    auto rand_entry = [&](double s) {
      return e0 * NilPoly(rng.uniform(-s, s)) + e1 * NilPoly(rng.uniform(-s, s));
    };
    auto rand_antisym = [&](int m, double s) {
      Matrix<NilPoly> r(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          r(i, j) = rand_entry(s);
          r(j, i) = -r(i, j);
        }
      return r;
    };
    // a = 4 = k: two fixed planes; one normal plane; dense curvature entries.
    auto d = make_fixed_point<NilPoly>(6, 4, 4, {rng.uniform(0.3, 2.4)});
    d.Rprime = rand_antisym(4, 0.8);
    d.Rdoubleprime = rand_antisym(2, 0.8);
    d.RE = rand_antisym(4, 0.8);
    d.REperp = rand_antisym(2, 0.8);
    Cplx lt = form_top_coeff(lhs_density(d), 4);
    Cplx rt = form_top_coeff(rhs_density(d), 4);
    CHECK(rel_gap(lt, rt) < 1e-9);
  }
}

TEST_CASE("nilpotent mode: subbundle inside the fixed set (k < a)") {
  // a = 2, k = 0: the complement holds both the fixed plane and the
  // rotating one; exercises the fixed-complement pairing branch.
  Rng rng(79);
  for (int trial = 0; trial < 5; ++trial) {
    int ngen = 1, tr = 1;
    auto eps = NilPoly::generator(0, ngen, tr);
    auto d = make_fixed_point<NilPoly>(4, 2, 0, {rng.uniform(0.3, 2.4)});
    auto rand_block = [&](double s) {
      return block_antisymmetric_s(std::vector<NilPoly>{eps * NilPoly(rng.uniform(-s, s))});
    };
    d.Rprime = rand_block(0.9);
    d.Rdoubleprime = rand_block(0.9);
    Matrix<NilPoly> rp(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        rp(i, j) = eps * NilPoly(rng.uniform(-0.7, 0.7));
        rp(j, i) = -rp(i, j);
      }
    d.REperp = rp;
    Cplx lt = form_top_coeff(lhs_density(d), 2);
    Cplx rt = form_top_coeff(rhs_density(d), 2);
    double scale = std::max({std::abs(lt), std::abs(rt), 1e-30});
    CHECK(std::abs(lt - rt) / scale < 1e-9);
  }
}

TEST_CASE("rotation lift with fixed coordinates matches the oracle") {
  Rng rng(80);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> th = {rng.angle()};
    auto lift = rotation_lift<Cplx>(th, 4, 2);
    auto lm = to_double_matrix(rep(lift));
    auto om = pullback_lift(th, 4, 2);
    double err = 0;
    for (int i = 0; i < lm.rows(); ++i)
      for (int j = 0; j < lm.cols(); ++j) err = std::max(err, std::abs(lm(i, j) - om(i, j)));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("symbol expansion of the lift: larger shapes and fixed coordinates") {
  Rng rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    auto th6 = random_angles(rng, 3);
    for (int l2 = 0; l2 <= 6; l2 += 2) {
      auto pair = symbol_expansion_lift<Cplx>(th6, 6, 0, l2);
      CHECK((pair.lift_side - pair.closed_side).max_abs() < 1e-10);
    }
    auto th42 = random_angles(rng, 1);
    for (int l2 = 0; l2 <= 2; ++l2) {
      auto pair = symbol_expansion_lift<Cplx>(th42, 4, 2, l2);
      CHECK((pair.lift_side - pair.closed_side).max_abs() < 1e-10);
    }
  }
}

TEST_CASE("top symbol pair from fixed-point data matches the block route") {
  auto d = make_fixed_point<Cplx>(4, 0, 2, {0.9, 2.1});
  auto from_data = top_symbol_pair(d);
  auto me = mat_cast<Cplx>(block_antisymmetric({0.9}));
  auto mp = mat_cast<Cplx>(block_antisymmetric({2.1}));
  auto from_blocks = top_symbol_pair(me, mp, 4);
  CHECK(std::abs(from_data.lhs - from_blocks.lhs) < 1e-14);
  CHECK(std::abs(from_data.rhs - from_blocks.rhs) < 1e-14);
  CHECK(std::abs(from_data.lhs - from_data.rhs) < 1e-12);
}

TEST_CASE("positive-dimensional fixed sets require the nilpotent ring") {
  auto d = make_fixed_point<Cplx>(4, 2, 2, {1.0});
  CHECK_THROWS_AS(lhs_density(d), std::invalid_argument);
  CHECK_THROWS_AS(rhs_density(d), std::invalid_argument);
}
