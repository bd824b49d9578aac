#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdlib>
#include <functional>

#include "subsig/density.hpp"
#include "subsig/mehler_fd.hpp"
#include "subsig/report.hpp"
#include "subsig/rng.hpp"

namespace subsig {

// Named verification suites behind the `verify` subcommand. Every suite is
// deterministic in (seed, params): trials are sharded across a worker pool
// with one independent random stream per trial index, and results are
// collected in trial order, so the report bytes cannot depend on the
// scheduling.

struct SuiteParams {
  std::string suite;
  int n = 0;         // 0 selects the suite default
  int a = 0;
  int k = -1;        // -1 selects the suite default
  int trials = 0;    // 0 selects the suite default
  uint64_t seed = 1;
  std::string mode;  // informational; validated against the suite
  double tol = 0;    // 0 selects the suite default
};

inline void configure_workers() {
#ifdef _OPENMP
  if (const char* env = std::getenv("SUBSIG_THREADS")) {
    int want = std::atoi(env);
    if (want > 0) omp_set_num_threads(want);
  }
#endif
}

namespace detail {

template <class F>
void run_trials(SuiteReport& rep, int count, uint64_t seed, F&& fn, int index_offset = 0) {
  std::vector<TrialResult> results;
  results.resize(size_t(count));
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < count; ++t) {
    Rng rng = Rng::for_trial(seed, uint64_t(t));
    TrialResult r;
    try {
      r = fn(t, rng);
    } catch (const std::exception& e) {
      r.pass = false;
      r.max_err = std::numeric_limits<double>::infinity();
      r.note = e.what();
    }
    r.index = t + index_offset;
    results[size_t(t)] = std::move(r);
  }
  for (auto& r : results) rep.add(std::move(r));
}

inline double rel_err(Cplx x, Cplx y) {
  double scale = std::max({std::abs(x), std::abs(y), 1e-30});
  return std::abs(x - y) / scale;
}

inline void check_mode(const SuiteParams& p, std::initializer_list<const char*> allowed) {
  if (p.mode.empty()) return;
  for (const char* m : allowed)
    if (p.mode == m) return;
  throw std::invalid_argument("suite `" + p.suite + "` does not run in mode `" + p.mode + "`");
}

using QR = GaussianRational;
using EQ = CliffordElement<QR>;

inline DMat random_antisymmetric(Rng& rng, int m, double scale) {
  DMat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double v = rng.uniform(-scale, scale);
      a(i, j) = v;
      a(j, i) = -v;
    }
  return a;
}

inline std::vector<double> random_angles(Rng& rng, int count) {
  std::vector<double> th(count);
  for (double& t : th) t = rng.angle();
  return th;
}

// --------------------------------------------------------------- suites --

inline SuiteReport suite_clifford_relations(const SuiteParams& p) {
  check_mode(p, {"exact"});
  int nmax = p.n > 0 ? p.n : 6;
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "exact";
  out.seed = p.seed;
  out.params = json{{"n_max", nmax}};
  run_trials(out, nmax, p.seed, [&](int t, Rng&) {
    int n = t + 1;
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i)
      for (int j = 1; j <= n && ok; ++j) {
        EQ ci = EQ::c_gen(n, i), cj = EQ::c_gen(n, j);
        EQ hi = EQ::h_gen(n, i), hj = EQ::h_gen(n, j);
        QR delta = (i == j) ? QR(2) : QR(0);
        ok = ok && (ci * cj + cj * ci == EQ::scalar(n, -delta));
        ok = ok && (hi * hj + hj * hi == EQ::scalar(n, delta));
        ok = ok && (ci * hj + hj * ci == EQ::zero(n));
      }
    return TrialResult{t, ok, 0.0, "n=" + std::to_string(n)};
  });
  return out;
}

inline SuiteReport suite_word_supertrace(const SuiteParams& p) {
  check_mode(p, {"exact"});
  int nmax = p.n > 0 ? p.n : 5;
  int per_n = p.trials > 0 ? p.trials : 500;
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "exact";
  out.seed = p.seed;
  out.params = json{{"n_max", nmax}, {"trials_per_n", per_n}};
  // deterministic closed-form word values first
  run_trials(out, nmax, p.seed, [&](int t, Rng&) {
    int n = t + 1;
    EQ w = EQ::one(n);
    for (int i = 1; i <= n; ++i) w = w * EQ::c_gen(n, i);
    for (int i = 1; i <= n; ++i) w = w * EQ::h_gen(n, i);
    QR want = supertrace_scale<QR>(n);
    bool ok = blade_supertrace(w) == want && oracle_supertrace(w) == want;
    if (n >= 2) {
      EQ sub = EQ::blade(n, 0, full_mask(n - 1));  // proper subword
      ok = ok && blade_supertrace(sub) == QR(0) && oracle_supertrace(sub) == QR(0);
    }
    return TrialResult{t, ok, 0.0, "word n=" + std::to_string(n)};
  });
  run_trials(out, nmax * per_n, p.seed + 1, [&](int t, Rng& rng) {
    int n = 1 + t / per_n;
    EQ x = random_element<QR>(rng, n);
    bool ok = blade_supertrace(x) == oracle_supertrace(x);
    return TrialResult{t, ok, 0.0, ""};
  }, nmax);
  return out;
}

inline SuiteReport suite_tau_square(const SuiteParams& p) {
  check_mode(p, {"exact"});
  int nmax = p.n > 0 ? p.n : 6;
  std::vector<std::pair<int, int>> shapes;
  for (int n = 1; n <= nmax; ++n)
    for (int k = 0; k <= n; ++k) shapes.emplace_back(n, k);
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "exact";
  out.seed = p.seed;
  out.params = json{{"n_max", nmax}};
  run_trials(out, int(shapes.size()), p.seed, [&](int t, Rng&) {
    auto [n, k] = shapes[size_t(t)];
    auto m = rep_mul(rep(make_tau<QR>(n, k).as_element()), rep(make_tau<QR>(n, k).as_element()));
    QR want = ((k * (k + 1) / 2) % 2) ? QR(-1) : QR(1);
    bool ok = true;
    for (int i = 0; i < m.rows() && ok; ++i)
      for (int j = 0; j < m.cols() && ok; ++j)
        ok = m(i, j) == (i == j ? want : QR(0));
    return TrialResult{t, ok, 0.0, "n=" + std::to_string(n) + " k=" + std::to_string(k)};
  });
  return out;
}

inline SuiteReport suite_rotation_lift(const SuiteParams& p) {
  check_mode(p, {"float"});
  double tol = p.tol > 0 ? p.tol : 1e-10;
  int per_n = p.trials > 0 ? p.trials : 100;
  std::vector<int> dims = p.n > 0 ? std::vector<int>{p.n} : std::vector<int>{2, 4};
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "float";
  out.seed = p.seed;
  out.params = json{{"dims", dims}, {"trials_per_n", per_n}, {"tol", tol}};
  run_trials(out, int(dims.size()) * per_n, p.seed, [&](int t, Rng& rng) {
    int n = dims[size_t(t) / per_n];
    auto angles = random_angles(rng, n / 2);
    auto lm = to_double_matrix(rep(rotation_lift<Cplx>(angles, n, 0)));
    auto om = pullback_lift(angles, n, 0);
    double err = 0;
    for (int i = 0; i < lm.rows(); ++i)
      for (int j = 0; j < lm.cols(); ++j) err = std::max(err, std::abs(lm(i, j) - om(i, j)));
    return TrialResult{t, err <= tol, err, ""};
  });
  return out;
}

inline SuiteReport suite_lift_symbol_expansion(const SuiteParams& p) {
  check_mode(p, {"float"});
  double tol = p.tol > 0 ? p.tol : 1e-10;
  int trials = p.trials > 0 ? p.trials : 50;
  int n = p.n > 0 ? p.n : 4;
  int a = p.a;
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "float";
  out.seed = p.seed;
  out.params = json{{"n", n}, {"a", a}, {"trials", trials}, {"tol", tol}};
  run_trials(out, trials, p.seed, [&](int t, Rng& rng) {
    auto angles = random_angles(rng, (n - a) / 2);
    double err = 0;
    for (int l2 = 0; l2 <= n - a + 1; ++l2) {
      auto pair = symbol_expansion_lift<Cplx>(angles, n, a, l2);
      err = std::max(err, (pair.lift_side - pair.closed_side).max_abs());
    }
    return TrialResult{t, err <= tol, err, ""};
  });
  return out;
}

inline SuiteReport suite_top_symbol(const SuiteParams& p) {
  check_mode(p, {"float"});
  double tol = p.tol > 0 ? p.tol : 1e-9;
  int per_shape = p.trials > 0 ? p.trials : 100;
  std::vector<std::pair<int, int>> shapes;
  if (p.n > 0)
    shapes.emplace_back(p.n, p.k >= 0 ? p.k : 2);
  else
    shapes = {{4, 2}, {6, 2}, {6, 4}};
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "float";
  out.seed = p.seed;
  out.params = json{{"trials_per_shape", per_shape}, {"tol", tol}};
  for (auto [n, k] : shapes) {
    out.params["shapes"].push_back({n, k});
  }
  run_trials(out, int(shapes.size()) * per_shape, p.seed, [&](int t, Rng& rng) {
    auto [n, k] = shapes[size_t(t) / per_shape];
    auto me = mat_cast<Cplx>(block_antisymmetric(random_angles(rng, k / 2)));
    auto mp = mat_cast<Cplx>(block_antisymmetric(random_angles(rng, (n - k) / 2)));
    auto pair = top_symbol_pair(me, mp, n);
    double err = rel_err(pair.lhs, pair.rhs);
    return TrialResult{t, err <= tol, err, ""};
  });
  return out;
}

inline SuiteReport suite_charforms(const SuiteParams& p) {
  check_mode(p, {"float", "exact", "nilpotent"});
  double tol = p.tol > 0 ? p.tol : 1e-9;
  int trials = p.trials > 0 ? p.trials : 60;
  SuiteReport out;
  out.suite = p.suite;
  out.mode = p.mode.empty() ? "float" : p.mode;
  out.seed = p.seed;
  out.params = json{{"trials", trials}, {"tol", tol}};
  // float: closed (Chern root) path against the power series, spectral
  // norm drawn inside the promised |M| <= 2 domain
  run_trials(out, trials, p.seed, [&](int t, Rng& rng) {
    int m = 2 * rng.next_int(1, 3);
    DMat a = random_antisymmetric(rng, m, 1.0);
    double top = 0.0;
    for (double th : chern_roots(a).angles) top = std::max(top, th);
    a = a * (rng.uniform(0.1, 2.0) / std::max(top, 1e-9));
    auto ac = mat_cast<Cplx>(a);
    double err = 0;
    err = std::max(err, std::abs(det_sqrt_cosh_series(ac) - Cplx(det_sqrt_cosh(a))));
    err = std::max(err, std::abs(det_sqrt_sinhc_series(ac) - Cplx(det_sqrt_sinhc(a))));
    err = std::max(err, std::abs(a_hat_series(ac) - Cplx(a_hat(a))));
    err = std::max(err, std::abs(pfaffian_berezin(ac) - Cplx(pfaffian_chern(a))));
    std::vector<double> th = random_angles(rng, m / 2);
    DMat rot = block_rotation_matrix(th);
    err = std::max(err, std::abs(nu_equivariant_series(rot, ac) - nu_equivariant(rot, ac)));
    return TrialResult{t, err <= tol, err, "float-dual"};
  });
  // exact: Pfaffian routes and Pf^2 = det over the rationals
  run_trials(out, trials, p.seed + 1, [&](int t, Rng& rng) {
    int m = 2 * rng.next_int(1, 3);
    Matrix<QR> a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        a(i, j) = QR::frac(rng.next_int(-6, 6), rng.next_int(1, 4));
        a(j, i) = -a(i, j);
      }
    QR pf = pfaffian_berezin(a);
    bool ok = pf == pfaffian_recursive(a) && pf * pf == det(a);
    return TrialResult{t, ok, 0.0, "exact-pf"};
  }, trials);
  // nilpotent: closed block form against the series at truncation order
  run_trials(out, trials, p.seed + 2, [&](int t, Rng& rng) {
    int half = rng.next_int(1, 2);
    int ngen = 2, tr = 2;
    std::vector<NilPoly> th;
    th.resize(size_t(half));
    for (auto& v : th) {
      v = NilPoly(rng.uniform(0.3, 2.4));
      for (int gidx = 0; gidx < ngen; ++gidx)
        v = v + NilPoly::generator(gidx, ngen, tr) * NilPoly(rng.uniform(-0.5, 0.5));
    }
    auto m = block_antisymmetric_s(th);
    double err = 0;
    err = std::max(err, (det_sqrt_cosh_angles(th) - det_sqrt_cosh_series(m)).max_abs());
    err = std::max(err, (det_sqrt_sinhc_angles(th) - det_sqrt_sinhc_series(m)).max_abs());
    NilPoly pf_want = scalar_ring<NilPoly>::one();
    for (const auto& v : th) pf_want = pf_want * v;
    err = std::max(err, (pfaffian_berezin(m) - pf_want).max_abs());
    return TrialResult{t, err <= tol, err, "nilpotent-dual"};
  }, 2 * trials);
  return out;
}

inline SuiteReport suite_density_even(const SuiteParams& p) {
  check_mode(p, {"float"});
  double tol = p.tol > 0 ? p.tol : 1e-8;
  int per_shape = p.trials > 0 ? p.trials : 50;
  std::vector<std::pair<int, int>> shapes;
  if (p.n > 0) {
    for (int k = (p.k >= 0 ? p.k : 0); k <= (p.k >= 0 ? p.k : p.n - 2); k += 2)
      shapes.emplace_back(p.n, k);
  } else {
    for (int n : {2, 4, 6})
      for (int k = 0; k <= n - 2; k += 2) shapes.emplace_back(n, k);
  }
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "float";
  out.seed = p.seed;
  out.params = json{{"trials_per_shape", per_shape}, {"tol", tol}};
  for (auto [n, k] : shapes) out.params["shapes"].push_back({n, k});
  run_trials(out, int(shapes.size()) * per_shape, p.seed, [&](int t, Rng& rng) {
    auto [n, k] = shapes[size_t(t) / per_shape];
    auto d = make_fixed_point<Cplx>(n, 0, k, random_angles(rng, n / 2));
    double err = rel_err(lhs_density(d), rhs_density(d));
    return TrialResult{t, err <= tol, err,
                       "n=" + std::to_string(n) + " k=" + std::to_string(k)};
  });
  return out;
}

inline SuiteReport suite_density_odd(const SuiteParams& p) {
  check_mode(p, {"float"});
  double tol = p.tol > 0 ? p.tol : 1e-8;
  int per_shape = p.trials > 0 ? p.trials : 50;
  std::vector<std::pair<int, int>> shapes;
  if (p.n > 0) {
    shapes.emplace_back(p.n, p.k >= 0 ? p.k : 0);
  } else {
    for (int n : {3, 5})
      for (int k : {0, 2}) shapes.emplace_back(n, k);
  }
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "float";
  out.seed = p.seed;
  out.params = json{{"trials_per_shape", per_shape}, {"tol", tol}};
  for (auto [n, k] : shapes) out.params["shapes"].push_back({n, k});
  run_trials(out, int(shapes.size()) * per_shape, p.seed, [&](int t, Rng& rng) {
    auto [n, k] = shapes[size_t(t) / per_shape];
    auto d = make_fixed_point<Cplx>(n, 0, k, random_angles(rng, (n - 1) / 2), true);
    auto pair = odd_density_pair(d);
    double err = rel_err(pair.lhs, pair.rhs);
    return TrialResult{t, err <= tol, err,
                       "n=" + std::to_string(n) + " k=" + std::to_string(k)};
  });
  return out;
}

inline SuiteReport suite_mehler_oracle(const SuiteParams& p) {
  check_mode(p, {"float"});
  double tol = p.tol > 0 ? p.tol : 1e-3;
  SuiteReport out;
  out.suite = p.suite;
  out.mode = "float";
  out.seed = p.seed;
  out.params = json{{"theta", 0.5}, {"t", 0.5}, {"base_grid", 33}, {"levels", 3},
                             {"tol", tol}};
  run_trials(out, 2, p.seed, [&](int t, Rng&) {
    if (t == 0) {
      OscillatorSpec spec;
      spec.m = 2;
      spec.B = DMat(2, 2);
      spec.npoints = 65;
      double err = std::abs(fd_heat_trace(spec, 0.5) - 1.0);
      return TrialResult{t, err <= tol, err, "free-kernel"};
    }
    OscillatorSpec spec;
    spec.m = 2;
    spec.B = block_antisymmetric({0.5});
    spec.npoints = 33;
    auto pts = fd_convergence_study(spec, 0.5, 3);
    double r1 = pts[0].error / pts[1].error;
    double r2 = pts[1].error / pts[2].error;
    bool ok = pts[2].error <= tol && r1 > 2.5 && r1 < 6.5 && r2 > 2.5 && r2 < 6.5;
    char note[128];
    std::snprintf(note, sizeof note, "err=%.3g order-ratios=%.2f,%.2f", pts[2].error, r1, r2);
    return TrialResult{t, ok, pts[2].error, note};
  });
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "clifford-relations", "lemma-3.11",  "tau-square",   "rotation-lift", "eq-3.31",
      "lemma-3.19",         "charforms",   "density-even", "density-odd",   "mehler-oracle"};
  return names;
}

inline SuiteReport run_suite(const SuiteParams& p) {
  configure_workers();
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  if (p.suite == "clifford-relations")
    rep = detail::suite_clifford_relations(p);
  else if (p.suite == "lemma-3.11")
    rep = detail::suite_word_supertrace(p);
  else if (p.suite == "tau-square")
    rep = detail::suite_tau_square(p);
  else if (p.suite == "rotation-lift")
    rep = detail::suite_rotation_lift(p);
  else if (p.suite == "eq-3.31")
    rep = detail::suite_lift_symbol_expansion(p);
  else if (p.suite == "lemma-3.19")
    rep = detail::suite_top_symbol(p);
  else if (p.suite == "charforms")
    rep = detail::suite_charforms(p);
  else if (p.suite == "density-even")
    rep = detail::suite_density_even(p);
  else if (p.suite == "density-odd")
    rep = detail::suite_density_odd(p);
  else if (p.suite == "mehler-oracle")
    rep = detail::suite_mehler_oracle(p);
  else
    throw std::invalid_argument("unknown suite `" + p.suite + "`");
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace subsig
