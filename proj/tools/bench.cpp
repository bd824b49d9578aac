// Serial-versus-parallel timing for the three hot kernels: oracle matrix
// products, sharded identity trials, and the finite-difference stencil.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>

#include "subsig/suites.hpp"

using namespace subsig;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double time_ms(F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return ms_since(t0);
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace

int main() {
  int hw = 1;
#ifdef _OPENMP
  hw = omp_get_max_threads();
#endif
  std::printf("benchmark: serial reference vs OpenMP kernels (max threads %d)\n\n", hw);

  // 1. oracle representation product, n = 8 (256 x 256 doubles)
  {
    int n = 8;
    Rng rng(42);
    auto x = random_element<Cplx>(rng, n, 60);
    auto y = random_element<Cplx>(rng, n, 60);
    auto mx = rep(x), my = rep(y);
    volatile double sink = 0;
    double serial = time_ms([&] {
      auto m = rep_mul_serial(mx, my);
      sink = sink + scalar_ring<Cplx>::mag(m(0, 0));
    });
    set_threads(hw);
    double parallel = time_ms([&] {
      auto m = rep_mul(mx, my);
      sink = sink + scalar_ring<Cplx>::mag(m(0, 0));
    });
    std::printf("rep product (2^8)      serial %8.1f ms   omp %8.1f ms   speedup %.2fx\n", serial,
                parallel, serial / parallel);
  }

  // 2. sharded supertrace-agreement trials (the lemma-3.11 suite body)
  {
    SuiteParams p;
    p.suite = "lemma-3.11";
    p.trials = 400;
    set_threads(1);
    double serial = time_ms([&] { run_suite(p); });
    set_threads(hw);
    double parallel = time_ms([&] { run_suite(p); });
    std::printf("supertrace trials      serial %8.1f ms   omp %8.1f ms   speedup %.2fx\n", serial,
                parallel, serial / parallel);
  }

  // 3. finite-difference oscillator stencil
  {
    OscillatorSpec spec;
    spec.m = 2;
    spec.B = block_antisymmetric({0.5});
    spec.npoints = 257;
    double serial = time_ms([&] { fd_heat_trace(spec, 0.5, false); });
    set_threads(hw);
    double parallel = time_ms([&] { fd_heat_trace(spec, 0.5, true); });
    std::printf("fd stencil (257^2)     serial %8.1f ms   omp %8.1f ms   speedup %.2fx\n", serial,
                parallel, serial / parallel);
  }
  return 0;
}
