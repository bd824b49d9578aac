#pragma once

#include <cstdint>
#include <random>

#include "subsig/blade.hpp"

namespace subsig {

// Deterministic random source. Raw mt19937_64 output is converted to
// doubles by hand so streams are reproducible across standard libraries
// (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed ^ 0x9e3779b97f4a7c15ull) {}

  // Independent stream per (seed, trial): sharding order cannot matter.
  static Rng for_trial(uint64_t seed, uint64_t trial) {
    return Rng(seed + 0x9e3779b97f4a7c15ull * (trial + 1));
  }

  uint64_t next_u64() { return eng_(); }

  uint32_t next_below(uint32_t bound) { return uint32_t(next_u64() % bound); }

  double next_double() {  // uniform in [0,1)
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Rotation angle bounded away from the degenerate values 0 and 2*pi.
  double angle(double margin = 0.2) { return uniform(margin, 2.0 * 3.14159265358979323846 - margin); }

  int next_int(int lo, int hi) { return lo + int(next_below(uint32_t(hi - lo + 1))); }

 private:
  std::mt19937_64 eng_;
};

// Random sparse element with small integer-ish coefficients; used by the
// randomized identity suites in both exact and float mode.
template <class S>
CliffordElement<S> random_element(Rng& rng, int n, int max_terms = 6) {
  CliffordElement<S> x(n);
  int terms = rng.next_int(1, max_terms);
  for (int t = 0; t < terms; ++t) {
    BladePair b{rng.next_below(1u << n), rng.next_below(1u << n)};
    long num = rng.next_int(-4, 4);
    if (num == 0) num = 1;
    S v = scalar_ring<S>::from_int(num);
    if constexpr (scalar_ring<S>::exact) {
      if (rng.next_below(3) == 0) v = v * GaussianRational::unit_i();
      if (rng.next_below(3) == 0) v = v * GaussianRational::frac(1, rng.next_int(2, 3));
    }
    x.add_term(b, v);
  }
  if (x.is_zero()) x.add_term({0, 0}, scalar_ring<S>::one());
  return x;
}

}  // namespace subsig
