// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_RNG_HPP
#define BEAMSEP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace beamsep {

// Deterministic RNG. The uniform/choice helpers are written out by hand
// because libstdc++ does not pin the output of its distribution objects
// across versions and we promise bit-identical runs for a fixed seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased integer in [0, n), rejection sampled
  uint64_t below(uint64_t n) {
    const uint64_t limit = (~uint64_t{0}) - (~uint64_t{0}) % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <typename T>
  T choice(const std::vector<T> &items) {
    return items[static_cast<size_t>(below(items.size()))];
  }

  // standard normal via Box-Muller (both values used, no state kept)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

// Per-utterance seed derivation: splitmix64 of the master seed xored with
// the utterance counter, so seeds are decorrelated and order-independent.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
  uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace beamsep

#endif  // BEAMSEP_RNG_HPP
