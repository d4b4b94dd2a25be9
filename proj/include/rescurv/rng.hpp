#pragma once

#include <cmath>
#include <cstdint>

namespace rescurv {

// Counter-based splittable RNG. Every random quantity in the library is
// derived from one user-supplied 64-bit seed through derive() chains, so
// experiments are reproducible bit-for-bit regardless of evaluation order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // Independent child stream; deterministic in (parent seed, stream id).
  Rng derive(std::uint64_t stream) const {
    return Rng(mix(state_ ^ mix(stream + 0xbf58476d1ce4e5b9ull)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., bound-1}, rejection-sampled to avoid modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  bool bernoulli(double prob) { return next_double() < prob; }

  // Knuth multiplication method applied to unit-mean slices, so large means
  // do not underflow exp(-mean).
  long poisson(double mean) {
    long count = 0;
    while (mean > 0) {
      const double slice = std::min(mean, 32.0);
      double limit = std::exp(-slice);
      double prod = next_double();
      while (prod > limit) {
        ++count;
        prod *= next_double();
      }
      mean -= slice;
    }
    return count;
  }

private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t state_;
};

}  // namespace rescurv
