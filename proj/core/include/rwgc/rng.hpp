#pragma once

#include <cmath>
#include <cstdint>

namespace rwgc {

// MurmurHash3 64-bit finalizer. Bijective with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Counter-style stream derivation: (seed, tag, indices...) names a generator
// outright, so any policy/episode/resample cell can be recomputed in
// isolation and results never depend on evaluation order or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (tag + 1));
}
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t a) {
  return mix64(derive_seed(seed, tag) + 0x9e3779b97f4a7c15ULL * (a + 1));
}
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t a, std::uint64_t b) {
  return mix64(derive_seed(seed, tag, a) + 0x9e3779b97f4a7c15ULL * (b + 1));
}

// Stream tags. Distinct per purpose so streams never collide.
namespace stream {
inline constexpr std::uint64_t parameters = 0x01;
inline constexpr std::uint64_t episode = 0x02;
inline constexpr std::uint64_t bootstrap = 0x03;
inline constexpr std::uint64_t bound_check = 0x04;
inline constexpr std::uint64_t synthetic = 0x05;
}  // namespace stream

// splitmix64. Small, fast, and entirely determined by its 64-bit seed,
// which is what the reproducibility contract needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Box-Muller without caching: every call consumes exactly two uniforms,
  // keeping draw counts independent of call history.
  double next_normal(double stddev = 1.0) {
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return stddev * r * std::cos(two_pi * u2);
  }

  // Index in [0, n). Modulo bias is ~n/2^64, irrelevant at our n.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  static constexpr double two_pi = 6.283185307179586476925286766559;
  std::uint64_t state_;
};

}  // namespace rwgc
