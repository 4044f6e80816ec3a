#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace admaiora {

// Seeded random stream with explicit transforms so that a given seed yields
// the same draws on every platform and standard library. Child streams for
// independent subsystems (topology, shadowing, traffic per node, ...) are
// derived from the construction seed, not from the stream position.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  RngStream derive(std::uint64_t salt) const {
    return RngStream(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1))));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    auto v = static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Fixed salts for the per-run subsystem streams.
inline constexpr std::uint64_t kTopologyStream = 1;
inline constexpr std::uint64_t kShadowingStream = 2;
inline constexpr std::uint64_t kAllocationStream = 3;
inline constexpr std::uint64_t kTrafficStream = 4;

}  // namespace admaiora
