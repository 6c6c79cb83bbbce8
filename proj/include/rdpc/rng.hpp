#pragma once

#include <cstdint>

#include "rdpc/prob.hpp"

namespace rdpc {

/// Purpose tags for derived random streams. Streams derived from distinct
/// (purpose, index) pairs are independent, so parallel work stays
/// reproducible regardless of scheduling.
enum class StreamPurpose : std::uint64_t {
  kCodebook = 1,
  kSource = 2,
  kCommonRandomness = 3,
  kEncoder = 4,
  kDecoder = 5,
  kSweep = 6,
  kBootstrap = 7,
  kSearch = 8,
};

/// Counter-based random stream: each output is a splitmix64 finalizer
/// applied to (base + counter), so draw k of a stream is a pure function
/// of (seed, purpose, index, k).
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index)
      : base_(derive(seed, static_cast<std::uint64_t>(purpose), index)), counter_(0) {}

  std::uint64_t next_u64() { return mix(base_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t next_index(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  /// Sample from a finite distribution by cdf inversion. Zero-mass symbols
  /// are never returned.
  std::size_t next_symbol(const Distribution& p) {
    const double u = next_double();
    double cdf = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      last_positive = i;
      cdf += p[i];
      if (u < cdf) return i;
    }
    return last_positive;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
    std::uint64_t z = mix(seed + 0x9E3779B97F4A7C15ull * (purpose + 1));
    return mix(z + 0x9E3779B97F4A7C15ull * (index + 1));
  }

  std::uint64_t base_;
  std::uint64_t counter_;
};

}  // namespace rdpc
