#pragma once

#include <cstdint>

#include "slplab/normal.hpp"

namespace slplab {

/// splitmix64 (Steele, Lea & Flood 2014, fixed-increment form). This is
/// the pinned generator behind every Monte Carlo number the repository
/// records; replications use substreams derived from (seed, index) so
/// aggregates are identical at any parallelism level.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0,1): 53 high bits plus a half-step.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_bits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Substream `index` of a study seeded with `seed`. The state depends on
/// (seed, index) only, never on which thread consumes it.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix_bits(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

/// Standard normal deviates by inverse transform (one uniform per
/// deviate, so substreams stay aligned draw-for-draw).
class GaussianStream {
 public:
  explicit GaussianStream(SplitMix64 generator) : generator_(generator) {}
  double operator()() { return norm_quantile(generator_.next_double()); }

 private:
  SplitMix64 generator_;
};

}  // namespace slplab
