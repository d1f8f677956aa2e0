// SplitMix64 (Steele, Lea & Flood's 64-bit mixer-based generator).
// Portable, tiny state, and randomly accessible: the state after n draws is
// start + n * gamma, so independent workers can jump straight to any stream
// position.  The seed is passed through the finalizer once so that
// consecutive seeds (as used for Monte-Carlo repetitions) give decorrelated
// sequences.
#pragma once

#include <cstdint>

namespace semicop {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(mix(seed)) {}

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform double strictly inside (0,1): (x + 0.5) / 2^53 over 53 bits.
  double next_unit() {
    return (double(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Advance as if `count` draws had been consumed.
  void skip(std::uint64_t count) { state_ += count * kGamma; }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace semicop
