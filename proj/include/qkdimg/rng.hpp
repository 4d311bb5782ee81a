#pragma once

#include <cstdint>
#include <random>

namespace qkdimg {

/// Seeded random source with a platform-independent output sequence.
///
/// The std:: distributions are implementation-defined, so every draw here
/// is derived directly from the raw 64-bit Mersenne Twister output, whose
/// sequence is fixed by the standard. Same seed, same draws, everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed from the operating system's entropy source.
  static Rng from_entropy() {
    std::random_device device;
    const std::uint64_t seed = (std::uint64_t{device()} << 32) ^ device();
    return Rng(seed);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p. p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p) { return uniform01() < p; }

  int bit() { return static_cast<int>(engine_() >> 63); }

  /// Uniform in [0, n) by rejection; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return draw % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qkdimg
