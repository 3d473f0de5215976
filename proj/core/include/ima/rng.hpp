#pragma once

#include <cstdint>

namespace ima {

// Named stream tags. Every stochastic component derives its generator as
// Rng(Rng::derive(master_seed, tag, index...)), so any substream can be
// regenerated in isolation and results do not depend on scheduling order.
namespace stream {
inline constexpr std::uint64_t kRrSample = 1;
inline constexpr std::uint64_t kSoftUpdate = 2;
inline constexpr std::uint64_t kSimulation = 3;
inline constexpr std::uint64_t kWorldSample = 4;
inline constexpr std::uint64_t kRandBaseline = 5;
inline constexpr std::uint64_t kEvaluation = 6;
inline constexpr std::uint64_t kInstanceGen = 7;
inline constexpr std::uint64_t kCandidateGen = 8;
inline constexpr std::uint64_t kSeedPick = 9;
inline constexpr std::uint64_t kRepeat = 10;
inline constexpr std::uint64_t kEvalBefore = 11;
inline constexpr std::uint64_t kEvalAfter = 12;
}  // namespace stream

// Counter-based splitmix64 generator. One word of state, cheap to construct,
// and the output sequence is identical on every platform, which keeps frozen
// test values and report bytes portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), bound > 0. Lemire rejection, unbiased.
  std::uint32_t next_below(std::uint32_t bound) {
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * bound;
    auto lo = static_cast<std::uint32_t>(m);
    if (lo < bound) {
      std::uint32_t t = (0u - bound) % bound;
      while (lo < t) {
        x = next_u64() >> 32;
        m = x * bound;
        lo = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a) {
    return mix64(seed + kGamma * (a + 1));
  }
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive(derive(seed, a), b);
  }
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
    return derive(derive(seed, a, b), c);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace ima
