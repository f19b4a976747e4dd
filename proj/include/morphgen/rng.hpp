#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace morphgen {

// SplitMix64 step (Steele, Lea & Vigna). Doubles as a 64-bit finalizer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) { return splitmix64_next(x); }

// xoshiro256** 1.0 (Blackman & Vigna), state filled through SplitMix64.
// All derived draws (unit doubles, bounded ints, normals) are computed
// from the raw bit stream with explicit arithmetic so that sequences are
// identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  // Substream for parallel work units: the unit index is folded into the
  // base seed (seed XOR index) before state expansion.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ index);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); Lemire multiply-shift reduction.
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Box-Muller, cosine branch; consumes two uniforms, u1 drawn from (0, 1].
  double next_normal(double mean, double stddev) {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(kTwoPi * u2);
  }

 private:
  static constexpr double kTwoPi = 6.28318530717958647692;
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_;
};

// FNV-1a 64-bit (Fowler/Noll/Vo): offset basis 14695981039346656037,
// prime 1099511628211.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic uniform variate in [0, 1) for (seed, string): FNV-1a of
// the bytes XOR the seed, passed through the SplitMix64 finalizer. Stable
// across runs and platforms.
inline double hash_unit(std::uint64_t seed, std::string_view bytes) {
  return static_cast<double>(mix64(fnv1a64(bytes) ^ seed) >> 11) * 0x1.0p-53;
}

}  // namespace morphgen
