#pragma once

#include <array>
#include <cstdint>

namespace starstar {

// splitmix64: the state advances by the golden-ratio increment and the output
// is a 3-round xor-multiply finalizer. Used only to expand seeds.
struct SplitMix64 {
  std::uint64_t state;

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ (Blackman & Vigna). Implemented here, rather than relying on
// <random> engines/distributions, so that reports are bit-identical across
// platforms and standard-library versions. The four state words are seeded
// from consecutive splitmix64 outputs; doubles take the top 53 bits of the
// 64-bit output.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& word : state_) word = sm.next();
  }

  // Stream for draw number `draw` of a run. Derived from (seed, draw) only,
  // so draws can be evaluated in any order and still reproduce exactly.
  static Xoshiro256pp for_draw(std::uint64_t seed, std::uint64_t draw) {
    SplitMix64 sm{seed};
    const std::uint64_t base = sm.next();
    return Xoshiro256pp(base ^ (0xD1342543DE82EF95ULL * (draw + 1)));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace starstar
