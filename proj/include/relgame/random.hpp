#pragma once

#include <cstdint>
#include <limits>

namespace relgame {

/// SplitMix64 generator. Small state, so a fresh stream per sample is cheap;
/// satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Stream for sample number `counter` under `seed`, optionally specialized to
/// one agent. Streams depend only on their key, never on which thread or in
/// what order they are drawn.
inline SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t counter,
                                std::uint64_t lane = 0) {
  std::uint64_t h = SplitMix64::mix(seed + 0x9e3779b97f4a7c15ULL);
  h = SplitMix64::mix(h ^ (counter + 0x632be59bd9b4e019ULL));
  h = SplitMix64::mix(h ^ (lane * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  return SplitMix64(h);
}

/// Uniform double in [0, 1) with 53 random bits.
template <typename Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// True with probability p; p = 1 always succeeds and p = 0 never does.
template <typename Rng>
bool bernoulli(Rng& rng, double p) {
  return uniform01(rng) < p;
}

/// Unbiased integer in [0, bound) by rejection.
template <typename Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace relgame
