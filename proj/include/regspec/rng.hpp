#pragma once

// Deterministic random streams.
//
// Every stochastic routine takes an explicit 64-bit seed and derives
// sub-stream seeds with splitmix64 over (seed, stream indices), so a Monte
// Carlo run is reproducible trial-by-trial regardless of thread count or
// execution order. The generator itself is mt19937_64; bounded integers use
// Lemire's multiply-shift rejection, which is unbiased and cheap (the sampler
// draws billions of them at d = 8).

#include <cstdint>
#include <random>

#include "common.hpp"

namespace regspec {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Hash (seed, a, b, c) into an independent sub-stream seed. Streams derived
// with distinct indices are independent for all practical purposes.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= a + 0x632be59bd9b4e019ull;
  h ^= splitmix64(s);
  s ^= b + 0x9e6c63d0876a9a47ull;
  h ^= splitmix64(s);
  s ^= c + 0xd1b54a32d192ed03ull;
  h ^= splitmix64(s);
  return h;
}

class rng {
 public:
  explicit rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Unbiased integer in [0, n). Lemire's method: accept unless the 128-bit
  // product lands in the small biased window, then reject-and-retry.
  std::uint64_t below(std::uint64_t n) {
    require(n > 0, "rng::below: n must be positive");
    std::uint64_t x = eng_();
    unsigned __int128 m = (unsigned __int128)x * n;
    std::uint64_t lo = (std::uint64_t)m;
    if (lo < n) {
      std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = eng_();
        m = (unsigned __int128)x * n;
        lo = (std::uint64_t)m;
      }
    }
    return (std::uint64_t)(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace regspec
