#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace jcmap {

// SplitMix64 (Vigna 2015). The whole toolkit draws its randomness from this
// generator because the output stream is fixed by the algorithm alone: a
// given seed reproduces the same shuffles, graphs and layouts on every
// platform and compiler, which is what makes seeded runs repeatable.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, bound) by rejection sampling. bound must be > 0.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Double in [0, 1) with 53 random bits.
  constexpr double next_double() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// In-place Fisher-Yates shuffle driven by the generator above.
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

// Derives an independent child seed from a parent seed and a 1-based branch
// index: the SplitMix64 output for state `seed` after skipping `branch - 1`
// increments. Used for decomposition branches and clustering restarts so that
// every subtree/run has its own reproducible stream that does not depend on
// the order in which siblings are evaluated.
constexpr std::uint64_t branch_seed(std::uint64_t seed,
                                    std::uint64_t branch) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * branch;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace jcmap
