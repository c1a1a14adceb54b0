#pragma once

#include <cstdint>

namespace dsm {

// splitmix64 finalizer: bijective on 64-bit words, passes BigCrush as a
// counter mixer.  All randomness in the library is counter-based so that
// (seed, sample, cell) -> bit is a pure function.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// uniform double in [0,1) from the top 53 bits
inline constexpr double to_unit(std::uint64_t u) noexcept {
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// per-sample seed derivation; independent of worker scheduling
inline constexpr std::uint64_t sample_seed(std::uint64_t master,
                                           std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ull));
}

// one stream of iid uniforms indexed by cell counter
struct CounterRng {
  std::uint64_t stream;

  explicit constexpr CounterRng(std::uint64_t seed) noexcept
      : stream(mix64(seed)) {}

  constexpr double unit(std::uint64_t cell) const noexcept {
    return to_unit(mix64(stream ^ (0xda942042e4dd58b5ull * (cell + 1))));
  }
};

}  // namespace dsm
