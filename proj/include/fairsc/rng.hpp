#pragma once

#include <cstdint>
#include <random>

namespace fairsc {

using Rng = std::mt19937_64;

// Uniform on [0, 1) from the top 53 bits; unlike std::uniform_real_distribution
// this is identical across standard libraries.
inline double unit_uniform(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection.
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do
    r = rng();
  while (r >= limit);
  return r % n;
}

} // namespace fairsc
