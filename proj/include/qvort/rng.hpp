#pragma once

#include <cmath>
#include <cstdint>

#include "qvort/grid.hpp"

namespace qvort {

// Counter-based SplitMix64: stream(seed, i) equals the (i+1)-th output of a
// sequentially stepped SplitMix64 seeded with `seed`. Evaluating at arbitrary
// counters makes field generation embarrassingly parallel and the exact bit
// stream portable across implementations.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Top 53 bits -> [0,1).
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct GaussianPair {
  double g0, g1;
};

// Box-Muller pair from counters (2*counter, 2*counter+1) of the seed stream.
inline GaussianPair gaussian_pair(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = 1.0 - uniform01(splitmix64_at(seed, 2 * counter));  // (0,1]
  const double u2 = uniform01(splitmix64_at(seed, 2 * counter + 1));
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

}  // namespace qvort
