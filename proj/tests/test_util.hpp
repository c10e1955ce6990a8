#pragma once

#include <cmath>
#include <complex>

#include "qvort/field.hpp"
#include "qvort/rng.hpp"

namespace qvort::test {

inline WaveField random_field(const GridSpec& grid, std::uint64_t seed) {
  WaveField f = make_field(grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const GaussianPair g = gaussian_pair(seed, i);
    f.values[i] = {g.g0, g.g1};
  }
  return f;
}

inline double max_abs_diff(const WaveField& a, const WaveField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// Plane wave e^{i 2 pi (mx x + my y + mz z) / L}.
inline WaveField plane_wave(const GridSpec& grid, int mx, int my, int mz = 0) {
  WaveField f = make_field(grid);
  const int n = grid.n;
  const int nz = grid.dims == 3 ? n : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double ang =
            2.0 * kPi * (static_cast<double>(mx) * i + static_cast<double>(my) * j +
                         static_cast<double>(mz) * k) /
            n;
        f.values[grid.flatten(i, j, k)] = {std::cos(ang), std::sin(ang)};
      }
  return f;
}

}  // namespace qvort::test
