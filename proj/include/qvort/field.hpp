#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qvort/grid.hpp"
#include "qvort/parallel.hpp"

namespace qvort {

using cplx = std::complex<double>;

struct FieldMeta {
  std::uint64_t seed = 0;
  std::string params;  // JSON blob describing provenance
};

// Complex scalar field sampled on the grid, row-major with x fastest.
struct WaveField {
  GridSpec grid;
  double time = 0.0;
  FieldMeta meta;
  std::vector<cplx> values;
};

// Fourier coefficients indexed like the grid (mode m from GridSpec::mode).
// Forward transforms divide by n^dims so the m=0 coefficient is the mean.
struct SpectralField {
  GridSpec grid;
  double time = 0.0;
  FieldMeta meta;
  std::vector<cplx> coeff;
};

// Real vector field; comp[2] is unused when dims == 2.
struct VectorField {
  GridSpec grid;
  std::array<std::vector<double>, 3> comp;
};

inline WaveField make_field(const GridSpec& grid) {
  grid.validate();
  WaveField f;
  f.grid = grid;
  f.values.assign(grid.size(), cplx{0.0, 0.0});
  return f;
}

inline VectorField make_vector_field(const GridSpec& grid) {
  VectorField v;
  v.grid = grid;
  for (int d = 0; d < grid.dims; ++d) v.comp[d].assign(grid.size(), 0.0);
  return v;
}

// N = sum |psi|^2 dx^dims, deterministic reduction.
inline double field_norm(const WaveField& f) {
  double cell = 1.0;
  for (int d = 0; d < f.grid.dims; ++d) cell *= f.grid.dx();
  return cell * block_sum_indexed(f.values.size(),
                                  [&](std::size_t i) { return std::norm(f.values[i]); });
}

// Relative RMS difference ||a-b|| / ||b|| (plain L2 over samples).
inline double relative_rms(const WaveField& a, const WaveField& b) {
  double num = block_sum_indexed(a.values.size(), [&](std::size_t i) {
    return std::norm(a.values[i] - b.values[i]);
  });
  double den = block_sum_indexed(b.values.size(),
                                 [&](std::size_t i) { return std::norm(b.values[i]); });
  return std::sqrt(num / den);
}

}  // namespace qvort
