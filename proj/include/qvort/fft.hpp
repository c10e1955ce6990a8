#pragma once

#include <vector>

#include "qvort/field.hpp"

namespace qvort {

// Radix-2 complex FFT on the cubic grid, one pass per axis, parallel over
// lines. Forward carries the 1/n^dims factor; inverse is the plain sum.
// Each 1D line transform is computed serially by one thread, so results are
// bit-identical for any thread count.
class Fft {
 public:
  explicit Fft(const GridSpec& grid);

  void forward(std::vector<cplx>& data) const;
  void inverse(std::vector<cplx>& data) const;

 private:
  void line(cplx* a, bool inverse) const;
  void axis_pass(std::vector<cplx>& data, int axis, bool inverse) const;

  GridSpec grid_;
  std::vector<cplx> roots_;  // e^{-2 pi i j / n}, j < n/2
  std::vector<int> bitrev_;
};

SpectralField forward_transform(const WaveField& field);
WaveField inverse_transform(const SpectralField& spec);

}  // namespace qvort
