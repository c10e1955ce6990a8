#include "qvort/fft.hpp"

#include <cmath>
#include <utility>

#include "qvort/parallel.hpp"

namespace qvort {

Fft::Fft(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const int n = grid_.n;
  roots_.resize(n / 2);
  for (int j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * kPi * j / n;
    roots_[j] = {std::cos(ang), std::sin(ang)};
  }
  bitrev_.resize(n);
  bitrev_[0] = 0;
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    bitrev_[i] = j;
  }
}

void Fft::line(cplx* a, bool inverse) const {
  const int n = grid_.n;
  for (int i = 0; i < n; ++i) {
    const int j = bitrev_[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len >> 1;
    const int step = n / len;
    for (int i = 0; i < n; i += len) {
      for (int j = 0; j < half; ++j) {
        cplx w = roots_[j * step];
        if (inverse) w = std::conj(w);
        const cplx u = a[i + j];
        const cplx v = a[i + j + half] * w;
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

void Fft::axis_pass(std::vector<cplx>& data, int axis, bool inverse) const {
  const int n = grid_.n;
  const std::size_t total = data.size();
  const std::size_t nlines = total / n;
  if (axis == 0) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(nlines); ++r) {
      line(data.data() + static_cast<std::size_t>(r) * n, inverse);
    }
    return;
  }
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(n);
#pragma omp parallel num_threads(max_threads())
  {
    std::vector<cplx> scratch(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(nlines); ++r) {
      const std::size_t lo = static_cast<std::size_t>(r) % stride;
      const std::size_t hi = static_cast<std::size_t>(r) / stride;
      const std::size_t base = lo + hi * stride * n;
      for (int t = 0; t < n; ++t) scratch[t] = data[base + t * stride];
      line(scratch.data(), inverse);
      for (int t = 0; t < n; ++t) data[base + t * stride] = scratch[t];
    }
  }
}

void Fft::forward(std::vector<cplx>& data) const {
  for (int axis = 0; axis < grid_.dims; ++axis) axis_pass(data, axis, false);
  const double scale = 1.0 / static_cast<double>(grid_.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(data.size()); ++i)
    data[i] *= scale;
}

void Fft::inverse(std::vector<cplx>& data) const {
  for (int axis = 0; axis < grid_.dims; ++axis) axis_pass(data, axis, true);
}

SpectralField forward_transform(const WaveField& field) {
  SpectralField s;
  s.grid = field.grid;
  s.time = field.time;
  s.meta = field.meta;
  s.coeff = field.values;
  Fft(field.grid).forward(s.coeff);
  return s;
}

WaveField inverse_transform(const SpectralField& spec) {
  WaveField f;
  f.grid = spec.grid;
  f.time = spec.time;
  f.meta = spec.meta;
  f.values = spec.coeff;
  Fft(spec.grid).inverse(f.values);
  return f;
}

}  // namespace qvort
