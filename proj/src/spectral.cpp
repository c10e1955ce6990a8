#include "qvort/spectral.hpp"

#include "qvort/parallel.hpp"

namespace qvort {

namespace {

// Apply the per-mode multiplier for one axis in place.
void multiply_axis(SpectralField& s, int axis, int order) {
  if (order == 0) return;
  const GridSpec& g = s.grid;
  const int n = g.n;
  std::vector<cplx> factor(n);
  for (int p = 0; p < n; ++p) {
    const int m = g.mode(p);
    if (m == -n / 2 && (order & 1)) {
      factor[p] = 0.0;
      continue;
    }
    const cplx ik{0.0, m * g.k_unit()};
    cplx f{1.0, 0.0};
    for (int o = 0; o < order; ++o) f *= ik;
    factor[p] = f;
  }
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(n);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s.coeff.size()); ++i) {
    const int p = static_cast<int>((static_cast<std::size_t>(i) / stride) % n);
    s.coeff[i] *= factor[p];
  }
}

}  // namespace

SpectralField spectral_derivative(const SpectralField& spec,
                                  const std::array<int, 3>& orders) {
  SpectralField out = spec;
  for (int axis = 0; axis < spec.grid.dims; ++axis)
    multiply_axis(out, axis, orders[axis]);
  return out;
}

std::vector<WaveField> spectral_gradient(const SpectralField& spec) {
  std::vector<WaveField> grad;
  grad.reserve(spec.grid.dims);
  for (int axis = 0; axis < spec.grid.dims; ++axis) {
    std::array<int, 3> orders{0, 0, 0};
    orders[axis] = 1;
    grad.push_back(inverse_transform(spectral_derivative(spec, orders)));
  }
  return grad;
}

std::vector<WaveField> spectral_gradient(const WaveField& field) {
  return spectral_gradient(forward_transform(field));
}

WaveField spectral_laplacian(const SpectralField& spec) {
  SpectralField out = spec;
  const GridSpec& g = spec.grid;
  const int n = g.n;
  const double ku = g.k_unit();
  std::size_t strides[3] = {1, static_cast<std::size_t>(n),
                            static_cast<std::size_t>(n) * n};
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.coeff.size()); ++i) {
    double k2 = 0.0;
    for (int axis = 0; axis < g.dims; ++axis) {
      const int p = static_cast<int>((static_cast<std::size_t>(i) / strides[axis]) % n);
      const double k = g.mode(p) * ku;
      k2 += k * k;
    }
    out.coeff[i] *= -k2;
  }
  return inverse_transform(out);
}

WaveField spectral_laplacian(const WaveField& field) {
  return spectral_laplacian(forward_transform(field));
}

}  // namespace qvort
