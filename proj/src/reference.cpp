#include "qvort/reference.hpp"

#include <cmath>
#include <complex>

namespace qvort::ref {

namespace {

// Naive transform of every line along `axis`; sign = -1 forward, +1 inverse.
void naive_axis(std::vector<cplx>& data, const GridSpec& g, int axis, int sign) {
  const int n = g.n;
  std::size_t stride = 1;
  for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(n);
  const std::size_t nlines = data.size() / n;
  std::vector<cplx> in(n), out(n);
  for (std::size_t r = 0; r < nlines; ++r) {
    const std::size_t lo = r % stride;
    const std::size_t hi = r / stride;
    const std::size_t base = lo + hi * stride * n;
    for (int t = 0; t < n; ++t) in[t] = data[base + t * stride];
    for (int t = 0; t < n; ++t) {
      cplx acc{0.0, 0.0};
      for (int s = 0; s < n; ++s) {
        const double ang = sign * 2.0 * kPi * t * s / n;
        acc += in[s] * cplx{std::cos(ang), std::sin(ang)};
      }
      out[t] = acc;
    }
    for (int t = 0; t < n; ++t) data[base + t * stride] = out[t];
  }
}

inline double wrap_pi(double d) { return std::remainder(d, 2.0 * kPi); }

}  // namespace

SpectralField dft_forward(const WaveField& field) {
  SpectralField s;
  s.grid = field.grid;
  s.time = field.time;
  s.meta = field.meta;
  s.coeff = field.values;
  for (int axis = 0; axis < field.grid.dims; ++axis)
    naive_axis(s.coeff, field.grid, axis, -1);
  const double scale = 1.0 / static_cast<double>(field.grid.size());
  for (auto& c : s.coeff) c *= scale;
  return s;
}

WaveField dft_inverse(const SpectralField& spec) {
  WaveField f;
  f.grid = spec.grid;
  f.time = spec.time;
  f.meta = spec.meta;
  f.values = spec.coeff;
  for (int axis = 0; axis < spec.grid.dims; ++axis)
    naive_axis(f.values, spec.grid, axis, +1);
  return f;
}

WaveField propagate_serial(const WaveField& field, double t_target) {
  const GridSpec& g = field.grid;
  SpectralField s = dft_forward(field);
  const long double alpha = static_cast<long double>(t_target - field.time) *
                            static_cast<long double>(kPi) /
                            (static_cast<long double>(g.length) * g.length);
  for (std::size_t i = 0; i < s.coeff.size(); ++i) {
    std::int64_t m2 = 0;
    std::size_t rest = i;
    for (int axis = 0; axis < g.dims; ++axis) {
      const std::int64_t m = g.mode(static_cast<int>(rest % g.n));
      rest /= g.n;
      m2 += m * m;
    }
    const double theta =
        2.0 * kPi *
        static_cast<double>(std::fmod(alpha * static_cast<long double>(m2), 1.0L));
    s.coeff[i] *= cplx{std::cos(theta), -std::sin(theta)};
  }
  WaveField out = dft_inverse(s);
  out.time = t_target;
  return out;
}

void pair_bins_serial(const std::vector<std::array<double, 2>>& pos,
                      const std::vector<int>& charge, double box,
                      const std::vector<double>& edges,
                      std::vector<std::int64_t>& counts,
                      std::vector<std::int64_t>& charge_products) {
  const std::size_t nbins = edges.size() - 1;
  counts.assign(nbins, 0);
  charge_products.assign(nbins, 0);
  auto mimg = [box](double d) {
    while (d > 0.5 * box) d -= box;
    while (d < -0.5 * box) d += box;
    return d;
  };
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      const double dx = mimg(pos[i][0] - pos[j][0]);
      const double dy = mimg(pos[i][1] - pos[j][1]);
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r < edges.front() || r >= edges.back()) continue;
      std::size_t b = 0;
      while (b + 1 < nbins && r >= edges[b + 1]) ++b;
      counts[b] += 1;
      charge_products[b] += static_cast<std::int64_t>(charge[i]) * charge[j];
    }
  }
}

std::vector<int> winding_scan_serial(const WaveField& field) {
  const GridSpec& g = field.grid;
  const int n = g.n;
  std::vector<int> w(static_cast<std::size_t>(n) * n, 0);
  for (int cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      const cplx c00 = field.values[g.flatten_wrapped(ci, cj)];
      const cplx c10 = field.values[g.flatten_wrapped(ci + 1, cj)];
      const cplx c11 = field.values[g.flatten_wrapped(ci + 1, cj + 1)];
      const cplx c01 = field.values[g.flatten_wrapped(ci, cj + 1)];
      const double a0 = std::arg(c00), a1 = std::arg(c10), a2 = std::arg(c11),
                   a3 = std::arg(c01);
      const double total = wrap_pi(a1 - a0) + wrap_pi(a2 - a1) +
                           wrap_pi(a3 - a2) + wrap_pi(a0 - a3);
      w[g.flatten(ci, cj)] = static_cast<int>(std::lround(total / (2.0 * kPi)));
    }
  }
  return w;
}

}  // namespace qvort::ref
