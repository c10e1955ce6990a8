#include <doctest.h>

#include <cmath>

#include "qvort/analytic.hpp"
#include "qvort/fft.hpp"
#include "qvort/reference.hpp"
#include "qvort/spectral.hpp"
#include "test_util.hpp"

using namespace qvort;
using test::max_abs_diff;
using test::plane_wave;
using test::random_field;

TEST_CASE("GridSpec validation") {
  CHECK_THROWS_AS((GridSpec{2, 6, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{2, 48, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{4, 16, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{2, 16, -1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((GridSpec{3, 8, 2.0}.validate()));
  const GridSpec g{2, 16, 1.0};
  CHECK(g.mode(0) == 0);
  CHECK(g.mode(7) == 7);
  CHECK(g.mode(8) == -8);
  CHECK(g.mode(15) == -1);
}

TEST_CASE("forward transform of a constant field") {
  const GridSpec g{2, 16, 1.0};
  WaveField f = make_field(g);
  const cplx c{0.7, -0.3};
  for (auto& v : f.values) v = c;
  const SpectralField s = forward_transform(f);
  CHECK(std::abs(s.coeff[0] - c) < 1e-14);
  double off = 0.0;
  for (std::size_t i = 1; i < s.coeff.size(); ++i) off = std::max(off, std::abs(s.coeff[i]));
  CHECK(off < 1e-14);
}

TEST_CASE("forward transform of a single mode") {
  const GridSpec g{2, 32, 2.0};
  const WaveField f = plane_wave(g, 3, 0);
  const SpectralField s = forward_transform(f);
  CHECK(std::abs(s.coeff[g.flatten(3, 0)] - cplx{1.0, 0.0}) < 1e-13);
  double off = 0.0;
  for (std::size_t i = 0; i < s.coeff.size(); ++i) {
    if (i == g.flatten(3, 0)) continue;
    off = std::max(off, std::abs(s.coeff[i]));
  }
  CHECK(off < 1e-13);
}

TEST_CASE("inverse of a single coefficient is a plane wave") {
  const GridSpec g{2, 16, 1.0};
  SpectralField s;
  s.grid = g;
  s.coeff.assign(g.size(), cplx{0.0, 0.0});
  s.coeff[g.flatten(1, 0)] = 1.0;
  const WaveField f = inverse_transform(s);
  const WaveField expect = plane_wave(g, 1, 0);
  CHECK(max_abs_diff(f, expect) < 1e-13);
}

TEST_CASE("inverse of all-zero coefficients is the zero field") {
  const GridSpec g{2, 16, 1.0};
  SpectralField s;
  s.grid = g;
  s.coeff.assign(g.size(), cplx{0.0, 0.0});
  const WaveField f = inverse_transform(s);
  for (const auto& v : f.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("round trip at several sizes") {
  for (int n : {16, 64, 256}) {
    const GridSpec g{2, n, 1.0};
    const WaveField f = random_field(g, 11u + n);
    const WaveField back = inverse_transform(forward_transform(f));
    CHECK(relative_rms(back, f) < 1e-12);
  }
  const GridSpec g3{3, 16, 1.0};
  const WaveField f3 = random_field(g3, 99);
  CHECK(relative_rms(inverse_transform(forward_transform(f3)), f3) < 1e-12);
}

TEST_CASE("round trip of a Gaussian bump") {
  const GridSpec g{2, 64, 1.0};
  WaveField f = make_field(g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double x = g.min_image(i * g.dx() - 0.5);
      const double y = g.min_image(j * g.dx() - 0.5);
      f.values[g.flatten(i, j)] = std::exp(-(x * x + y * y) / (2 * 0.05 * 0.05));
    }
  CHECK(relative_rms(inverse_transform(forward_transform(f)), f) < 1e-12);
}

TEST_CASE("fft matches the serial naive dft") {
  const GridSpec g2{2, 16, 1.0};
  const WaveField f2 = random_field(g2, 5);
  const SpectralField a = forward_transform(f2);
  const SpectralField b = ref::dft_forward(f2);
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeff.size(); ++i)
    m = std::max(m, std::abs(a.coeff[i] - b.coeff[i]));
  CHECK(m < 1e-12);

  const GridSpec g3{3, 8, 1.0};
  const WaveField f3 = random_field(g3, 6);
  const SpectralField a3 = forward_transform(f3);
  const SpectralField b3 = ref::dft_forward(f3);
  m = 0.0;
  for (std::size_t i = 0; i < a3.coeff.size(); ++i)
    m = std::max(m, std::abs(a3.coeff[i] - b3.coeff[i]));
  CHECK(m < 1e-12);

  const WaveField inv_a = inverse_transform(a);
  const WaveField inv_b = ref::dft_inverse(a);
  CHECK(max_abs_diff(inv_a, inv_b) < 1e-12);
}

TEST_CASE("Parseval identity") {
  for (int n : {16, 64}) {
    const GridSpec g{2, n, 1.0};
    const WaveField f = random_field(g, 7u + n);
    const SpectralField s = forward_transform(f);
    double real_sum = 0.0, spec_sum = 0.0;
    for (const auto& v : f.values) real_sum += std::norm(v);
    for (const auto& c : s.coeff) spec_sum += std::norm(c);
    real_sum /= static_cast<double>(g.size());
    CHECK(std::abs(real_sum - spec_sum) / real_sum < 1e-12);
  }
}

TEST_CASE("spectral gradient of a plane wave") {
  const GridSpec g{2, 64, 1.0};
  const WaveField f = plane_wave(g, 3, 0);
  const double k0 = 3 * g.k_unit();
  const auto grad = spectral_gradient(f);
  REQUIRE(grad.size() == 2);
  double err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    err = std::max(err, std::abs(grad[0].values[i] - cplx{0.0, k0} * f.values[i]));
    err = std::max(err, std::abs(grad[1].values[i]));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("spectral gradient of a constant is zero") {
  const GridSpec g{2, 16, 1.0};
  WaveField f = make_field(g);
  for (auto& v : f.values) v = {2.0, 1.0};
  const auto grad = spectral_gradient(f);
  for (const auto& gf : grad)
    for (const auto& v : gf.values) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("spectral gradient of sin matches the closed form") {
  const GridSpec g{2, 64, 2.0};
  WaveField f = make_field(g);
  const double w = 2.0 * kPi / g.length;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      f.values[g.flatten(i, j)] = std::sin(w * i * g.dx());
  const auto grad = spectral_gradient(f);
  double err = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      err = std::max(err, std::abs(grad[0].values[g.flatten(i, j)] -
                                   cplx{w * std::cos(w * i * g.dx()), 0.0}));
  CHECK(err < 1e-10);
}

TEST_CASE("spectral laplacian examples") {
  const GridSpec g{2, 32, 1.0};
  const WaveField pw = plane_wave(g, 2, 1);
  const double k2 = (4.0 + 1.0) * g.k_unit() * g.k_unit();
  const WaveField lap = spectral_laplacian(pw);
  double err = 0.0;
  for (std::size_t i = 0; i < pw.values.size(); ++i)
    err = std::max(err, std::abs(lap.values[i] + k2 * pw.values[i]));
  CHECK(err < 1e-9);

  WaveField c = make_field(g);
  for (auto& v : c.values) v = {1.0, -2.0};
  const WaveField lc = spectral_laplacian(c);
  for (const auto& v : lc.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("laplacian of a windowed harmonic function vanishes in the interior") {
  const GridSpec g{2, 128, 1.0};
  WaveField f = make_field(g);
  const Window win;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double x = g.min_image(i * g.dx() - 0.5);
      const double y = g.min_image(j * g.dx() - 0.5);
      const double w = win.value(g, {0.5, 0.5, 0.0}, {i * g.dx(), j * g.dx(), 0.0});
      f.values[g.flatten(i, j)] = w * cplx{x, y};
    }
  const WaveField lap = spectral_laplacian(f);
  double interior = 0.0, global = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double x = g.min_image(i * g.dx() - 0.5);
      const double y = g.min_image(j * g.dx() - 0.5);
      const double a = std::abs(lap.values[g.flatten(i, j)]);
      global = std::max(global, a);
      if (std::hypot(x, y) < 0.1) interior = std::max(interior, a);
    }
  CHECK(interior < 1e-6 * global);
}

TEST_CASE("spectral gradient vs centered differences converges at order >= 1.9") {
  // Two fixed low-band-limited factors evaluated analytically on each grid.
  auto sample = [](const GridSpec& g, int i, int j) {
    cplx prod[2];
    for (int which = 0; which < 2; ++which) {
      cplx acc{0.0, 0.0};
      for (int mx = -5; mx <= 5; ++mx)
        for (int my = -5; my <= 5; ++my) {
          const std::uint64_t c =
              static_cast<std::uint64_t>((mx + 5) * 11 + (my + 5) + which * 121);
          const GaussianPair gp = gaussian_pair(1234, c);
          const double ang = 2.0 * kPi * (mx * static_cast<double>(i) +
                                          my * static_cast<double>(j)) /
                             g.n;
          acc += cplx{gp.g0, gp.g1} * cplx{std::cos(ang), std::sin(ang)} / 11.0;
        }
      prod[which] = acc;
    }
    return prod[0] * prod[1];
  };

  double err[2];
  int idx = 0;
  for (int n : {64, 128}) {
    const GridSpec g{2, n, 1.0};
    WaveField f = make_field(g);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) f.values[g.flatten(i, j)] = sample(g, i, j);
    const auto grad = spectral_gradient(f);
    double e = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const cplx fd = (f.values[g.flatten_wrapped(i + 1, j)] -
                         f.values[g.flatten_wrapped(i - 1, j)]) /
                        (2.0 * g.dx());
        e = std::max(e, std::abs(fd - grad[0].values[g.flatten(i, j)]));
      }
    err[idx++] = e;
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order >= 1.9);
}
