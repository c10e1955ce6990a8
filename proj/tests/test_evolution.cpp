#include <doctest.h>

#include <cmath>
#include <cstring>

#include "qvort/analytic.hpp"
#include "qvort/evolve.hpp"
#include "qvort/reference.hpp"
#include "test_util.hpp"

using namespace qvort;
using test::plane_wave;
using test::random_field;

namespace {

// RMS difference restricted to the flat square of the window, where the
// windowed analytic solution coincides with the free-space one.
double flat_region_rms(const WaveField& a, const WaveField& b,
                       const std::array<double, 2>& center, double flat) {
  const GridSpec& g = a.grid;
  double sum = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double x = g.min_image(i * g.dx() - center[0]);
      const double y = g.min_image(j * g.dx() - center[1]);
      if (std::abs(x) > flat * g.length || std::abs(y) > flat * g.length) continue;
      sum += std::norm(a.values[g.flatten(i, j)] - b.values[g.flatten(i, j)]);
      ++count;
    }
  return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace

TEST_CASE("random_phase_ic has unit density and is deterministic") {
  const GridSpec g{2, 64, 1.0};
  InitialConditionParams p;
  p.dk = 4.0;
  p.s_rms = 2.0;
  p.seed = 42;
  const WaveField a = random_phase_ic(g, p);
  double dev = 0.0;
  for (const auto& v : a.values) dev = std::max(dev, std::abs(std::abs(v) - 1.0));
  CHECK(dev <= 1e-15);

  const WaveField b = random_phase_ic(g, p);
  CHECK(std::memcmp(a.values.data(), b.values.data(),
                    a.values.size() * sizeof(cplx)) == 0);

  p.seed = 43;
  const WaveField c = random_phase_ic(g, p);
  CHECK(std::memcmp(a.values.data(), c.values.data(),
                    a.values.size() * sizeof(cplx)) != 0);
}

TEST_CASE("random_phase_ic rejects bad parameters") {
  const GridSpec g{2, 16, 1.0};
  InitialConditionParams p;
  p.dk = 0.0;
  CHECK_THROWS_AS(random_phase_ic(g, p), std::invalid_argument);
  p.dk = 4.0;
  p.s_rms = 0.0;
  CHECK_THROWS_AS(random_phase_ic(g, p), std::invalid_argument);
  p.s_rms = 1.0;
  p.k_center = -1.0;
  CHECK_THROWS_AS(random_phase_ic(g, p), std::invalid_argument);
}

TEST_CASE("random_phase_ic respects the target phase RMS") {
  const GridSpec g{2, 128, 1.0};
  InitialConditionParams p;
  p.dk = 6.0;
  p.s_rms = 0.37;
  p.seed = 7;
  const WaveField f = random_phase_ic(g, p);
  // The phase excursion is small, so arg(psi) recovers S without wrapping.
  double sum = 0.0;
  for (const auto& v : f.values) {
    const double s = std::arg(v);
    sum += s * s;
  }
  CHECK(std::sqrt(sum / static_cast<double>(g.size())) ==
        doctest::Approx(0.37).epsilon(1e-10));
}

TEST_CASE("propagate on a plane-wave eigenmode") {
  const GridSpec g{2, 32, 1.0};
  const WaveField f = plane_wave(g, 3, 1);
  const double k2 = (9.0 + 1.0) * g.k_unit() * g.k_unit();
  const double t = 0.0123;
  const WaveField e = propagate(f, t);
  const cplx expected_factor{std::cos(0.5 * k2 * t), -std::sin(0.5 * k2 * t)};
  double err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    err = std::max(err, std::abs(e.values[i] - expected_factor * f.values[i]));
  CHECK(err < 1e-10);
}

TEST_CASE("propagate leaves a constant field unchanged") {
  const GridSpec g{2, 16, 1.0};
  WaveField f = make_field(g);
  for (auto& v : f.values) v = {0.3, 0.4};
  for (double t : {0.01, 3.7, -2.0}) {
    const WaveField e = propagate(f, t);
    double err = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      err = std::max(err, std::abs(e.values[i] - f.values[i]));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("propagate matches the serial reference") {
  const GridSpec g{2, 16, 1.0};
  const WaveField f = random_field(g, 17);
  const WaveField a = propagate(f, 0.37);
  const WaveField b = ref::propagate_serial(f, 0.37);
  CHECK(test::max_abs_diff(a, b) < 1e-12);
}

TEST_CASE("norm conservation, composition, and reversal") {
  const GridSpec g{2, 64, 1.0};
  const WaveField f = random_field(g, 5);
  const double n0 = field_norm(f);

  const WaveField a = propagate(f, 0.5);
  CHECK(std::abs(field_norm(a) / n0 - 1.0) <= 1e-12);

  const WaveField ab = propagate(a, 1.25);
  const WaveField direct = propagate(f, 1.25);
  CHECK(relative_rms(ab, direct) <= 1e-12);

  const WaveField back = propagate(a, f.time);
  CHECK(relative_rms(back, f) <= 1e-12);
}

TEST_CASE("recurrence time arithmetic") {
  const GridSpec g1{2, 64, 1.0};
  CHECK(recurrence_time(g1) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  const GridSpec g2{2, 64, 2.0};
  CHECK(recurrence_time(g2) == doctest::Approx(4.0 / kPi).epsilon(1e-15));

  // Oracle: every lattice phase factor |e^{-i theta} - 1| = 2|sin(theta/2)|
  // returns to unity at T = L^2/pi and not at T/2.
  for (const GridSpec& g : {g1, g2}) {
    const double alpha = recurrence_time(g) * kPi / (g.length * g.length);
    double worst = 0.0;
    for (int m2 = 1; m2 <= 3 * 64 * 64; ++m2) {
      const double theta = 2.0 * kPi * std::fmod(alpha * m2, 1.0);
      worst = std::max(worst, 2.0 * std::abs(std::sin(0.5 * theta)));
    }
    CHECK(worst < 1e-9);
    const double half_theta = 2.0 * kPi * std::fmod(0.5 * alpha * 1.0, 1.0);
    CHECK(2.0 * std::abs(std::sin(0.5 * half_theta)) > 0.5);  // M=1 mid-cycle
  }
}

TEST_CASE("field recurrence at T_rec") {
  const GridSpec g{2, 128, 1.0};
  InitialConditionParams p;
  p.dk = 8.0;
  p.s_rms = 1.5;
  p.seed = 3;
  const WaveField f = random_phase_ic(g, p);
  const WaveField rec = propagate(f, recurrence_time(g));
  CHECK(relative_rms(rec, f) < 1e-9);
}

TEST_CASE("spectral evolution of the Bessel pair matches the closed form") {
  const GridSpec g{2, 512, 1.0};
  BesselPairParams bp;
  bp.c0 = 0.3;
  bp.k = 4.0 * kJ1FirstZero;  // first zero of J1(kR) at R = L/4
  const Window win{0.25, 0.36};
  const WaveField f0 = bessel_pair_field(bp, g, 0.0, win);
  for (double dt : {1e-6, 2e-6}) {
    const WaveField evolved = propagate(f0, dt);
    const WaveField closed = bessel_pair_field(bp, g, dt, win);
    CHECK(flat_region_rms(evolved, closed, bp.center, win.flat) < 1e-8);

    // The conjugate propagator sign would miss by orders of magnitude more.
    WaveField wrong = bessel_pair_field(bp, g, -dt, win);
    CHECK(flat_region_rms(evolved, wrong, bp.center, win.flat) > 1e-6);
  }
}
