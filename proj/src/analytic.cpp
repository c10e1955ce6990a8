#include "qvort/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qvort/parallel.hpp"

namespace qvort {

namespace {

// Power series J1(x) = (x/2) sum_j (-(x/2)^2)^j / (j! (j+1)!), long double
// accumulation keeps the cancellation error below 1e-16 for x <= 8.
double j1_series(double x) {
  const long double half = 0.5L * x;
  const long double q = half * half;
  long double term = half;
  long double sum = term;
  for (int j = 1; j < 64; ++j) {
    term *= -q / (static_cast<long double>(j) * (j + 1));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Miller backward recurrence: run J_{m+1}=0, J_m=eps downward and normalize
// with J0 + 2 sum_k J_{2k} = 1.
double j1_miller(double x) {
  const int start = 2 * static_cast<int>((x + 14.0 * std::sqrt(x) + 24.0) / 2.0);
  long double jp = 0.0L, jc = 1e-30L;
  long double norm = 0.0L, j1v = 0.0L;
  for (int m = start; m >= 1; --m) {
    const long double jm = (2.0L * m / x) * jc - jp;  // J_{m-1}
    jp = jc;
    jc = jm;
    if (m - 1 == 1) j1v = jm;
    if ((m - 1) % 2 == 0) norm += (m - 1 == 0 ? 1.0L : 2.0L) * jm;
    // Rescale to avoid overflow of the unnormalized ladder.
    if (std::abs(jc) > 1e20L) {
      jc *= 1e-20L;
      jp *= 1e-20L;
      norm *= 1e-20L;
      j1v *= 1e-20L;
    }
  }
  return static_cast<double>(j1v / norm);
}

// Hankel expansion, x > 40: J1 = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - 3 pi/4. Terms are added until they stop decreasing.
double j1_asymptotic(double x) {
  const long double mu = 4.0L;  // 4 nu^2 with nu = 1
  const long double ix = 1.0L / (8.0L * x);
  long double p = 1.0L, q = 0.0L;
  long double term = 1.0L;
  long double prev = 1e300L;
  for (int k = 1; k < 40; ++k) {
    const long double f = (mu - (2.0L * k - 1) * (2.0L * k - 1)) * ix / k;
    term *= f;
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    if (k % 2 == 1) {
      q += (((k - 1) / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
    if (std::abs(term) < 1e-20L) break;
  }
  const long double chi = static_cast<long double>(x) - 0.75L * kPi;
  const long double amp = std::sqrt(2.0L / (kPi * static_cast<long double>(x)));
  return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

double bisect_j1(double c, double lo, double hi) {
  double flo = bessel_j1(lo) - c;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j1(mid) - c;
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double bessel_j1(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax <= 8.0)
    v = j1_series(ax);
  else if (ax <= 40.0)
    v = j1_miller(ax);
  else
    v = j1_asymptotic(ax);
  return x < 0.0 ? -v : v;
}

double j1_root_ascending(double c) {
  if (!(c > 0.0) || !(c < kJ1PeakValue))
    throw std::domain_error("j1_root: c0 must lie in (0, max J1)");
  return bisect_j1(c, 0.0, kJ1PeakX);
}

double j1_root_descending(double c) {
  if (!(c > 0.0) || !(c < kJ1PeakValue))
    throw std::domain_error("j1_root: c0 must lie in (0, max J1)");
  return bisect_j1(c, kJ1PeakX, kJ1FirstZero);
}

double bump_window(double u, double flat, double outer) {
  const double a = std::abs(u);
  if (a <= flat) return 1.0;
  if (a >= outer) return 0.0;
  const double s = (a - flat) / (outer - flat);
  const double fa = std::exp(-1.0 / (1.0 - s));
  const double fb = std::exp(-1.0 / s);
  return fa / (fa + fb);
}

double Window::value(const GridSpec& g, const std::array<double, 3>& center,
                     const std::array<double, 3>& x) const {
  double w = 1.0;
  for (int axis = 0; axis < g.dims; ++axis) {
    const double u = g.min_image(x[axis] - center[axis]);
    w *= bump_window(u, flat * g.length, outer * g.length);
    if (w == 0.0) return 0.0;
  }
  return w;
}

WaveField local_vortex_field(const LocalVortexModel& model, const GridSpec& grid,
                             const Window& window) {
  grid.validate();
  if (grid.dims != 2)
    throw std::invalid_argument("local_vortex_field: 2D grids only");
  if (model.x0[0] < 0.0 || model.x0[0] >= grid.length || model.x0[1] < 0.0 ||
      model.x0[1] >= grid.length)
    throw std::invalid_argument("local_vortex_field: x0 outside box");
  WaveField f = make_field(grid);
  std::ostringstream os;
  os.precision(17);
  os << R"({"type":"local_vortex","a":)" << model.a << R"(,"b":)" << model.b
     << R"(,"windowed":true})";
  f.meta.params = os.str();
  const double dx = grid.dx();
  const double ct = std::cos(model.orientation), st = std::sin(model.orientation);
  const int n = grid.n;
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double ux = grid.min_image(i * dx - model.x0[0]);
      const double uy = grid.min_image(j * dx - model.x0[1]);
      const double xr = ct * ux + st * uy;
      const double yr = -st * ux + ct * uy;
      const double w = window.value(grid, {model.x0[0], model.x0[1], 0.0},
                                    {i * dx, j * dx, 0.0});
      f.values[grid.flatten(i, static_cast<int>(j))] =
          w * cplx{model.a * xr, model.b * yr};
    }
  }
  return f;
}

double local_phase(double a, double b, double phi) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("local_phase: a, b must be positive");
  // atan2 tracks phi up to a bounded distortion < pi/2; re-anchoring on phi
  // gives the branch-continued value with winding 2 pi.
  const double principal = std::atan2(b * std::sin(phi), a * std::cos(phi));
  return phi + std::remainder(principal - phi, 2.0 * kPi);
}

std::array<double, 2> local_phase_split(double a, double b, double phi) {
  const double s = local_phase(a, b, phi);
  return {phi, s - phi};
}

double local_compression(double a, double b, double r, double phi) {
  if (!(r > 0.0)) throw std::domain_error("local_compression: r must be positive");
  const double c = std::cos(phi), s = std::sin(phi);
  const double den = a * a * c * c + b * b * s * s;
  return a * b * (b * b - a * a) * std::sin(2.0 * phi) / (r * r * den * den);
}

std::array<double, 2> local_velocity(double a, double b, double r, double phi) {
  if (!(r > 0.0)) throw std::domain_error("local_velocity: r must be positive");
  const double c = std::cos(phi), s = std::sin(phi);
  const double mag = a * b / (r * (a * a * c * c + b * b * s * s));
  return {-mag * s, mag * c};
}

WaveField bessel_pair_field(const BesselPairParams& params, const GridSpec& grid,
                            double t, const Window& window) {
  grid.validate();
  if (grid.dims != 2)
    throw std::invalid_argument("bessel_pair_field: 2D grids only");
  if (!(params.c0 > 0.0) || !(params.c0 < kJ1PeakValue))
    throw std::domain_error("bessel_pair_field: c0 outside (0, max J1)");
  WaveField f = make_field(grid);
  f.time = t;
  std::ostringstream os;
  os.precision(17);
  os << R"({"type":"bessel_pair","c0":)" << params.c0 << R"(,"k":)" << params.k
     << R"(,"windowed":true,"window_flat":)" << window.flat
     << R"(,"window_outer":)" << window.outer << "}";
  f.meta.params = os.str();
  const double dx = grid.dx();
  const double rot = 0.5 * params.k * params.k * t;
  const int n = grid.n;
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double ux = grid.min_image(i * dx - params.center[0]);
      const double uy = grid.min_image(j * dx - params.center[1]);
      const double w = window.value(grid, {params.center[0], params.center[1], 0.0},
                                    {i * dx, j * dx, 0.0});
      cplx val{params.c0, 0.0};
      if (w > 0.0) {
        const double r = std::hypot(ux, uy);
        if (r > 0.0) {
          const double phase = std::atan2(uy, ux) - rot;
          val -= w * bessel_j1(params.k * r) * cplx{std::cos(phase), std::sin(phase)};
        }
      }
      f.values[grid.flatten(i, static_cast<int>(j))] = val;
    }
  }
  return f;
}

BesselVortexPair bessel_vortex_positions(const BesselPairParams& params, double t) {
  BesselVortexPair out;
  out.r_inner = j1_root_ascending(params.c0) / params.k;
  out.r_outer = j1_root_descending(params.c0) / params.k;
  out.angle = std::fmod(0.5 * params.k * params.k * t, 2.0 * kPi);
  if (out.angle < 0.0) out.angle += 2.0 * kPi;
  const double c = std::cos(out.angle), s = std::sin(out.angle);
  out.inner = {params.center[0] + out.r_inner * c, params.center[1] + out.r_inner * s};
  out.outer = {params.center[0] + out.r_outer * c, params.center[1] + out.r_outer * s};
  return out;
}

}  // namespace qvort
