#pragma once

#include <array>

#include "qvort/field.hpp"

namespace qvort {

// First-order Bessel function of the first kind, evaluated in-house:
// power series (long double) for x <= 8, Miller backward recurrence for
// 8 < x <= 40, Hankel asymptotic expansion beyond. Absolute accuracy
// better than 1e-12 everywhere.
double bessel_j1(double x);

inline constexpr double kJ1PeakX = 1.8411837813406593;    // first maximum of J1
inline constexpr double kJ1PeakValue = 0.5818652242815964;
inline constexpr double kJ1FirstZero = 3.8317059702075123;

// Roots of J1(x) = c on the rising branch (0, peak) and the falling branch
// (peak, first zero). Throws std::domain_error unless 0 < c < J1(peak).
double j1_root_ascending(double c);
double j1_root_descending(double c);

// C-infinity bump, 1 for |u| <= flat, 0 for |u| >= outer.
double bump_window(double u, double flat, double outer);

// Product of per-axis bumps around a center, minimum-image offsets.
struct Window {
  double flat = 0.25;   // fraction of L: flat for |x_i - c_i| <= flat*L
  double outer = 0.46;  // zero for |x_i - c_i| >= outer*L
  double value(const GridSpec& g, const std::array<double, 3>& center,
               const std::array<double, 3>& x) const;
};

// Local diagonalized null psi = [a (x-x0) + i b (y-y0)] rotated by
// `orientation`, windowed and periodized.
struct LocalVortexModel {
  double a = 1.0;
  double b = 1.0;
  std::array<double, 2> x0{0.0, 0.0};
  double orientation = 0.0;
};

WaveField local_vortex_field(const LocalVortexModel& model, const GridSpec& grid,
                             const Window& window = {});

// Branch-continued phase S = arctan((b/a) tan phi) with S(phi+2pi) = S(phi)+2pi.
double local_phase(double a, double b, double phi);
// (S_r, S_p) = (phi, S - phi).
std::array<double, 2> local_phase_split(double a, double b, double phi);

// lap S = a b (b^2-a^2) sin(2 phi) / [r^2 (a^2 cos^2 phi + b^2 sin^2 phi)^2].
double local_compression(double a, double b, double r, double phi);

// v = (a b / (r (a^2 cos^2 phi + b^2 sin^2 phi))) phi_hat, components in the
// diagonal frame.
std::array<double, 2> local_velocity(double a, double b, double r, double phi);

// Two-vortex Bessel solution psi = c0 - J1(kR) e^{i(phi - k^2 t/2)}.
struct BesselPairParams {
  double c0 = 0.3;
  double k = 4.0 * kJ1FirstZero;          // first zero of J1(kR) at R = L/4 for L=1
  std::array<double, 2> center{0.5, 0.5};  // box coordinates
};

// Sampled, windowed field at time t (windowing is flagged in meta.params).
WaveField bessel_pair_field(const BesselPairParams& params, const GridSpec& grid,
                            double t, const Window& window = {});

struct BesselVortexPair {
  std::array<double, 2> inner;  // charge +1, radius on the rising branch
  std::array<double, 2> outer;  // charge -1, radius on the falling branch
  double r_inner = 0.0;
  double r_outer = 0.0;
  double angle = 0.0;  // k^2 t / 2 mod 2 pi
};

BesselVortexPair bessel_vortex_positions(const BesselPairParams& params, double t);

}  // namespace qvort
