#pragma once

#include <cstdint>

#include "qvort/field.hpp"

namespace qvort {

// Random-phase initial condition parameters. dk and k_center are in units of
// 2*pi/L; s_rms is the target RMS of the phase field in radians.
struct InitialConditionParams {
  double dk = 20.0;       // spectral std dev of the phase distribution
  double s_rms = 10.0;    // RMS of S
  double k_center = 0.0;  // annulus center for mid-scale injection
  std::uint64_t seed = 0;

  static InitialConditionParams defaults_for(int dims) {
    InitialConditionParams p;
    p.dk = dims == 3 ? 10.0 : 20.0;
    return p;
  }
};

// psi = e^{iS} with |psi| = 1 at every sample. S is built from independent
// complex Gaussian mode amplitudes with variance
// exp(-(|k| - k_center)^2 / (2 dk^2)) (mode units), k != 0, then rescaled so
// RMS(S) = s_rms. Fully determined by params.seed.
WaveField random_phase_ic(const GridSpec& grid, const InitialConditionParams& params);

// Exact jump to t_target: multiply mode k by e^{-i |k|^2 (t_target - t)/2}.
WaveField propagate(const WaveField& field, double t_target);

// Smallest t > 0 with e^{-i|k|^2 t/2} = 1 for every lattice mode: L^2/pi.
double recurrence_time(const GridSpec& grid);

}  // namespace qvort
