#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qvort/field.hpp"

namespace qvort {

// Madelung fluid variables. v = v_p + v_r + v_mean pointwise; v_p is curl-free,
// v_r divergence-free, and the k=0 mode lives in v_mean only.
struct FlowFields {
  GridSpec grid;
  std::vector<double> rho;
  VectorField v;
  VectorField v_p;
  VectorField v_r;
  std::array<double, 3> v_mean{0.0, 0.0, 0.0};
  std::vector<std::uint8_t> low_density;  // rho < rho_floor at this sample
  std::int64_t clipped = 0;               // points limited by clip_velocity
  bool decomposed = false;
};

struct PowerLawFit {
  double slope = 0.0;
  double amplitude = 0.0;  // E at k = 1
  double r2 = 0.0;
  int nbins = 0;
};

// Shell-averaged energy, unit-width integer-|m| shells (bin b covers
// |m| in [b-1/2, b+1/2)). Sum over shells closes to (1/2)<|field|^2>.
struct Spectrum {
  double k_unit = 0.0;  // 2*pi/L
  std::vector<double> energy;
  std::vector<std::int64_t> counts;  // modes per shell
  std::optional<PowerLawFit> fit;

  double k(int b) const { return b * k_unit; }
  int shells() const { return static_cast<int>(energy.size()); }
};

// rho = |psi|^2 and v = Im(psi* grad psi) / max(rho, rho_floor) with spectral
// gradients. rho_floor < 0 selects the default 1e-12 * max(rho).
FlowFields fluid_variables(const WaveField& field, double rho_floor = -1.0);

// Q = lap(f) / (2 f), f = sqrt(rho), spectral Laplacian, floored denominator.
std::vector<double> quantum_potential(const WaveField& field, double rho_floor = -1.0,
                                      std::vector<std::uint8_t>* flagged = nullptr);

// Fills v_p, v_r, v_mean from v: per mode k != 0, v_p = khat (khat . v),
// v_r = v - v_p; the k=0 mode goes to v_mean and is excluded from both.
FlowFields helmholtz_decompose(const FlowFields& flow);

Spectrum energy_spectrum(const VectorField& field);

// Pointwise cap |v| <= kappa/dx, direction preserved; count in .clipped.
FlowFields clip_velocity(const FlowFields& flow, double kappa = 1.0);

// Least squares on (log k, log E) over populated shells with k in [k_lo,k_hi].
PowerLawFit fit_power_law(const Spectrum& spec, double k_lo, double k_hi);

double equipartition_ratio(const Spectrum& spec_p, const Spectrum& spec_r,
                           double k_lo, double k_hi);
double band_energy(const Spectrum& spec, double k_lo, double k_hi);

// Convenience used by diagnostics: total shell energy.
double total_energy(const Spectrum& spec);

}  // namespace qvort
