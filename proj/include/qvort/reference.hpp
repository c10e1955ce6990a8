#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qvort/field.hpp"

namespace qvort::ref {

// Serial reference kernels. Slow, dependency-free restatements of the
// parallel implementations, kept as test oracles and benchmark baselines.

// Naive O(n^2)-per-line DFT with the same normalization as Fft.
SpectralField dft_forward(const WaveField& field);
WaveField dft_inverse(const SpectralField& spec);

// Serial Fourier-space propagator (same phase arithmetic as evolve).
WaveField propagate_serial(const WaveField& field, double t_target);

// Serial pair binning for 2D point sets: returns per-bin pair counts and
// signed charge-product sums.
void pair_bins_serial(const std::vector<std::array<double, 2>>& pos,
                      const std::vector<int>& charge, double box,
                      const std::vector<double>& edges,
                      std::vector<std::int64_t>& counts,
                      std::vector<std::int64_t>& charge_products);

// Serial plaquette winding scan over all 2D cells.
std::vector<int> winding_scan_serial(const WaveField& field);

}  // namespace qvort::ref
