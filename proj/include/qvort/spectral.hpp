#pragma once

#include <array>
#include <vector>

#include "qvort/fft.hpp"

namespace qvort {

// Derivative of the trigonometric interpolant: multiply mode m by
// prod_axis (i k_axis)^order_axis. The Nyquist mode m = -n/2 is zeroed on any
// axis with odd order (a real-representable mode has no well-defined odd
// derivative); even powers keep it with k = -pi n / L.
SpectralField spectral_derivative(const SpectralField& spec,
                                  const std::array<int, 3>& orders);

std::vector<WaveField> spectral_gradient(const WaveField& field);
WaveField spectral_laplacian(const WaveField& field);

// Gradient sharing one forward transform, for callers that already have it.
std::vector<WaveField> spectral_gradient(const SpectralField& spec);
WaveField spectral_laplacian(const SpectralField& spec);

}  // namespace qvort
