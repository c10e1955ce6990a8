#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qvort/flow.hpp"
#include "qvort/vortex.hpp"

namespace qvort {

enum class CorrelationKind { UnsignedPoint, SignedPoint, UndirectedLine, DirectedLine };

const char* to_string(CorrelationKind kind);

// Binned two-point statistics against the analytic uniform expectation in the
// periodic box (density-contrast convention for the unsigned/undirected kinds).
struct CorrelationFunction {
  std::vector<double> edges;  // nbins + 1, strictly increasing, max <= L/2
  std::vector<double> value;
  std::vector<std::int64_t> pair_count;
  std::vector<double> reference;  // uniform expectation each bin was divided by
  CorrelationKind kind = CorrelationKind::UnsignedPoint;
  std::string normalization;

  int bins() const { return static_cast<int>(value.size()); }
  double r_center(int b) const;  // geometric bin center
};

// 64 logarithmic bins over [rmin, rmax] by default.
std::vector<double> log_bins(double rmin, double rmax, int nbins = 64);

// unsigned: xi(b) = DD/RR - 1; signed: eta(b) = sum_{pairs} s_i s_j / RR,
// with RR = N(N-1)/2 * area(annulus b) / L^2 (exact for minimum-image
// separations up to L/2).
CorrelationFunction point_correlation_2d(const std::vector<PointVortex>& vortices,
                                         const GridSpec& grid,
                                         std::span<const double> edges,
                                         bool signed_kind);

struct LineSegment {
  std::array<double, 3> mid;
  std::array<double, 3> dl;
};

std::vector<LineSegment> line_segments(const VortexLineSet& lines);

// Pairs of line elements binned by midpoint separation, normalized by
// Lambda^2 Vshell / (2V). directed accumulates dl_i . dl_j; undirected
// accumulates |dl_i||dl_j| and subtracts 1.
CorrelationFunction line_correlation_3d(const VortexLineSet& lines,
                                        const GridSpec& grid,
                                        std::span<const double> edges,
                                        bool directed);

struct GaussianFit {
  double amplitude = 0.0;  // eta ~ -A exp(-r^2 / (2 sigma^2))
  double sigma = 0.0;
  double r2 = 0.0;
  int nbins = 0;
  double drop_radius = 0.0;  // first bin center past the fit where |eta| < 3 SE
};

GaussianFit fit_gaussian_screening(const CorrelationFunction& eta);

PowerLawFit fit_correlation_power_law(const CorrelationFunction& corr, double r_lo,
                                      double r_hi);

}  // namespace qvort
