#include "qvort/evolve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qvort/fft.hpp"
#include "qvort/parallel.hpp"
#include "qvort/rng.hpp"

namespace qvort {

namespace {

// Sum of squared integer modes of flattened index i.
inline std::int64_t mode_norm_sq(const GridSpec& g, std::size_t i) {
  std::int64_t m2 = 0;
  std::size_t rest = i;
  for (int axis = 0; axis < g.dims; ++axis) {
    const int p = static_cast<int>(rest % g.n);
    rest /= g.n;
    const std::int64_t m = g.mode(p);
    m2 += m * m;
  }
  return m2;
}

std::string ic_params_json(const InitialConditionParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << R"({"type":"random_phase","dk":)" << p.dk << R"(,"s_rms":)" << p.s_rms
     << R"(,"k_center":)" << p.k_center << "}";
  return os.str();
}

}  // namespace

WaveField random_phase_ic(const GridSpec& grid, const InitialConditionParams& params) {
  grid.validate();
  if (!(params.dk > 0.0)) throw std::invalid_argument("random_phase_ic: dk must be positive");
  if (!(params.s_rms > 0.0))
    throw std::invalid_argument("random_phase_ic: s_rms must be positive");
  if (params.k_center < 0.0)
    throw std::invalid_argument("random_phase_ic: k_center must be nonnegative");

  SpectralField s;
  s.grid = grid;
  s.coeff.assign(grid.size(), cplx{0.0, 0.0});
  const double inv_two_var = 1.0 / (4.0 * params.dk * params.dk);  // amplitude exponent
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 1; i < static_cast<std::ptrdiff_t>(s.coeff.size()); ++i) {
    const double mnorm = std::sqrt(static_cast<double>(mode_norm_sq(grid, i)));
    const double dev = mnorm - params.k_center;
    const double amp = std::exp(-dev * dev * inv_two_var);
    const GaussianPair g = gaussian_pair(params.seed, static_cast<std::uint64_t>(i));
    s.coeff[i] = amp * cplx{g.g0, g.g1};
  }

  WaveField phase = inverse_transform(s);
  const std::size_t count = phase.values.size();
  const double mean_sq =
      block_sum_indexed(count, [&](std::size_t i) {
        const double v = phase.values[i].real();
        return v * v;
      }) /
      static_cast<double>(count);
  if (!(mean_sq > 0.0)) throw std::runtime_error("random_phase_ic: degenerate phase field");
  const double scale = params.s_rms / std::sqrt(mean_sq);

  WaveField out = make_field(grid);
  out.time = 0.0;
  out.meta.seed = params.seed;
  out.meta.params = ic_params_json(params);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    const double S = scale * phase.values[i].real();
    out.values[i] = {std::cos(S), std::sin(S)};
  }
  return out;
}

WaveField propagate(const WaveField& field, double t_target) {
  if (!std::isfinite(t_target))
    throw std::invalid_argument("propagate: t_target must be finite");
  const GridSpec& g = field.grid;
  SpectralField s = forward_transform(field);
  // Phase per mode is 2 pi * alpha * M with M the integer squared mode norm;
  // the mod-1 reduction runs in extended precision so the phase error stays
  // near machine epsilon even when alpha * M is large.
  const long double alpha = static_cast<long double>(t_target - field.time) *
                            static_cast<long double>(kPi) /
                            (static_cast<long double>(g.length) * g.length);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s.coeff.size()); ++i) {
    const auto m2 = static_cast<long double>(mode_norm_sq(g, static_cast<std::size_t>(i)));
    const double theta =
        2.0 * kPi * static_cast<double>(std::fmod(alpha * m2, 1.0L));
    s.coeff[i] *= cplx{std::cos(theta), -std::sin(theta)};
  }
  WaveField out = inverse_transform(s);
  out.time = t_target;
  return out;
}

double recurrence_time(const GridSpec& grid) {
  grid.validate();
  return grid.length * grid.length / kPi;
}

}  // namespace qvort
