#include "qvort/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qvort/fft.hpp"
#include "qvort/parallel.hpp"
#include "qvort/spectral.hpp"

namespace qvort {

namespace {

double default_floor(const std::vector<double>& rho) {
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rho.size()); ++i)
    m = std::max(m, rho[i]);
  return 1e-12 * m;
}

// Integer mode vector of flattened index.
inline void modes_of(const GridSpec& g, std::size_t i, int m[3]) {
  std::size_t rest = i;
  for (int axis = 0; axis < g.dims; ++axis) {
    m[axis] = g.mode(static_cast<int>(rest % g.n));
    rest /= g.n;
  }
}

}  // namespace

FlowFields fluid_variables(const WaveField& field, double rho_floor) {
  const GridSpec& g = field.grid;
  const std::size_t count = g.size();

  FlowFields flow;
  flow.grid = g;
  flow.rho.resize(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
    flow.rho[i] = std::norm(field.values[i]);

  const double floor = rho_floor < 0.0 ? default_floor(flow.rho) : rho_floor;
  flow.low_density.assign(count, 0);
  flow.v = make_vector_field(g);

  const SpectralField sf = forward_transform(field);
  for (int axis = 0; axis < g.dims; ++axis) {
    std::array<int, 3> orders{0, 0, 0};
    orders[axis] = 1;
    const WaveField grad = inverse_transform(spectral_derivative(sf, orders));
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
      const double mom = std::imag(std::conj(field.values[i]) * grad.values[i]);
      const double den = std::max(flow.rho[i], floor);
      flow.v.comp[axis][i] = mom / den;
      if (flow.rho[i] < floor) flow.low_density[i] = 1;
    }
  }
  return flow;
}

std::vector<double> quantum_potential(const WaveField& field, double rho_floor,
                                      std::vector<std::uint8_t>* flagged) {
  const GridSpec& g = field.grid;
  const std::size_t count = g.size();
  std::vector<double> rho(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
    rho[i] = std::norm(field.values[i]);
  const double floor = rho_floor < 0.0 ? default_floor(rho) : rho_floor;
  const double f_floor = std::sqrt(floor);

  WaveField amp = make_field(g);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
    amp.values[i] = std::sqrt(rho[i]);
  const WaveField lap = spectral_laplacian(amp);

  std::vector<double> q(count);
  if (flagged) flagged->assign(count, 0);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    const double f = amp.values[i].real();
    q[i] = lap.values[i].real() / (2.0 * std::max(f, f_floor));
    if (flagged && f < f_floor) (*flagged)[i] = 1;
  }
  return q;
}

FlowFields helmholtz_decompose(const FlowFields& flow) {
  const GridSpec& g = flow.grid;
  const std::size_t count = g.size();
  FlowFields out = flow;
  out.v_p = make_vector_field(g);
  out.v_r = make_vector_field(g);

  // Transform each component.
  std::array<std::vector<cplx>, 3> vk;
  const Fft fft(g);
  for (int axis = 0; axis < g.dims; ++axis) {
    vk[axis].resize(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
      vk[axis][i] = cplx{flow.v.comp[axis][i], 0.0};
    fft.forward(vk[axis]);
  }

  for (int axis = 0; axis < g.dims; ++axis)
    out.v_mean[axis] = vk[axis][0].real();

  std::array<std::vector<cplx>, 3> pk;
  for (int axis = 0; axis < g.dims; ++axis) pk[axis].resize(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(count); ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    int m[3] = {0, 0, 0};
    modes_of(g, i, m);
    // Project with the derivative-effective wavevector: Nyquist components
    // are zeroed, matching the spectral-derivative convention. This keeps the
    // projector even under conjugate pairing (real fields stay real) and
    // makes div(v_r) and curl(v_p), as measured spectrally, vanish exactly.
    bool pure_nyquist = false;
    for (int axis = 0; axis < g.dims; ++axis) {
      if (m[axis] == -g.n / 2) {
        m[axis] = 0;
        pure_nyquist = true;
      }
    }
    double k2 = 0.0;
    for (int axis = 0; axis < g.dims; ++axis)
      k2 += static_cast<double>(m[axis]) * m[axis];
    if (k2 == 0.0) {
      if (i == 0 || !pure_nyquist) {
        // True k=0 mode: mean flow, excluded from both components.
        for (int axis = 0; axis < g.dims; ++axis) {
          pk[axis][i] = 0.0;
          vk[axis][i] = 0.0;
        }
      } else {
        // Pure-Nyquist mode: invisible to spectral derivatives; counted as
        // potential flow (negligible for resolved fields).
        for (int axis = 0; axis < g.dims; ++axis) {
          pk[axis][i] = vk[axis][i];
          vk[axis][i] = 0.0;
        }
      }
      continue;
    }
    cplx kdotv{0.0, 0.0};
    for (int axis = 0; axis < g.dims; ++axis)
      kdotv += static_cast<double>(m[axis]) * vk[axis][i];
    for (int axis = 0; axis < g.dims; ++axis) {
      const cplx proj = kdotv * (static_cast<double>(m[axis]) / k2);
      pk[axis][i] = proj;
      vk[axis][i] -= proj;  // rotational remainder
    }
  }

  for (int axis = 0; axis < g.dims; ++axis) {
    fft.inverse(pk[axis]);
    fft.inverse(vk[axis]);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
      out.v_p.comp[axis][i] = pk[axis][i].real();
      out.v_r.comp[axis][i] = vk[axis][i].real();
    }
  }
  out.decomposed = true;
  return out;
}

Spectrum energy_spectrum(const VectorField& field) {
  const GridSpec& g = field.grid;
  const std::size_t count = g.size();
  const int max_shell = static_cast<int>(
      std::floor(std::sqrt(static_cast<double>(g.dims)) * (g.n / 2) + 0.5));

  // Shell id per mode, then mode indices bucketed by shell in index order so
  // per-shell accumulation is deterministic for any thread count.
  std::vector<int> shell(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(count); ++ii) {
    int m[3] = {0, 0, 0};
    modes_of(g, static_cast<std::size_t>(ii), m);
    double m2 = 0.0;
    for (int axis = 0; axis < g.dims; ++axis)
      m2 += static_cast<double>(m[axis]) * m[axis];
    shell[ii] = static_cast<int>(std::floor(std::sqrt(m2) + 0.5));
  }
  std::vector<std::int64_t> offsets(max_shell + 2, 0);
  for (std::size_t i = 0; i < count; ++i) offsets[shell[i] + 1]++;
  for (int b = 0; b < max_shell + 1; ++b) offsets[b + 1] += offsets[b];
  std::vector<std::uint32_t> order(count);
  {
    std::vector<std::int64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < count; ++i)
      order[static_cast<std::size_t>(cursor[shell[i]]++)] = static_cast<std::uint32_t>(i);
  }

  std::array<std::vector<cplx>, 3> vk;
  const Fft fft(g);
  for (int axis = 0; axis < g.dims; ++axis) {
    vk[axis].resize(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
      vk[axis][i] = cplx{field.comp[axis][i], 0.0};
    fft.forward(vk[axis]);
  }

  Spectrum spec;
  spec.k_unit = g.k_unit();
  spec.energy.assign(max_shell + 1, 0.0);
  spec.counts.assign(max_shell + 1, 0);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::ptrdiff_t b = 0; b <= max_shell; ++b) {
    double e = 0.0;
    for (int axis = 0; axis < g.dims; ++axis)
      for (std::int64_t q = offsets[b]; q < offsets[b + 1]; ++q)
        e += std::norm(vk[axis][order[static_cast<std::size_t>(q)]]);
    spec.energy[b] = 0.5 * e;
    spec.counts[b] = offsets[b + 1] - offsets[b];
  }
  return spec;
}

FlowFields clip_velocity(const FlowFields& flow, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("clip_velocity: kappa must be positive");
  const GridSpec& g = flow.grid;
  const double vmax = kappa / g.dx();
  FlowFields out = flow;
  std::int64_t clipped = 0;
#pragma omp parallel for schedule(static) reduction(+ : clipped) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(g.size()); ++i) {
    double v2 = 0.0;
    for (int axis = 0; axis < g.dims; ++axis)
      v2 += out.v.comp[axis][i] * out.v.comp[axis][i];
    if (v2 > vmax * vmax) {
      const double s = vmax / std::sqrt(v2);
      for (int axis = 0; axis < g.dims; ++axis) out.v.comp[axis][i] *= s;
      ++clipped;
    }
  }
  out.clipped = clipped;
  out.decomposed = false;  // components no longer match the clipped v
  return out;
}

PowerLawFit fit_power_law(const Spectrum& spec, double k_lo, double k_hi) {
  std::vector<double> lx, ly;
  for (int b = 1; b < spec.shells(); ++b) {
    const double k = spec.k(b);
    if (k < k_lo || k > k_hi || spec.counts[b] == 0) continue;
    if (!(spec.energy[b] > 0.0))
      throw std::domain_error("fit_power_law: nonpositive energy in range");
    lx.push_back(std::log(k));
    ly.push_back(std::log(spec.energy[b]));
  }
  if (lx.size() < 5)
    throw std::invalid_argument("fit_power_law: fewer than 5 populated shells in range");

  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / n;
  fit.amplitude = std::exp(intercept);
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double pred = intercept + fit.slope * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.nbins = static_cast<int>(lx.size());
  return fit;
}

double band_energy(const Spectrum& spec, double k_lo, double k_hi) {
  double e = 0.0;
  for (int b = 0; b < spec.shells(); ++b) {
    const double k = spec.k(b);
    if (k >= k_lo && k <= k_hi) e += spec.energy[b];
  }
  return e;
}

double total_energy(const Spectrum& spec) {
  double e = 0.0;
  for (double v : spec.energy) e += v;
  return e;
}

double equipartition_ratio(const Spectrum& spec_p, const Spectrum& spec_r,
                           double k_lo, double k_hi) {
  if (spec_p.k_unit != spec_r.k_unit || spec_p.shells() != spec_r.shells())
    throw std::invalid_argument("equipartition_ratio: misaligned spectra");
  const double ep = band_energy(spec_p, k_lo, k_hi);
  const double er = band_energy(spec_r, k_lo, k_hi);
  if (!(er > 0.0))
    throw std::domain_error("equipartition_ratio: zero rotational energy in range");
  return ep / er;
}

}  // namespace qvort
