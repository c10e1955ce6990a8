#include "qvort/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qvort/parallel.hpp"

namespace qvort {

namespace {

void check_edges(std::span<const double> edges, double box) {
  if (edges.size() < 2) throw std::invalid_argument("correlation: need >= 1 bin");
  for (std::size_t b = 1; b < edges.size(); ++b)
    if (!(edges[b] > edges[b - 1]))
      throw std::invalid_argument("correlation: bin edges must increase");
  if (edges.back() > 0.5 * box * (1.0 + 1e-12))
    throw std::invalid_argument(
        "correlation: bins beyond L/2 are invalid under the minimum image");
}

inline int find_bin(std::span<const double> edges, double r) {
  if (r < edges.front() || r >= edges.back()) return -1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), r);
  return static_cast<int>(it - edges.begin()) - 1;
}

}  // namespace

const char* to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::UnsignedPoint: return "unsigned_point";
    case CorrelationKind::SignedPoint: return "signed_point";
    case CorrelationKind::UndirectedLine: return "undirected_line";
    case CorrelationKind::DirectedLine: return "directed_line";
  }
  return "?";
}

double CorrelationFunction::r_center(int b) const {
  return std::sqrt(edges[b] * edges[b + 1]);
}

std::vector<double> log_bins(double rmin, double rmax, int nbins) {
  if (!(rmin > 0.0) || !(rmax > rmin) || nbins < 1)
    throw std::invalid_argument("log_bins: need 0 < rmin < rmax and nbins >= 1");
  std::vector<double> edges(nbins + 1);
  const double step = std::log(rmax / rmin) / nbins;
  for (int b = 0; b <= nbins; ++b) edges[b] = rmin * std::exp(step * b);
  edges.back() = rmax;
  return edges;
}

CorrelationFunction point_correlation_2d(const std::vector<PointVortex>& vortices,
                                         const GridSpec& grid,
                                         std::span<const double> edges,
                                         bool signed_kind) {
  if (vortices.size() < 2)
    throw std::invalid_argument("point_correlation_2d: need at least 2 vortices");
  check_edges(edges, grid.length);
  const std::size_t n = vortices.size();
  const std::size_t nbins = edges.size() - 1;

  // Pair loop over fixed 64-row blocks; per-block integer bins merged in
  // block order. All accumulators are integers, so the result is exact and
  // independent of the schedule.
  constexpr std::size_t kBlock = 64;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<std::int64_t>> bcount(nblocks), bprod(nblocks);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(nblocks); ++blk) {
    auto& count = bcount[blk];
    auto& prod = bprod[blk];
    count.assign(nbins, 0);
    prod.assign(nbins, 0);
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = grid.min_image(vortices[i].x - vortices[j].x);
        const double dy = grid.min_image(vortices[i].y - vortices[j].y);
        const int b = find_bin(edges, std::sqrt(dx * dx + dy * dy));
        if (b < 0) continue;
        count[b] += 1;
        prod[b] += static_cast<std::int64_t>(vortices[i].charge) * vortices[j].charge;
      }
    }
  }
  std::vector<std::int64_t> count(nbins, 0), prod(nbins, 0);
  for (std::size_t blk = 0; blk < nblocks; ++blk)
    for (std::size_t b = 0; b < nbins; ++b) {
      count[b] += bcount[blk][b];
      prod[b] += bprod[blk][b];
    }

  CorrelationFunction cf;
  cf.edges.assign(edges.begin(), edges.end());
  cf.kind = signed_kind ? CorrelationKind::SignedPoint : CorrelationKind::UnsignedPoint;
  cf.normalization = "RR = N(N-1)/2 * pi(r_hi^2 - r_lo^2)/L^2 (uniform periodic)";
  cf.value.resize(nbins);
  cf.reference.resize(nbins);
  cf.pair_count.assign(count.begin(), count.end());
  const double npairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double area = grid.length * grid.length;
  for (std::size_t b = 0; b < nbins; ++b) {
    const double rr =
        npairs * kPi * (edges[b + 1] * edges[b + 1] - edges[b] * edges[b]) / area;
    cf.reference[b] = rr;
    if (signed_kind)
      cf.value[b] = static_cast<double>(prod[b]) / rr;
    else
      cf.value[b] = static_cast<double>(count[b]) / rr - 1.0;
  }
  return cf;
}

std::vector<LineSegment> line_segments(const VortexLineSet& lines) {
  std::vector<LineSegment> segs;
  const GridSpec& g = lines.grid;
  for (const auto& line : lines.lines) {
    const std::size_t m = line.points.size();
    if (m < 2) continue;
    for (std::size_t p = 0; p < m; ++p) {
      const auto& a = line.points[p];
      const auto& b = line.points[(p + 1) % m];
      LineSegment s;
      double len2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        s.dl[c] = g.min_image(b[c] - a[c]);
        len2 += s.dl[c] * s.dl[c];
        double mid = a[c] + 0.5 * s.dl[c];
        mid -= g.length * std::floor(mid / g.length);
        s.mid[c] = mid;
      }
      if (len2 > 0.0) segs.push_back(s);
    }
  }
  return segs;
}

CorrelationFunction line_correlation_3d(const VortexLineSet& lines,
                                        const GridSpec& grid,
                                        std::span<const double> edges,
                                        bool directed) {
  const std::vector<LineSegment> segs = line_segments(lines);
  if (segs.empty())
    throw std::invalid_argument("line_correlation_3d: empty line set");
  check_edges(edges, grid.length);
  const std::size_t n = segs.size();
  const std::size_t nbins = edges.size() - 1;

  double lambda = 0.0;
  for (const auto& s : segs)
    lambda += std::sqrt(s.dl[0] * s.dl[0] + s.dl[1] * s.dl[1] + s.dl[2] * s.dl[2]);

  constexpr std::size_t kBlock = 64;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> bacc(nblocks);
  std::vector<std::vector<std::int64_t>> bcount(nblocks);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(nblocks); ++blk) {
    auto& acc = bacc[blk];
    auto& count = bcount[blk];
    acc.assign(nbins, 0.0);
    count.assign(nbins, 0);
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double d = grid.min_image(segs[i].mid[c] - segs[j].mid[c]);
          r2 += d * d;
        }
        const int b = find_bin(edges, std::sqrt(r2));
        if (b < 0) continue;
        double w;
        if (directed) {
          w = segs[i].dl[0] * segs[j].dl[0] + segs[i].dl[1] * segs[j].dl[1] +
              segs[i].dl[2] * segs[j].dl[2];
        } else {
          const double li = std::sqrt(segs[i].dl[0] * segs[i].dl[0] +
                                      segs[i].dl[1] * segs[i].dl[1] +
                                      segs[i].dl[2] * segs[i].dl[2]);
          const double lj = std::sqrt(segs[j].dl[0] * segs[j].dl[0] +
                                      segs[j].dl[1] * segs[j].dl[1] +
                                      segs[j].dl[2] * segs[j].dl[2]);
          w = li * lj;
        }
        acc[b] += w;
        count[b] += 1;
      }
    }
  }
  std::vector<double> acc(nbins, 0.0);
  std::vector<std::int64_t> count(nbins, 0);
  for (std::size_t blk = 0; blk < nblocks; ++blk)
    for (std::size_t b = 0; b < nbins; ++b) {
      acc[b] += bacc[blk][b];
      count[b] += bcount[blk][b];
    }

  CorrelationFunction cf;
  cf.edges.assign(edges.begin(), edges.end());
  cf.kind = directed ? CorrelationKind::DirectedLine : CorrelationKind::UndirectedLine;
  cf.normalization =
      "Lambda^2 * (4pi/3)(r_hi^3 - r_lo^3) / (2 V) (Poisson line soup)";
  cf.value.resize(nbins);
  cf.reference.resize(nbins);
  cf.pair_count.assign(count.begin(), count.end());
  const double volume = grid.length * grid.length * grid.length;
  for (std::size_t b = 0; b < nbins; ++b) {
    const double shell = 4.0 * kPi / 3.0 *
                         (edges[b + 1] * edges[b + 1] * edges[b + 1] -
                          edges[b] * edges[b] * edges[b]);
    const double norm = lambda * lambda * shell / (2.0 * volume);
    cf.reference[b] = norm;
    cf.value[b] = acc[b] / norm - (directed ? 0.0 : 1.0);
  }
  return cf;
}

GaussianFit fit_gaussian_screening(const CorrelationFunction& eta) {
  // Leading contiguous run of populated, negative bins.
  std::vector<double> x2, ly;  // (r^2, log(-eta))
  int first = -1;
  int b = 0;
  for (; b < eta.bins(); ++b) {
    if (eta.pair_count[b] == 0) continue;
    if (first < 0) {
      if (!(eta.value[b] < 0.0))
        throw std::domain_error(
            "fit_gaussian_screening: leading bins are not negative (no screening)");
      first = b;
    }
    if (!(eta.value[b] < 0.0)) break;
    const double r = eta.r_center(b);
    x2.push_back(r * r);
    ly.push_back(std::log(-eta.value[b]));
  }
  if (x2.size() < 5)
    throw std::domain_error("fit_gaussian_screening: fewer than 5 negative bins");

  const double n = static_cast<double>(x2.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x2.size(); ++i) {
    sx += x2[i];
    sy += ly[i];
    sxx += x2[i] * x2[i];
    sxy += x2[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  if (!(slope < 0.0))
    throw std::domain_error("fit_gaussian_screening: non-decaying profile");

  GaussianFit fit;
  fit.amplitude = std::exp(intercept);
  fit.sigma = std::sqrt(-0.5 / slope);
  fit.nbins = static_cast<int>(x2.size());
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < x2.size(); ++i) {
    const double pred = intercept + slope * x2[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  // First populated bin past the fitted run where |eta| drops below 3 SE
  // (SE of a sum of ~count unit charge products is sqrt(count)/RR).
  fit.drop_radius = eta.edges.back();
  for (; b < eta.bins(); ++b) {
    if (eta.pair_count[b] == 0) continue;
    const double se = std::sqrt(static_cast<double>(eta.pair_count[b])) /
                      eta.reference[b];
    if (std::abs(eta.value[b]) < 3.0 * se) {
      fit.drop_radius = eta.r_center(b);
      break;
    }
  }
  return fit;
}

PowerLawFit fit_correlation_power_law(const CorrelationFunction& corr, double r_lo,
                                      double r_hi) {
  std::vector<double> lx, ly;
  for (int b = 0; b < corr.bins(); ++b) {
    const double r = corr.r_center(b);
    if (r < r_lo || r > r_hi || corr.pair_count[b] == 0) continue;
    if (!(corr.value[b] > 0.0))
      throw std::domain_error("fit_correlation_power_law: nonpositive value in range");
    lx.push_back(std::log(r));
    ly.push_back(std::log(corr.value[b]));
  }
  if (lx.size() < 5)
    throw std::invalid_argument(
        "fit_correlation_power_law: fewer than 5 populated positive bins in range");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
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

}  // namespace qvort
