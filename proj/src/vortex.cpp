#include "qvort/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qvort/evolve.hpp"
#include "qvort/parallel.hpp"
#include "qvort/spectral.hpp"

namespace qvort {

namespace {

inline double wrap_pi(double d) { return std::remainder(d, 2.0 * kPi); }

inline bool is_zero(const cplx& c) { return c.real() == 0.0 && c.imag() == 0.0; }

// Winding of the oriented quad c0 -> c1 -> c2 -> c3 -> c0.
// degenerate = some corner is exactly zero.
struct WindingResult {
  int w = 0;
  bool degenerate = false;
};

WindingResult quad_winding(const cplx& c0, const cplx& c1, const cplx& c2,
                           const cplx& c3) {
  if (is_zero(c0) || is_zero(c1) || is_zero(c2) || is_zero(c3))
    return {0, true};
  const double a0 = std::arg(c0), a1 = std::arg(c1), a2 = std::arg(c2),
               a3 = std::arg(c3);
  const double total =
      wrap_pi(a1 - a0) + wrap_pi(a2 - a1) + wrap_pi(a3 - a2) + wrap_pi(a0 - a3);
  return {static_cast<int>(std::lround(total / (2.0 * kPi))), false};
}

struct NewtonResult {
  double u = 0.5, v = 0.5;
  bool converged = false;
};

// Null of the bilinear interpolant on the unit cell.
NewtonResult bilinear_null(const cplx& c00, const cplx& c10, const cplx& c01,
                           const cplx& c11) {
  NewtonResult r;
  const cplx au = c10 - c00;
  const cplx av = c01 - c00;
  const cplx auv = c11 - c10 - c01 + c00;
  double u = 0.5, v = 0.5;
  for (int it = 0; it < 20; ++it) {
    const cplx f = c00 + au * u + av * v + auv * (u * v);
    const cplx fu = au + auv * v;
    const cplx fv = av + auv * u;
    const double det = fu.real() * fv.imag() - fv.real() * fu.imag();
    if (det == 0.0) break;
    const double du = (-f.real() * fv.imag() + fv.real() * f.imag()) / det;
    const double dv = (-fu.real() * f.imag() + f.real() * fu.imag()) / det;
    u += du;
    v += dv;
    if (u < -1.0 || u > 2.0 || v < -1.0 || v > 2.0) break;
    if (std::abs(du) + std::abs(dv) < 1e-10) {
      r.u = u;
      r.v = v;
      r.converged = true;
      return r;
    }
  }
  return r;  // fall back to the cell center, flagged
}

}  // namespace

int plaquette_winding(const WaveField& field, int ci, int cj) {
  const GridSpec& g = field.grid;
  const WindingResult r = quad_winding(field.values[g.flatten_wrapped(ci, cj)],
                                       field.values[g.flatten_wrapped(ci + 1, cj)],
                                       field.values[g.flatten_wrapped(ci + 1, cj + 1)],
                                       field.values[g.flatten_wrapped(ci, cj + 1)]);
  if (r.degenerate)
    throw DegenerateCornerError("plaquette_winding: wavefunction vanishes at a corner");
  return r.w;
}

namespace {

// Value at the center of cell (ci, cj): the bilinear midpoint.
cplx cell_center_value(const WaveField& f, int ci, int cj) {
  const GridSpec& g = f.grid;
  return 0.25 * (f.values[g.flatten_wrapped(ci, cj)] +
                 f.values[g.flatten_wrapped(ci + 1, cj)] +
                 f.values[g.flatten_wrapped(ci, cj + 1)] +
                 f.values[g.flatten_wrapped(ci + 1, cj + 1)]);
}

void detect_cell(const WaveField& field, int ci, int cj,
                 std::vector<PointVortex>& out) {
  const GridSpec& g = field.grid;
  const double dx = g.dx();
  const cplx c00 = field.values[g.flatten_wrapped(ci, cj)];
  const cplx c10 = field.values[g.flatten_wrapped(ci + 1, cj)];
  const cplx c11 = field.values[g.flatten_wrapped(ci + 1, cj + 1)];
  const cplx c01 = field.values[g.flatten_wrapped(ci, cj + 1)];
  const WindingResult wr = quad_winding(c00, c10, c11, c01);
  if (wr.degenerate) {
    // Exact null on a corner: re-measure on the half-cell-shifted contour
    // through the four neighbouring cell centers, which encloses the grid
    // point (ci+1, cj+1) and nothing else.
    const WindingResult ws = quad_winding(cell_center_value(field, ci, cj),
                                          cell_center_value(field, ci + 1, cj),
                                          cell_center_value(field, ci + 1, cj + 1),
                                          cell_center_value(field, ci, cj + 1));
    if (!ws.degenerate && ws.w != 0) {
      PointVortex v;
      v.ci = g.wrap(ci + 1);
      v.cj = g.wrap(cj + 1);
      v.x = v.ci * dx;
      v.y = v.cj * dx;
      v.charge = ws.w;
      v.converged = true;  // the null sits exactly on the grid point
      out.push_back(v);
    }
    return;
  }
  if (wr.w == 0) return;
  PointVortex v;
  v.ci = g.wrap(ci);
  v.cj = g.wrap(cj);
  v.charge = wr.w;
  const NewtonResult nr = bilinear_null(c00, c10, c01, c11);
  v.converged = nr.converged;
  const double u = nr.converged ? std::clamp(nr.u, 0.0, 1.0) : 0.5;
  const double w = nr.converged ? std::clamp(nr.v, 0.0, 1.0) : 0.5;
  v.x = (v.ci + u) * dx;
  v.y = (v.cj + w) * dx;
  out.push_back(v);
}

}  // namespace

std::vector<PointVortex> detect_vortices_2d(const WaveField& field) {
  const GridSpec& g = field.grid;
  if (g.dims != 2)
    throw std::invalid_argument("detect_vortices_2d: 2D fields only");
  const int n = g.n;

  // Parallel winding/degeneracy scan, then a serial pass in cell order so the
  // output ordering is deterministic.
  std::vector<std::int8_t> hit(g.size(), 0);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      const WindingResult r =
          quad_winding(field.values[g.flatten(ci, static_cast<int>(cj))],
                       field.values[g.flatten_wrapped(ci + 1, static_cast<int>(cj))],
                       field.values[g.flatten_wrapped(ci + 1, static_cast<int>(cj) + 1)],
                       field.values[g.flatten_wrapped(ci, static_cast<int>(cj) + 1)]);
      hit[g.flatten(ci, static_cast<int>(cj))] =
          r.degenerate ? 2 : (r.w != 0 ? 1 : 0);
    }
  }
  std::vector<PointVortex> out;
  for (int cj = 0; cj < n; ++cj)
    for (int ci = 0; ci < n; ++ci)
      if (hit[g.flatten(ci, cj)] != 0) detect_cell(field, ci, cj, out);
  return out;
}

std::vector<PointVortex> detect_vortices_2d_window(const WaveField& field, int ci0,
                                                   int cj0, int size) {
  const GridSpec& g = field.grid;
  if (g.dims != 2)
    throw std::invalid_argument("detect_vortices_2d_window: 2D fields only");
  size = std::min(size, g.n);
  std::vector<PointVortex> out;
  for (int dj = 0; dj < size; ++dj)
    for (int di = 0; di < size; ++di) detect_cell(field, ci0 + di, cj0 + dj, out);
  return out;
}

int net_charge(const std::vector<PointVortex>& vortices) {
  int q = 0;
  for (const auto& v : vortices) q += v.charge;
  return q;
}

// ---------------------------------------------------------------------------
// 3D line tracing
// ---------------------------------------------------------------------------

namespace {

struct PiercedFace {
  int axis;             // face normal
  int ci, cj, ck;       // low face of this cell
  int sign;             // winding about +axis; line travels sign * e_axis
  std::array<double, 3> point;
};

// Transverse axes (u, v) with u x v = +axis.
inline void transverse_axes(int axis, int& ua, int& va) {
  ua = (axis + 1) % 3;
  va = (axis + 2) % 3;
}

cplx face_corner(const WaveField& f, int axis, int base[3], int du, int dv) {
  int idx[3] = {base[0], base[1], base[2]};
  int ua, va;
  transverse_axes(axis, ua, va);
  idx[ua] += du;
  idx[va] += dv;
  return f.values[f.grid.flatten_wrapped(idx[0], idx[1], idx[2])];
}

}  // namespace

namespace {

// Winding on every face, 3 orientations. Degenerate corners are perturbed by
// replacing the exact zero with the mean of the face corners.
std::array<std::vector<std::int8_t>, 3> face_windings(const WaveField& field) {
  const GridSpec& g = field.grid;
  const int n = g.n;
  std::array<std::vector<std::int8_t>, 3> wind;
  for (auto& w : wind) w.assign(g.size(), 0);
  for (int axis = 0; axis < 3; ++axis) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t ck = 0; ck < n; ++ck) {
      for (int cj = 0; cj < n; ++cj) {
        for (int ci = 0; ci < n; ++ci) {
          int base[3] = {ci, cj, static_cast<int>(ck)};
          cplx c00 = face_corner(field, axis, base, 0, 0);
          cplx c10 = face_corner(field, axis, base, 1, 0);
          cplx c11 = face_corner(field, axis, base, 1, 1);
          cplx c01 = face_corner(field, axis, base, 0, 1);
          WindingResult r = quad_winding(c00, c10, c11, c01);
          if (r.degenerate) {
            const cplx mean = 0.25 * (c00 + c10 + c11 + c01);
            if (is_zero(c00)) c00 = mean;
            if (is_zero(c10)) c10 = mean;
            if (is_zero(c11)) c11 = mean;
            if (is_zero(c01)) c01 = mean;
            r = quad_winding(c00, c10, c11, c01);
            if (r.degenerate) continue;
          }
          if (r.w > 1) r.w = 1;
          if (r.w < -1) r.w = -1;
          wind[axis][g.flatten(ci, cj, static_cast<int>(ck))] =
              static_cast<std::int8_t>(r.w);
        }
      }
    }
  }
  return wind;
}

}  // namespace

std::vector<std::uint8_t> pierced_faces_per_cell(const WaveField& field) {
  const GridSpec& g = field.grid;
  if (g.dims != 3)
    throw std::invalid_argument("pierced_faces_per_cell: 3D fields only");
  const auto wind = face_windings(field);
  const int n = g.n;
  std::vector<std::uint8_t> count(g.size(), 0);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t ck = 0; ck < n; ++ck) {
    for (int cj = 0; cj < n; ++cj) {
      for (int ci = 0; ci < n; ++ci) {
        std::uint8_t c = 0;
        for (int axis = 0; axis < 3; ++axis) {
          if (wind[axis][g.flatten(ci, cj, static_cast<int>(ck))] != 0) ++c;
          int nb[3] = {ci, cj, static_cast<int>(ck)};
          nb[axis] = g.wrap(nb[axis] + 1);
          if (wind[axis][g.flatten(nb[0], nb[1], nb[2])] != 0) ++c;
        }
        count[g.flatten(ci, cj, static_cast<int>(ck))] = c;
      }
    }
  }
  return count;
}

VortexLineSet trace_vortex_lines_3d(const WaveField& field) {
  const GridSpec& g = field.grid;
  if (g.dims != 3)
    throw std::invalid_argument("trace_vortex_lines_3d: 3D fields only");
  const int n = g.n;
  const double dx = g.dx();
  const std::size_t ncells = g.size();

  const std::array<std::vector<std::int8_t>, 3> wind = face_windings(field);

  // Collect pierced faces in fixed (axis, cell) order and refine the pierce
  // points on the face bilinears.
  std::vector<PiercedFace> faces;
  std::array<std::vector<std::int32_t>, 3> id;
  for (auto& v : id) v.assign(ncells, -1);
  for (int axis = 0; axis < 3; ++axis) {
    for (int ck = 0; ck < n; ++ck) {
      for (int cj = 0; cj < n; ++cj) {
        for (int ci = 0; ci < n; ++ci) {
          const std::int8_t s = wind[axis][g.flatten(ci, cj, ck)];
          if (s == 0) continue;
          PiercedFace pf;
          pf.axis = axis;
          pf.ci = ci;
          pf.cj = cj;
          pf.ck = ck;
          pf.sign = s;
          int base[3] = {ci, cj, ck};
          const NewtonResult nr = bilinear_null(
              face_corner(field, axis, base, 0, 0), face_corner(field, axis, base, 1, 0),
              face_corner(field, axis, base, 0, 1), face_corner(field, axis, base, 1, 1));
          const double u = nr.converged ? std::clamp(nr.u, 0.0, 1.0) : 0.5;
          const double v = nr.converged ? std::clamp(nr.v, 0.0, 1.0) : 0.5;
          int ua, va;
          transverse_axes(axis, ua, va);
          pf.point = {ci * dx, cj * dx, ck * dx};
          pf.point[ua] += u * dx;
          pf.point[va] += v * dx;
          id[axis][g.flatten(ci, cj, ck)] = static_cast<std::int32_t>(faces.size());
          faces.push_back(pf);
        }
      }
    }
  }

  // Pair incoming and outgoing piercings inside each cell. next[f] is the
  // outgoing face connected to incoming face f; the permutation's cycles are
  // the vortex lines.
  std::vector<std::int32_t> next(faces.size(), -1);
  auto mimg = [&](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = g.min_image(a[c] - b[c]);
      s += d * d;
    }
    return std::sqrt(s);
  };
  bool unbalanced = false;
#pragma omp parallel for schedule(static) reduction(|| : unbalanced) \
    num_threads(max_threads())
  for (std::ptrdiff_t cell = 0; cell < static_cast<std::ptrdiff_t>(ncells); ++cell) {
    const int ci = static_cast<int>(cell % n);
    const int cj = static_cast<int>((cell / n) % n);
    const int ck = static_cast<int>(cell / (static_cast<std::size_t>(n) * n));
    std::array<std::int32_t, 6> incoming{}, outgoing{};
    int nin = 0, nout = 0;
    for (int axis = 0; axis < 3; ++axis) {
      // low face
      const std::int32_t flo = id[axis][cell];
      if (flo >= 0) {
        const int s = faces[flo].sign;
        if (s > 0)
          incoming[nin++] = flo;
        else
          outgoing[nout++] = flo;
      }
      // high face = low face of the +axis neighbour
      int nb[3] = {ci, cj, ck};
      nb[axis] = g.wrap(nb[axis] + 1);
      const std::int32_t fhi = id[axis][g.flatten(nb[0], nb[1], nb[2])];
      if (fhi >= 0) {
        const int s = faces[fhi].sign;
        if (s > 0)
          outgoing[nout++] = fhi;
        else
          incoming[nin++] = fhi;
      }
    }
    if (nin != nout) {
      unbalanced = true;
      continue;
    }
    if (nin == 0) continue;
    if (nin == 1) {
      next[incoming[0]] = outgoing[0];
      continue;
    }
    // Minimal total connection length over assignments, first-found
    // (lexicographically smallest permutation) wins ties.
    std::array<int, 6> perm{};
    std::iota(perm.begin(), perm.begin() + nout, 0);
    std::array<int, 6> best = perm;
    double best_len = 1e300;
    do {
      double len = 0.0;
      for (int t = 0; t < nin; ++t)
        len += mimg(faces[incoming[t]].point, faces[outgoing[perm[t]]].point);
      if (len < best_len) {
        best_len = len;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.begin() + nout));
    for (int t = 0; t < nin; ++t) next[incoming[t]] = outgoing[best[t]];
  }
  if (unbalanced)
    throw std::logic_error("trace_vortex_lines_3d: unbalanced piercings in a cell");

  // Chain cycles.
  VortexLineSet set;
  set.grid = g;
  set.time = field.time;
  std::vector<std::uint8_t> visited(faces.size(), 0);
  for (std::size_t f0 = 0; f0 < faces.size(); ++f0) {
    if (visited[f0]) continue;
    VortexLine line;
    std::array<int, 3> net{0, 0, 0};
    std::int32_t f = static_cast<std::int32_t>(f0);
    do {
      visited[f] = 1;
      line.points.push_back(faces[f].point);
      net[faces[f].axis] += faces[f].sign;
      f = next[f];
      if (f < 0) throw std::logic_error("trace_vortex_lines_3d: broken chain");
    } while (f != static_cast<std::int32_t>(f0));
    line.closed = net[0] == 0 && net[1] == 0 && net[2] == 0;
    for (std::size_t p = 0; p < line.points.size(); ++p) {
      const auto& a = line.points[p];
      const auto& b = line.points[(p + 1) % line.points.size()];
      set.total_length += mimg(a, b);
    }
    set.lines.push_back(std::move(line));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Jets and velocities
// ---------------------------------------------------------------------------

namespace {

inline void catmull_rom_weights(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
  w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
  w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

std::vector<cplx> derivative_grid(const SpectralField& sf, int ox, int oy, int oz = 0) {
  return inverse_transform(spectral_derivative(sf, {ox, oy, oz})).values;
}

double mean_grad_sq(const std::vector<cplx>* d, int dims, std::size_t count) {
  double s = block_sum_indexed(count, [&](std::size_t i) {
    double g = 0.0;
    for (int a = 0; a < dims; ++a) g += std::norm(d[a][i]);
    return g;
  });
  return s / static_cast<double>(count);
}

std::array<double, 2> null_advection_solve(const cplx& du, const cplx& dv,
                                           const cplx& lap, double floor) {
  const double rx = du.real(), ry = dv.real();
  const double ix = du.imag(), iy = dv.imag();
  const double det = rx * iy - ry * ix;
  if (std::abs(det) < floor)
    throw TangentSurfacesError("vortex_velocity: grad R and grad I are parallel");
  const double bx = 0.5 * lap.imag();
  const double by = -0.5 * lap.real();
  return {(bx * iy - ry * by) / det, (rx * by - bx * ix) / det};
}

}  // namespace

Jet2Field::Jet2Field(const WaveField& field) : grid_(field.grid) {
  if (grid_.dims != 2) throw std::invalid_argument("Jet2Field: 2D fields only");
  const SpectralField sf = forward_transform(field);
  psi_ = field.values;
  dx_ = derivative_grid(sf, 1, 0);
  dy_ = derivative_grid(sf, 0, 1);
  dxx_ = derivative_grid(sf, 2, 0);
  dxy_ = derivative_grid(sf, 1, 1);
  dyy_ = derivative_grid(sf, 0, 2);
  const std::vector<cplx> d[2] = {dx_, dy_};
  typical_grad_sq_ = mean_grad_sq(d, 2, grid_.size());
}

cplx Jet2Field::sample(const std::vector<cplx>& a, double x, double y) const {
  const double gx = x / grid_.dx();
  const double gy = y / grid_.dx();
  const int i0 = static_cast<int>(std::floor(gx));
  const int j0 = static_cast<int>(std::floor(gy));
  double wx[4], wy[4];
  catmull_rom_weights(gx - i0, wx);
  catmull_rom_weights(gy - j0, wy);
  cplx acc{0.0, 0.0};
  for (int dj = 0; dj < 4; ++dj) {
    const int j = grid_.wrap(j0 - 1 + dj);
    cplx row{0.0, 0.0};
    for (int di = 0; di < 4; ++di)
      row += wx[di] * a[grid_.flatten(grid_.wrap(i0 - 1 + di), j)];
    acc += wy[dj] * row;
  }
  return acc;
}

Jet2 Jet2Field::at(double x, double y) const {
  Jet2 j;
  j.psi = sample(psi_, x, y);
  j.dx = sample(dx_, x, y);
  j.dy = sample(dy_, x, y);
  j.dxx = sample(dxx_, x, y);
  j.dxy = sample(dxy_, x, y);
  j.dyy = sample(dyy_, x, y);
  return j;
}

std::array<double, 2> vortex_velocity(const Jet2& jet, double degeneracy_floor) {
  return null_advection_solve(jet.dx, jet.dy, jet.lap(), degeneracy_floor);
}

std::array<double, 2> vortex_velocity(const Jet2Field& jets, double x, double y) {
  return vortex_velocity(jets.at(x, y), 1e-12 * jets.typical_grad_sq());
}

std::array<double, 2> material_velocity(const Jet2& jet, double degeneracy_floor) {
  const double gsq = std::norm(jet.dx) + std::norm(jet.dy);
  if (gsq < degeneracy_floor)
    throw TangentSurfacesError("material_velocity: |grad psi|^2 below floor");
  const cplx half_lap = 0.5 * jet.lap();
  const double nx =
      std::imag(std::conj(jet.dx) * jet.dxx + std::conj(jet.dy) * jet.dxy -
                std::conj(jet.dx) * half_lap);
  const double ny =
      std::imag(std::conj(jet.dx) * jet.dxy + std::conj(jet.dy) * jet.dyy -
                std::conj(jet.dy) * half_lap);
  return {nx / (2.0 * gsq), ny / (2.0 * gsq)};
}

std::array<double, 2> material_velocity(const Jet2Field& jets, double x, double y) {
  return material_velocity(jets.at(x, y), 1e-12 * jets.typical_grad_sq());
}

std::array<double, 2> biot_savart_2d(const std::vector<PointVortex>& vortices,
                                     std::array<double, 2> x, int exclude_index,
                                     double box) {
  auto mi = [box](double d) {
    while (d > 0.5 * box) d -= box;
    while (d < -0.5 * box) d += box;
    return d;
  };
  std::array<double, 2> v{0.0, 0.0};
  for (std::size_t j = 0; j < vortices.size(); ++j) {
    if (static_cast<int>(j) == exclude_index) continue;
    const double dxs = mi(x[0] - vortices[j].x);
    const double dys = mi(x[1] - vortices[j].y);
    const double r2 = dxs * dxs + dys * dys;
    if (r2 == 0.0)
      throw std::domain_error("biot_savart_2d: evaluation point on a vortex");
    v[0] += vortices[j].charge * (-dys) / r2;
    v[1] += vortices[j].charge * (dxs) / r2;
  }
  return v;
}

std::array<double, 2> track_null(const WaveField& field, std::array<double, 2> x0,
                                 double dt) {
  const GridSpec& g = field.grid;
  const double dx = g.dx();
  const WaveField fp = propagate(field, field.time + dt);
  const WaveField fm = propagate(field, field.time - dt);

  auto nulls_near = [&](const WaveField& f) {
    const int ci0 = static_cast<int>(std::floor(x0[0] / dx)) - 3;
    const int cj0 = static_cast<int>(std::floor(x0[1] / dx)) - 3;
    std::vector<PointVortex> cand = detect_vortices_2d_window(f, ci0, cj0, 7);
    std::sort(cand.begin(), cand.end(), [&](const PointVortex& a, const PointVortex& b) {
      const double da = std::hypot(g.min_image(a.x - x0[0]), g.min_image(a.y - x0[1]));
      const double db = std::hypot(g.min_image(b.x - x0[0]), g.min_image(b.y - x0[1]));
      return da < db;
    });
    return cand;
  };

  const std::vector<PointVortex> cp = nulls_near(fp);
  const std::vector<PointVortex> cm = nulls_near(fm);
  if (cp.empty() || cm.empty())
    throw TrackingAmbiguityError("track_null: no null found near x0");
  const double ddx = g.min_image(cp[0].x - cm[0].x);
  const double ddy = g.min_image(cp[0].y - cm[0].y);
  const double disp = std::hypot(ddx, ddy);
  auto second_dist = [&](const std::vector<PointVortex>& c) {
    if (c.size() < 2) return 1e300;
    return std::hypot(g.min_image(c[1].x - x0[0]), g.min_image(c[1].y - x0[1]));
  };
  if (second_dist(cp) < 2.0 * disp || second_dist(cm) < 2.0 * disp)
    throw TrackingAmbiguityError("track_null: another null within 2x displacement");
  return {ddx / (2.0 * dt), ddy / (2.0 * dt)};
}

// ---------------------------------------------------------------------------
// 3D jets
// ---------------------------------------------------------------------------

cplx Jet3::hess(int a, int b) const {
  if (a == b) return h[a];
  const int lo = std::min(a, b), hi = std::max(a, b);
  if (lo == 0 && hi == 1) return h[3];
  if (lo == 0 && hi == 2) return h[4];
  return h[5];
}

Jet3Field::Jet3Field(const WaveField& field) : grid_(field.grid) {
  if (grid_.dims != 3) throw std::invalid_argument("Jet3Field: 3D fields only");
  const SpectralField sf = forward_transform(field);
  psi_ = field.values;
  d_[0] = derivative_grid(sf, 1, 0, 0);
  d_[1] = derivative_grid(sf, 0, 1, 0);
  d_[2] = derivative_grid(sf, 0, 0, 1);
  h_[0] = derivative_grid(sf, 2, 0, 0);
  h_[1] = derivative_grid(sf, 0, 2, 0);
  h_[2] = derivative_grid(sf, 0, 0, 2);
  h_[3] = derivative_grid(sf, 1, 1, 0);
  h_[4] = derivative_grid(sf, 1, 0, 1);
  h_[5] = derivative_grid(sf, 0, 1, 1);
  typical_grad_sq_ = mean_grad_sq(d_.data(), 3, grid_.size());
}

cplx Jet3Field::sample(const std::vector<cplx>& a, const std::array<double, 3>& x) const {
  const double dx = grid_.dx();
  int i0[3];
  double w[3][4];
  for (int c = 0; c < 3; ++c) {
    const double gc = x[c] / dx;
    i0[c] = static_cast<int>(std::floor(gc));
    catmull_rom_weights(gc - i0[c], w[c]);
  }
  cplx acc{0.0, 0.0};
  for (int dk = 0; dk < 4; ++dk) {
    const int k = grid_.wrap(i0[2] - 1 + dk);
    cplx plane{0.0, 0.0};
    for (int dj = 0; dj < 4; ++dj) {
      const int j = grid_.wrap(i0[1] - 1 + dj);
      cplx row{0.0, 0.0};
      for (int di = 0; di < 4; ++di)
        row += w[0][di] * a[grid_.flatten(grid_.wrap(i0[0] - 1 + di), j, k)];
      plane += w[1][dj] * row;
    }
    acc += w[2][dk] * plane;
  }
  return acc;
}

Jet3 Jet3Field::at(const std::array<double, 3>& x) const {
  Jet3 j;
  j.psi = sample(psi_, x);
  for (int a = 0; a < 3; ++a) j.d[a] = sample(d_[a], x);
  for (int a = 0; a < 6; ++a) j.h[a] = sample(h_[a], x);
  return j;
}

std::array<double, 3> vortex_velocity_3d(const Jet3& jet,
                                         const std::array<double, 3>& tangent,
                                         double degeneracy_floor) {
  const double tn =
      std::sqrt(tangent[0] * tangent[0] + tangent[1] * tangent[1] + tangent[2] * tangent[2]);
  if (!(tn > 0.0))
    throw std::invalid_argument("vortex_velocity_3d: zero tangent");
  const std::array<double, 3> t{tangent[0] / tn, tangent[1] / tn, tangent[2] / tn};
  // Orthonormal basis of the plane perpendicular to the line.
  int least = 0;
  for (int c = 1; c < 3; ++c)
    if (std::abs(t[c]) < std::abs(t[least])) least = c;
  std::array<double, 3> e1{0.0, 0.0, 0.0};
  e1[least] = 1.0;
  const double proj = e1[0] * t[0] + e1[1] * t[1] + e1[2] * t[2];
  double e1n = 0.0;
  for (int c = 0; c < 3; ++c) {
    e1[c] -= proj * t[c];
    e1n += e1[c] * e1[c];
  }
  e1n = std::sqrt(e1n);
  for (int c = 0; c < 3; ++c) e1[c] /= e1n;
  const std::array<double, 3> e2{t[1] * e1[2] - t[2] * e1[1],
                                 t[2] * e1[0] - t[0] * e1[2],
                                 t[0] * e1[1] - t[1] * e1[0]};

  cplx du{0.0, 0.0}, dv{0.0, 0.0}, lap{0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    du += e1[a] * jet.d[a];
    dv += e2[a] * jet.d[a];
    for (int b = 0; b < 3; ++b)
      lap += (e1[a] * e1[b] + e2[a] * e2[b]) * jet.hess(a, b);
  }
  const std::array<double, 2> w2 = null_advection_solve(du, dv, lap, degeneracy_floor);
  return {w2[0] * e1[0] + w2[1] * e2[0], w2[0] * e1[1] + w2[1] * e2[1],
          w2[0] * e1[2] + w2[1] * e2[2]};
}

}  // namespace qvort
