#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "qvort/field.hpp"

namespace qvort {

struct DegenerateCornerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Parallel gradients of Re psi and Im psi: the pair-creation/annihilation
// configuration where the two null surfaces are tangent.
struct TangentSurfacesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrackingAmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointVortex {
  double x = 0.0, y = 0.0;  // box coordinates
  int charge = 0;
  int ci = 0, cj = 0;  // host cell
  bool converged = true;
};

// (1/2pi) sum of wrapped phase differences around the cell plaquette.
// Throws DegenerateCornerError if a corner is exactly zero.
int plaquette_winding(const WaveField& field, int ci, int cj);

// One PointVortex per plaquette with nonzero winding; subpixel position from
// Newton iteration on the bilinear interpolants of Re psi and Im psi.
std::vector<PointVortex> detect_vortices_2d(const WaveField& field);

// Same detector restricted to cells [ci0, ci0+size) x [cj0, cj0+size), wrapped.
std::vector<PointVortex> detect_vortices_2d_window(const WaveField& field, int ci0,
                                                   int cj0, int size);

int net_charge(const std::vector<PointVortex>& vortices);

struct VortexLine {
  std::vector<std::array<double, 3>> points;  // pierce points, box coordinates
  bool closed = true;                          // false: threads the periodic box
};

struct VortexLineSet {
  GridSpec grid;
  double time = 0.0;
  std::vector<VortexLine> lines;
  double total_length = 0.0;
};

// Face-winding line threading: every cell face gets a winding, pierced faces
// are paired inside each cell (minimal connection length, lexicographic
// tie-break) and chained into oriented polylines.
VortexLineSet trace_vortex_lines_3d(const WaveField& field);

// Diagnostic for the topology invariant: pierced faces of each cell (counting
// all 6 faces). Every entry must be even for a single-valued field.
std::vector<std::uint8_t> pierced_faces_per_cell(const WaveField& field);

// Value and derivatives of the trigonometric interpolant at one point.
struct Jet2 {
  cplx psi, dx, dy, dxx, dxy, dyy;
  cplx lap() const { return dxx + dyy; }
};

// Spectral derivative grids of a 2D field plus bicubic (Catmull-Rom) sampling.
class Jet2Field {
 public:
  explicit Jet2Field(const WaveField& field);
  Jet2 at(double x, double y) const;
  double typical_grad_sq() const { return typical_grad_sq_; }
  const GridSpec& grid() const { return grid_; }

 private:
  cplx sample(const std::vector<cplx>& a, double x, double y) const;
  GridSpec grid_;
  std::vector<cplx> psi_, dx_, dy_, dxx_, dxy_, dyy_;
  double typical_grad_sq_ = 0.0;
};

// Vortex propagation velocity from null advection:
//   w . grad R = lap(I)/2,   w . grad I = -lap(R)/2.
// Throws TangentSurfacesError when |grad R x grad I| < degeneracy_floor.
std::array<double, 2> vortex_velocity(const Jet2& jet, double degeneracy_floor);
std::array<double, 2> vortex_velocity(const Jet2Field& jets, double x, double y);

// Regularized material velocity
//   Im[grad psi* . (grad grad - I lap/2) psi] / (2 |grad psi|^2).
std::array<double, 2> material_velocity(const Jet2& jet, double degeneracy_floor);
std::array<double, 2> material_velocity(const Jet2Field& jets, double x, double y);

// Classical induction, minimum-image separations, no image sums.
std::array<double, 2> biot_savart_2d(const std::vector<PointVortex>& vortices,
                                     std::array<double, 2> x, int exclude_index,
                                     double box);

// Oracle for the vortex velocity: propagate by +-dt, re-detect the nearest
// null, centered difference.
std::array<double, 2> track_null(const WaveField& field, std::array<double, 2> x0,
                                 double dt);

// 3D jets, used to evaluate the 2D velocity formulas in the plane
// perpendicular to the local line tangent.
struct Jet3 {
  cplx psi;
  std::array<cplx, 3> d;
  std::array<cplx, 6> h;  // xx, yy, zz, xy, xz, yz
  cplx hess(int a, int b) const;
};

class Jet3Field {
 public:
  explicit Jet3Field(const WaveField& field);
  Jet3 at(const std::array<double, 3>& x) const;
  double typical_grad_sq() const { return typical_grad_sq_; }
  const GridSpec& grid() const { return grid_; }

 private:
  cplx sample(const std::vector<cplx>& a, const std::array<double, 3>& x) const;
  GridSpec grid_;
  std::vector<cplx> psi_;
  std::array<std::vector<cplx>, 3> d_;
  std::array<std::vector<cplx>, 6> h_;
  double typical_grad_sq_ = 0.0;
};

std::array<double, 3> vortex_velocity_3d(const Jet3& jet,
                                         const std::array<double, 3>& tangent,
                                         double degeneracy_floor);

}  // namespace qvort
