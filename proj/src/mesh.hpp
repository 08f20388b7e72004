// Uniform space-time grids, fields, and grid transfer operators.
//
// Spatial convention: nx and ny count *interior* nodes per direction, so the
// spacing is hx = (x_right - x_left) / (nx + 1) and node i (1-based) sits at
// x_left + i*hx.  Boundary nodes carry Dirichlet data and are never unknowns.
// A Field stores one time level of interior values in row-major order:
// value(i, j) at index (j-1)*nx + (i-1).
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace paradin {

struct GridSpec {
  double x_left = 0.0, x_right = 1.0;
  double y_left = 0.0, y_right = 1.0;
  double t_final = 1.0;
  int nx = 0, ny = 0, nt = 0;
  double hx = 0.0, hy = 0.0, tau = 0.0;

  int num_spatial() const { return nx * ny; }
  double x(int i) const { return x_left + i * hx; }    // i in [0, nx+1]
  double y(int j) const { return y_left + j * hy; }    // j in [0, ny+1]
  double t(int n) const { return n * tau; }            // n in [0, nt]
};

struct Field {
  std::vector<double> v;

  Field() = default;
  explicit Field(int n, double fill = 0.0) : v(static_cast<size_t>(n), fill) {}
  double& at(int i, int j, int nx) { return v[static_cast<size_t>(j - 1) * nx + (i - 1)]; }
  double at(int i, int j, int nx) const { return v[static_cast<size_t>(j - 1) * nx + (i - 1)]; }
  int size() const { return static_cast<int>(v.size()); }
};

// u^0 plus the nt unknown time levels of a space-time solution.
struct SpaceTimeSolution {
  Field initial;
  std::vector<Field> levels;  // levels[n-1] is time level n, n = 1..nt
};

// Validates bounds and counts; fills in spacings.
GridSpec make_grid(double x_left, double x_right, double y_left, double y_right,
                   double t_final, int nx, int ny, int nt);

// Grid used to build cheap initial guesses: time count divides exactly, the
// spatial counts shrink by integer division (floored, at least one interior
// node).  The result is generally not node-nested in the fine grid; it only
// feeds spline prolongation, which needs no nesting.
GridSpec coarsen_grid(const GridSpec& g, int cf_space, int cf_time);

// Grid whose nodes coincide with every cs-th fine node (indices cs, 2cs, ...).
// Requires (nx+1) and (ny+1) divisible by cs so that the coarse boundary
// lands on the fine boundary.  Time count is unchanged.
GridSpec nested_coarse_grid(const GridSpec& g, int cs);
bool nesting_ok(const GridSpec& g, int cs);

// Copies the fine values at coinciding nodes of the nested coarse grid.
// No arithmetic is performed.
Field restrict_injection(const Field& fine, const GridSpec& fine_grid, int cs);

// Interpolates a coarse field onto the fine interior by 1-D natural cubic
// splines, x-direction first, then y.  Both grids must share extents.  The
// spline knots in each pass include the domain-edge values supplied by
// `boundary`, evaluated at the edge coordinates for that pass; pass nullptr
// for homogeneous (zero) edge data, which is the right choice for Newton
// update and coupling vectors.
Field prolong_cubic_spline(const Field& coarse, const GridSpec& coarse_grid,
                           const GridSpec& fine_grid,
                           const std::function<double(double, double)>* boundary = nullptr);

// Natural cubic spline through (xs, ys), evaluated at xq.  Exposed for reuse
// by the time-direction interpolation in the initial-guess builder.
std::vector<double> natural_spline_eval(const std::vector<double>& xs,
                                        const std::vector<double>& ys,
                                        const std::vector<double>& xq);

}  // namespace paradin
