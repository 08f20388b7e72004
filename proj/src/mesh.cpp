#include "mesh.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace paradin {

GridSpec make_grid(double x_left, double x_right, double y_left, double y_right,
                   double t_final, int nx, int ny, int nt) {
  if (!(x_right > x_left) || !(y_right > y_left))
    throw InvalidArgument("make_grid: domain bounds must satisfy left < right");
  if (!(t_final > 0.0)) throw InvalidArgument("make_grid: t_final must be positive");
  if (nx < 1 || ny < 1 || nt < 1)
    throw InvalidArgument("make_grid: interior counts nx, ny and time count nt must be >= 1");
  GridSpec g;
  g.x_left = x_left;
  g.x_right = x_right;
  g.y_left = y_left;
  g.y_right = y_right;
  g.t_final = t_final;
  g.nx = nx;
  g.ny = ny;
  g.nt = nt;
  g.hx = (x_right - x_left) / (nx + 1);
  g.hy = (y_right - y_left) / (ny + 1);
  g.tau = t_final / nt;
  return g;
}

GridSpec coarsen_grid(const GridSpec& g, int cf_space, int cf_time) {
  if (cf_space < 1 || cf_time < 1)
    throw InvalidArgument("coarsen_grid: coarsening factors must be >= 1");
  if (g.nt % cf_time != 0)
    throw InvalidArgument("coarsen_grid: cf_time " + std::to_string(cf_time) +
                          " does not divide nt " + std::to_string(g.nt));
  int nxc = g.nx / cf_space;
  int nyc = g.ny / cf_space;
  if (nxc < 1) nxc = 1;
  if (nyc < 1) nyc = 1;
  return make_grid(g.x_left, g.x_right, g.y_left, g.y_right, g.t_final, nxc, nyc,
                   g.nt / cf_time);
}

bool nesting_ok(const GridSpec& g, int cs) {
  if (cs < 1) return false;
  if ((g.nx + 1) % cs != 0 || (g.ny + 1) % cs != 0) return false;
  return (g.nx + 1) / cs >= 2 && (g.ny + 1) / cs >= 2;
}

GridSpec nested_coarse_grid(const GridSpec& g, int cs) {
  if (!nesting_ok(g, cs))
    throw InvalidArgument(
        "nested_coarse_grid: cs " + std::to_string(cs) + " does not nest in nx " +
        std::to_string(g.nx) + ", ny " + std::to_string(g.ny) +
        " ((n+1) must be divisible by cs with at least one interior node left)");
  return make_grid(g.x_left, g.x_right, g.y_left, g.y_right, g.t_final,
                   (g.nx + 1) / cs - 1, (g.ny + 1) / cs - 1, g.nt);
}

Field restrict_injection(const Field& fine, const GridSpec& fine_grid, int cs) {
  if (!nesting_ok(fine_grid, cs))
    throw InvalidArgument("restrict_injection: grid does not admit nesting factor " +
                          std::to_string(cs));
  if (fine.size() != fine_grid.num_spatial())
    throw InvalidArgument("restrict_injection: field size does not match grid");
  const int nxc = (fine_grid.nx + 1) / cs - 1;
  const int nyc = (fine_grid.ny + 1) / cs - 1;
  Field coarse(nxc * nyc);
  for (int j = 1; j <= nyc; ++j)
    for (int i = 1; i <= nxc; ++i)
      coarse.at(i, j, nxc) = fine.at(cs * i, cs * j, fine_grid.nx);
  return coarse;
}

namespace {

// Second derivatives (moments) of the natural cubic spline through (xs, ys),
// via the standard tridiagonal system solved with the Thomas algorithm.
std::vector<double> spline_moments(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;  // two knots: a straight segment, zero curvature
  std::vector<double> diag(n - 2), sub(n - 2), sup(n - 2), rhs(n - 2);
  for (int i = 1; i <= n - 2; ++i) {
    const double hl = xs[i] - xs[i - 1];
    const double hr = xs[i + 1] - xs[i];
    sub[i - 1] = hl;
    diag[i - 1] = 2.0 * (hl + hr);
    sup[i - 1] = hr;
    rhs[i - 1] = 6.0 * ((ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl);
  }
  for (int i = 1; i < n - 2; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  // Back substitution over the interior moments m[1..n-2].
  m[n - 2] = rhs[n - 3] / diag[n - 3];
  for (int i = n - 4; i >= 0; --i) m[i + 1] = (rhs[i] - sup[i] * m[i + 2]) / diag[i];
  return m;
}

double spline_value(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& m, double x) {
  const int n = static_cast<int>(xs.size());
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (xs[mid] <= x ? lo : hi) = mid;
  }
  const double h = xs[hi] - xs[lo];
  const double a = xs[hi] - x;
  const double b = x - xs[lo];
  return m[lo] * a * a * a / (6.0 * h) + m[hi] * b * b * b / (6.0 * h) +
         (ys[lo] / h - m[lo] * h / 6.0) * a + (ys[hi] / h - m[hi] * h / 6.0) * b;
}

}  // namespace

std::vector<double> natural_spline_eval(const std::vector<double>& xs,
                                        const std::vector<double>& ys,
                                        const std::vector<double>& xq) {
  if (xs.size() < 2) throw InvalidArgument("natural_spline_eval: need at least 2 knots");
  if (xs.size() != ys.size())
    throw InvalidArgument("natural_spline_eval: knot/value size mismatch");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw InvalidArgument("natural_spline_eval: knots must be strictly increasing");
  const std::vector<double> m = spline_moments(xs, ys);
  std::vector<double> out(xq.size());
  for (size_t k = 0; k < xq.size(); ++k) out[k] = spline_value(xs, ys, m, xq[k]);
  return out;
}

Field prolong_cubic_spline(const Field& coarse, const GridSpec& cg, const GridSpec& fg,
                           const std::function<double(double, double)>* boundary) {
  if (cg.x_left != fg.x_left || cg.x_right != fg.x_right || cg.y_left != fg.y_left ||
      cg.y_right != fg.y_right)
    throw InvalidArgument("prolong_cubic_spline: grids must share domain extents");
  if (coarse.size() != cg.num_spatial())
    throw InvalidArgument("prolong_cubic_spline: field size does not match coarse grid");

  auto edge = [&](double x, double y) { return boundary ? (*boundary)(x, y) : 0.0; };

  std::vector<double> xknots(cg.nx + 2), xq(fg.nx);
  for (int i = 0; i <= cg.nx + 1; ++i) xknots[i] = cg.x(i);
  for (int i = 1; i <= fg.nx; ++i) xq[i - 1] = fg.x(i);

  // x-direction pass: one spline per coarse row, sampled at fine abscissae.
  std::vector<std::vector<double>> mid(cg.ny, std::vector<double>(fg.nx));
  std::vector<double> ys(cg.nx + 2);
  for (int j = 1; j <= cg.ny; ++j) {
    ys[0] = edge(cg.x_left, cg.y(j));
    for (int i = 1; i <= cg.nx; ++i) ys[i] = coarse.at(i, j, cg.nx);
    ys[cg.nx + 1] = edge(cg.x_right, cg.y(j));
    mid[j - 1] = natural_spline_eval(xknots, ys, xq);
  }

  std::vector<double> yknots(cg.ny + 2), yq(fg.ny);
  for (int j = 0; j <= cg.ny + 1; ++j) yknots[j] = cg.y(j);
  for (int j = 1; j <= fg.ny; ++j) yq[j - 1] = fg.y(j);

  // y-direction pass: one spline per fine column.
  Field fine(fg.num_spatial());
  std::vector<double> col(cg.ny + 2);
  for (int i = 1; i <= fg.nx; ++i) {
    col[0] = edge(fg.x(i), fg.y_left);
    for (int j = 1; j <= cg.ny; ++j) col[j] = mid[j - 1][i - 1];
    col[cg.ny + 1] = edge(fg.x(i), fg.y_right);
    const std::vector<double> vals = natural_spline_eval(yknots, col, yq);
    for (int j = 1; j <= fg.ny; ++j) fine.at(i, j, fg.nx) = vals[j - 1];
  }
  return fine;
}

}  // namespace paradin
