#include "discretize.hpp"

#include <algorithm>
#include "errors.hpp"

namespace paradin {

namespace {

// Neighbor values with Dirichlet data folded in at the domain edges.
struct Stencil {
  double c, w, e, s, n;
  bool w_interior, e_interior, s_interior, n_interior;
};

Stencil gather(const ProblemSpec& p, const GridSpec& g, const Field& u, int i, int j,
               double t) {
  Stencil st{};
  st.c = u.at(i, j, g.nx);
  st.w_interior = i > 1;
  st.e_interior = i < g.nx;
  st.s_interior = j > 1;
  st.n_interior = j < g.ny;
  st.w = st.w_interior ? u.at(i - 1, j, g.nx) : exact_solution(p, g.x_left, g.y(j), t);
  st.e = st.e_interior ? u.at(i + 1, j, g.nx) : exact_solution(p, g.x_right, g.y(j), t);
  st.s = st.s_interior ? u.at(i, j - 1, g.nx) : exact_solution(p, g.x(i), g.y_left, t);
  st.n = st.n_interior ? u.at(i, j + 1, g.nx) : exact_solution(p, g.x(i), g.y_right, t);
  return st;
}

}  // namespace

Field spatial_operator(const ProblemSpec& p, const GridSpec& g, const Field& u, double t) {
  if (u.size() != g.num_spatial())
    throw InvalidArgument("spatial_operator: field size does not match grid");
  Field F(g.num_spatial());
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);
  for (int j = 1; j <= g.ny; ++j) {
    for (int i = 1; i <= g.nx; ++i) {
      const Stencil st = gather(p, g, u, i, j, t);
      const double conv = (flux_x(p, st.e) - flux_x(p, st.w)) / (2.0 * g.hx) +
                          (flux_y(p, st.n) - flux_y(p, st.s)) / (2.0 * g.hy);
      const double mu_c = viscosity(p, st.c);
      const double mu_e = 0.5 * (mu_c + viscosity(p, st.e));
      const double mu_w = 0.5 * (viscosity(p, st.w) + mu_c);
      const double mu_n = 0.5 * (mu_c + viscosity(p, st.n));
      const double mu_s = 0.5 * (viscosity(p, st.s) + mu_c);
      const double diff = (mu_e * (st.e - st.c) - mu_w * (st.c - st.w)) * ihx2 +
                          (mu_n * (st.n - st.c) - mu_s * (st.c - st.s)) * ihy2;
      F.at(i, j, g.nx) = conv - diff;
    }
  }
  return F;
}

Field bdf1_residual(const ProblemSpec& p, const GridSpec& g, const Field& u_n,
                    const Field& u_prev, double t_n, double tau) {
  if (u_n.size() != g.num_spatial() || u_prev.size() != g.num_spatial())
    throw InvalidArgument("bdf1_residual: field size does not match grid");
  const Field F = spatial_operator(p, g, u_n, t_n);
  Field r(g.num_spatial());
  for (int k = 0; k < g.num_spatial(); ++k)
    r.v[k] = -((u_n.v[k] - u_prev.v[k]) + tau * F.v[k]);
  return r;
}

BandedMatrix assemble_jacobian(const ProblemSpec& p, const GridSpec& g, const Field& u,
                               double t, double tau) {
  if (u.size() != g.num_spatial())
    throw InvalidArgument("assemble_jacobian: field size does not match grid");
  const int ns = g.num_spatial();
  // y-neighbor offset in row-major interior ordering, capped for degenerate
  // single-row or single-node grids where that offset never occurs.
  const int bw = std::min(g.nx, ns - 1);
  BandedMatrix A(ns, bw);
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);

  for (int j = 1; j <= g.ny; ++j) {
    for (int i = 1; i <= g.nx; ++i) {
      const int row = (j - 1) * g.nx + (i - 1);
      const Stencil st = gather(p, g, u, i, j, t);
      const double mu_c = viscosity(p, st.c);
      const double mu_e = 0.5 * (mu_c + viscosity(p, st.e));
      const double mu_w = 0.5 * (viscosity(p, st.w) + mu_c);
      const double mu_n = 0.5 * (mu_c + viscosity(p, st.n));
      const double mu_s = 0.5 * (viscosity(p, st.s) + mu_c);

      // Each half-node viscosity averages the two endpoint values, so a node
      // contributes its own law derivative with weight 1/2.
      const double dmu_c = viscosity_derivative(p, st.c);
      const double dc =
          -(0.5 * dmu_c * (st.e - st.c) - mu_e - 0.5 * dmu_c * (st.c - st.w) - mu_w) * ihx2 -
          (0.5 * dmu_c * (st.n - st.c) - mu_n - 0.5 * dmu_c * (st.c - st.s) - mu_s) * ihy2;
      A.ref(row, row) = 1.0 + tau * dc;

      if (st.w_interior) {
        const double dw = -flux_x_derivative(p, st.w) / (2.0 * g.hx) +
                          (0.5 * viscosity_derivative(p, st.w) * (st.c - st.w) - mu_w) * ihx2;
        A.ref(row, row - 1) = tau * dw;
      }
      if (st.e_interior) {
        const double de = flux_x_derivative(p, st.e) / (2.0 * g.hx) -
                          (0.5 * viscosity_derivative(p, st.e) * (st.e - st.c) + mu_e) * ihx2;
        A.ref(row, row + 1) = tau * de;
      }
      if (st.s_interior) {
        const double ds = -flux_y_derivative(p, st.s) / (2.0 * g.hy) +
                          (0.5 * viscosity_derivative(p, st.s) * (st.c - st.s) - mu_s) * ihy2;
        A.ref(row, row - g.nx) = tau * ds;
      }
      if (st.n_interior) {
        const double dn = flux_y_derivative(p, st.n) / (2.0 * g.hy) -
                          (0.5 * viscosity_derivative(p, st.n) * (st.n - st.c) + mu_n) * ihy2;
        A.ref(row, row + g.nx) = tau * dn;
      }
    }
  }
  return A;
}

}  // namespace paradin
