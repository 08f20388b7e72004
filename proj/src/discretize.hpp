// Second-order central-difference spatial operator, backward-Euler residual,
// and the exact banded Newton matrix A = I + tau * dF/du.
//
// The Newton convention used throughout the solvers: A * du = r with
// r = -[(u^n - u^{n-1}) + tau * F(u^n, t_n)] and update u <- u + du.  This is
// the per-level nonlinear equation scaled by tau, which makes the all-at-once
// time coupling an unscaled -I block below the diagonal.
#pragma once

#include "bandlinalg.hpp"
#include "mesh.hpp"
#include "model.hpp"

namespace paradin {

// F(u)_{ji} = d/dx f + d/dy g - d/dx(mu du/dx) - d/dy(mu du/dy) with central
// differences, viscosity evaluated at arithmetic half-node averages, and
// off-grid neighbors replaced by Dirichlet data at time t.
Field spatial_operator(const ProblemSpec& p, const GridSpec& g, const Field& u, double t);

// r = -[(u_n - u_prev) + tau * F(u_n, t_n)], the Newton right-hand side.
Field bdf1_residual(const ProblemSpec& p, const GridSpec& g, const Field& u_n,
                    const Field& u_prev, double t_n, double tau);

// A = I + tau * dF/du at state u, exact derivatives including the chain rule
// through the half-node viscosity averages and the convective flux.  The
// half-bandwidth equals nx; positions inside the band that cross a grid-row
// boundary are explicit zeros.
BandedMatrix assemble_jacobian(const ProblemSpec& p, const GridSpec& g, const Field& u,
                               double t, double tau);

}  // namespace paradin
