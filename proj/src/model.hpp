// Problem definitions: conservative-form model equation
//   u_t + f(u)_x + g(u)_y = (mu(u) u_x)_x + (mu(u) u_y)_y
// with Dirichlet data taken from a known exact solution.
#pragma once

#include "mesh.hpp"

namespace paradin {

enum class ProblemKind { NonlinearHeat, Burgers };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::NonlinearHeat;
  // NonlinearHeat: mu(u) = mu0 * u^2, f = g = 0, exact solution
  //   u = sqrt(sqrt(alpha/mu0) * (x + y) + alpha * t + 1).
  // Burgers: mu(u) = mu0 (constant), f = g = u^2 / 2, travelling wave
  //   u = (v/2) * (1 - tanh(v (x + y - v t) / (4 mu0))) with v = shock_speed.
  double mu0 = 1e-6;
  double alpha = 1.0;
  double shock_speed = 0.5;
};

ProblemSpec heat_problem(double mu0 = 1e-6, double alpha = 1.0);
ProblemSpec burgers_problem(double mu0 = 1e-3, double shock_speed = 0.5);

double flux_x(const ProblemSpec& p, double u);
double flux_y(const ProblemSpec& p, double u);
double flux_x_derivative(const ProblemSpec& p, double u);
double flux_y_derivative(const ProblemSpec& p, double u);
double viscosity(const ProblemSpec& p, double u);
double viscosity_derivative(const ProblemSpec& p, double u);

// Exact solution; for the heat problem the radicand must be positive.
double exact_solution(const ProblemSpec& p, double x, double y, double t);

enum class Side { West, East, South, North };

// Dirichlet boundary data on one domain edge; `coord` is the coordinate that
// varies along the edge (y for West/East, x for South/North).
double boundary_value(const ProblemSpec& p, const GridSpec& g, Side side, double coord,
                      double t);

// Exact solution sampled on the interior at t = 0.
Field initial_field(const ProblemSpec& p, const GridSpec& g);

// Exact solution sampled on the interior at time t.
Field exact_field(const ProblemSpec& p, const GridSpec& g, double t);

}  // namespace paradin
