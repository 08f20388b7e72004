#include "model.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace paradin {

ProblemSpec heat_problem(double mu0, double alpha) {
  if (!(mu0 > 0.0) || !(alpha > 0.0))
    throw InvalidArgument("heat_problem: mu0 and alpha must be positive");
  ProblemSpec p;
  p.kind = ProblemKind::NonlinearHeat;
  p.mu0 = mu0;
  p.alpha = alpha;
  return p;
}

ProblemSpec burgers_problem(double mu0, double shock_speed) {
  if (!(mu0 > 0.0)) throw InvalidArgument("burgers_problem: mu0 must be positive");
  ProblemSpec p;
  p.kind = ProblemKind::Burgers;
  p.mu0 = mu0;
  p.shock_speed = shock_speed;
  return p;
}

double flux_x(const ProblemSpec& p, double u) {
  return p.kind == ProblemKind::Burgers ? 0.5 * u * u : 0.0;
}

double flux_y(const ProblemSpec& p, double u) { return flux_x(p, u); }

double flux_x_derivative(const ProblemSpec& p, double u) {
  return p.kind == ProblemKind::Burgers ? u : 0.0;
}

double flux_y_derivative(const ProblemSpec& p, double u) { return flux_x_derivative(p, u); }

double viscosity(const ProblemSpec& p, double u) {
  return p.kind == ProblemKind::NonlinearHeat ? p.mu0 * u * u : p.mu0;
}

double viscosity_derivative(const ProblemSpec& p, double u) {
  return p.kind == ProblemKind::NonlinearHeat ? 2.0 * p.mu0 * u : 0.0;
}

double exact_solution(const ProblemSpec& p, double x, double y, double t) {
  if (p.kind == ProblemKind::NonlinearHeat) {
    const double s = std::sqrt(p.alpha / p.mu0) * (x + y) + p.alpha * t + 1.0;
    if (!(s > 0.0))
      throw InvalidArgument("exact_solution: heat radicand nonpositive at x=" +
                            std::to_string(x) + " y=" + std::to_string(y) +
                            " t=" + std::to_string(t));
    return std::sqrt(s);
  }
  const double v = p.shock_speed;
  return 0.5 * v * (1.0 - std::tanh(v * (x + y - v * t) / (4.0 * p.mu0)));
}

double boundary_value(const ProblemSpec& p, const GridSpec& g, Side side, double coord,
                      double t) {
  switch (side) {
    case Side::West: return exact_solution(p, g.x_left, coord, t);
    case Side::East: return exact_solution(p, g.x_right, coord, t);
    case Side::South: return exact_solution(p, coord, g.y_left, t);
    default: return exact_solution(p, coord, g.y_right, t);
  }
}

Field exact_field(const ProblemSpec& p, const GridSpec& g, double t) {
  Field f(g.num_spatial());
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) f.at(i, j, g.nx) = exact_solution(p, g.x(i), g.y(j), t);
  return f;
}

Field initial_field(const ProblemSpec& p, const GridSpec& g) { return exact_field(p, g, 0.0); }

}  // namespace paradin
