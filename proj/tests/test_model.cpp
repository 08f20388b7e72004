#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "model.hpp"

using namespace paradin;

namespace {

// Centered first difference of f at x.
template <typename F>
double d1(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("heat exact solution at frozen points") {
    ProblemSpec p = heat_problem();
    // sqrt(1000 * (x + y) + t + 1)
    CHECK(exact_solution(p, 0.1, 0.1, 0.0) ==
          doctest::Approx(14.177446878757825).epsilon(1e-15));
    CHECK(exact_solution(p, 0.1, 0.1, 0.0) == doctest::Approx(std::sqrt(201.0)).epsilon(1e-15));
    CHECK(exact_solution(p, 0.6, 0.6, 0.5) ==
          doctest::Approx(34.662660024874029).epsilon(1e-15));
  }

  TEST_CASE("heat exact solution rejects a nonpositive radicand") {
    ProblemSpec p = heat_problem();
    CHECK_THROWS_AS(exact_solution(p, -1.0, -1.0, 0.0), InvalidArgument);
  }

  TEST_CASE("heat problem validates its parameters") {
    CHECK_THROWS_AS(heat_problem(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(heat_problem(1e-6, -1.0), InvalidArgument);
    CHECK_THROWS_AS(burgers_problem(0.0, 0.5), InvalidArgument);
  }

  TEST_CASE("burgers travelling wave at frozen points") {
    ProblemSpec p = burgers_problem();
    // 0.25 * (1 - tanh(0.5 (x + y - 0.5 t) / 0.004)); the argument is 1 here
    CHECK(exact_solution(p, 0.008, 0.0, 0.0) ==
          doctest::Approx(0.059601461011058787).epsilon(1e-15));
    CHECK(exact_solution(p, 0.008, 0.0, 0.0) ==
          doctest::Approx(0.25 * (1.0 - std::tanh(1.0))).epsilon(1e-15));
    // far ahead of the front the state is 0, far behind it is v
    CHECK(exact_solution(p, 0.3, 0.2, 0.4) == 0.0);
    CHECK(exact_solution(p, 0.0, 0.0, 1.6) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("flux and viscosity laws and their derivatives") {
    ProblemSpec h = heat_problem();
    CHECK(flux_x(h, 3.0) == 0.0);
    CHECK(flux_y(h, 3.0) == 0.0);
    CHECK(flux_x_derivative(h, 3.0) == 0.0);
    CHECK(viscosity(h, 3.0) == doctest::Approx(9e-6).epsilon(1e-15));
    CHECK(viscosity_derivative(h, 3.0) == doctest::Approx(6e-6).epsilon(1e-15));

    ProblemSpec b = burgers_problem();
    CHECK(flux_x(b, 3.0) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(flux_y(b, -2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(flux_x_derivative(b, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(flux_y_derivative(b, -2.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(viscosity(b, 7.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(viscosity_derivative(b, 7.0) == 0.0);
  }

  TEST_CASE("heat exact solution satisfies the PDE") {
    ProblemSpec p = heat_problem();
    const double x = 0.5, y = 0.4, t = 0.3, h = 1e-4;
    auto u = [&](double xx, double yy, double tt) { return exact_solution(p, xx, yy, tt); };
    const double ut = d1([&](double tt) { return u(x, y, tt); }, t, h);
    // flux divergence via nested centered differences of mu(u) u_x
    auto fx = [&](double xx) {
      return viscosity(p, u(xx, y, t)) * d1([&](double s) { return u(s, y, t); }, xx, h);
    };
    auto fy = [&](double yy) {
      return viscosity(p, u(x, yy, t)) * d1([&](double s) { return u(x, s, t); }, yy, h);
    };
    const double div = d1(fx, x, h) + d1(fy, y, h);
    CHECK(ut == doctest::Approx(div).epsilon(1e-6));
  }

  TEST_CASE("burgers exact solution satisfies the PDE") {
    ProblemSpec p = burgers_problem();
    // a point on the shock line x + y = v t, where gradients are largest
    const double x = 0.12, y = 0.08, t = 0.4, h = 1e-6;
    auto u = [&](double xx, double yy, double tt) { return exact_solution(p, xx, yy, tt); };
    const double ut = d1([&](double tt) { return u(x, y, tt); }, t, h);
    const double convx = d1([&](double s) { return flux_x(p, u(s, y, t)); }, x, h);
    const double convy = d1([&](double s) { return flux_y(p, u(x, s, t)); }, y, h);
    auto ux = [&](double xx) { return d1([&](double s) { return u(s, y, t); }, xx, h); };
    auto uy = [&](double yy) { return d1([&](double s) { return u(x, s, t); }, yy, h); };
    const double diff = p.mu0 * (d1(ux, x, 1e-4) + d1(uy, y, 1e-4));
    CHECK(ut + convx + convy - diff == doctest::Approx(0.0).scale(std::fabs(ut)).epsilon(1e-4));
  }

  TEST_CASE("boundary values agree with the exact solution on all edges") {
    GridSpec g = make_grid(0.1, 1.1, 0.1, 1.1, 1.0, 4, 4, 8);
    ProblemSpec p = heat_problem();
    const double t = 0.25;
    CHECK(boundary_value(p, g, Side::West, 0.7, t) ==
          doctest::Approx(exact_solution(p, 0.1, 0.7, t)).epsilon(1e-15));
    CHECK(boundary_value(p, g, Side::East, 0.7, t) ==
          doctest::Approx(exact_solution(p, 1.1, 0.7, t)).epsilon(1e-15));
    CHECK(boundary_value(p, g, Side::South, 0.3, t) ==
          doctest::Approx(exact_solution(p, 0.3, 0.1, t)).epsilon(1e-15));
    CHECK(boundary_value(p, g, Side::North, 0.3, t) ==
          doctest::Approx(exact_solution(p, 0.3, 1.1, t)).epsilon(1e-15));
  }

  TEST_CASE("initial and exact fields sample interior nodes") {
    GridSpec g = make_grid(0.1, 1.1, 0.1, 1.1, 1.0, 4, 4, 8);
    ProblemSpec p = heat_problem();
    Field u0 = initial_field(p, g);
    REQUIRE(u0.size() == 16);
    CHECK(u0.at(1, 1, 4) ==
          doctest::Approx(exact_solution(p, g.x(1), g.y(1), 0.0)).epsilon(1e-15));
    CHECK(u0.at(4, 3, 4) ==
          doctest::Approx(exact_solution(p, g.x(4), g.y(3), 0.0)).epsilon(1e-15));

    Field ue = exact_field(p, g, 0.5);
    CHECK(ue.at(2, 2, 4) ==
          doctest::Approx(exact_solution(p, g.x(2), g.y(2), 0.5)).epsilon(1e-15));
  }
}
