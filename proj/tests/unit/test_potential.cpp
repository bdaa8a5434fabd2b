#include <doctest.h>

#include <cmath>

#include "potlayer/errors.hpp"
#include "potlayer/potential.hpp"
#include "potlayer/sampling.hpp"

using namespace potlayer;

namespace {

QuadratureSpec tol(double t) {
  QuadratureSpec s;
  s.target_tol = t;
  return s;
}

LayerProblem flat_unit(double g = 1.0, double t = 1e-8) {
  return LayerProblem(BallContext{3, 1.0}, InterfaceGraph::flat(3), SurfaceDensity::constant(g), tol(t));
}

LayerProblem shell(double t = 1e-8) {
  return LayerProblem(BallContext{3, 1.0}, SphereInterface{0.5}, SurfaceDensity::constant(1.0), tol(t));
}

LayerProblem holder_problem(double t = 1e-8) {
  return LayerProblem(BallContext{3, 1.0}, InterfaceGraph::holder(3, 0.5, 1.0), SurfaceDensity::holder(0.5, 1.0),
                      tol(t));
}

double u(const LayerProblem& p, const Vec3& x) { return evaluate_solution(p, x).value; }

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("radial oracle formula") {
  CHECK(radial_oracle(0.3, 0.5, 1.0, 1.0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(radial_oracle(0.75, 0.5, 1.0, 1.0) == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
  CHECK(std::abs(radial_oracle(1.0, 0.5, 1.0, 1.0)) <= 1e-16);
  CHECK_THROWS_AS(radial_oracle(0.3, 1.0, 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(radial_oracle(1.3, 0.5, 1.0, 1.0), DomainError);
}

TEST_CASE("closed-form values") {
  CHECK(std::abs(u(flat_unit(), {0, 0, 0}) + 0.25) <= 1e-7);
  const auto s = shell();
  for (double a : {0.0, 0.2, 0.5, 0.75, 0.95}) {
    const Vec3 x = a * Vec3{0.36, 0.48, 0.8};
    CHECK(std::abs(u(s, x) - radial_oracle(a, 0.5, 1.0, 1.0)) <= 1e-6);
  }
  CHECK(u(flat_unit(0.0), {0.1, 0.2, 0.3}) == 0.0);
  CHECK(u(flat_unit(), {0.0, 0.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-9));
  // n = 2: u(0) = \int_{-1}^1 log|t| / (2 pi) dt = -1/pi
  const LayerProblem p2(BallContext{2, 1.0}, InterfaceGraph::flat(2), SurfaceDensity::constant(1.0), tol(1e-9));
  CHECK(u(p2, {0, 0, 0}) == doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-7));
}

TEST_CASE("invalid problems and points") {
  const BallContext c{3, 1.0};
  const auto g = SurfaceDensity::constant(1.0);
  CHECK_THROWS_AS(LayerProblem(c, InterfaceGraph::flat(2), g), ArgumentError);
  CHECK_THROWS_AS(LayerProblem(c, InterfaceGraph::counterexample(3), g), ArgumentError);
  CHECK_NOTHROW(LayerProblem(c, InterfaceGraph::counterexample(3), g, {}, 0.25));
  CHECK_THROWS_AS(LayerProblem(c, InterfaceGraph::flat(3), g, {}, 1.5), ArgumentError);
  CHECK_THROWS_AS(LayerProblem(c, SphereInterface{1.0}, g), ArgumentError);
  CHECK_THROWS_AS(LayerProblem(c, SphereInterface{0.5}, g, {}, 0.3), ArgumentError);
  const auto p = flat_unit();
  CHECK_THROWS_AS(evaluate_solution(p, {0.0, 0.0, 1.2}), DomainError);
  CHECK_THROWS_AS(evaluate_gradient(p, {0.2, 0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(evaluate_gradient(shell(), {0.0, 0.3, 0.4}), DomainError);
}

TEST_CASE("gradient oracles") {
  const auto s = shell();
  const Vec3 dir{0.36, 0.48, 0.8};
  const Vec3 g = evaluate_gradient(s, 0.75 * dir).value;
  CHECK(norm(g - (0.25 / 0.5625) * dir) <= 1e-6);
  CHECK(norm(evaluate_gradient(s, 0.25 * dir).value) <= 1e-6);
  const auto f = flat_unit();
  for (double z : {0.3, 0.05, -0.2}) {
    const Vec3 gz = evaluate_gradient(f, {0.0, 0.0, z}).value;
    CHECK(std::abs(gz[0]) <= 1e-7);
    CHECK(std::abs(gz[1]) <= 1e-7);
  }
}

TEST_CASE("gradient matches finite differences away from the interface") {
  const auto p = holder_problem(1e-10);
  const auto pts = halton_ball(3, {0, 0, 0}, 0.8, 6, 21);
  int checked = 0;
  for (const Vec3& x : pts) {
    const double d = interface_distance(p, x);
    if (d < 0.05) continue;
    const double h = std::min(1e-4, d / 10.0);
    Vec3 fd{};
    for (int i = 0; i < 3; ++i) {
      Vec3 a = x, b = x;
      a[i] += h;
      b[i] -= h;
      fd[i] = (u(p, a) - u(p, b)) / (2.0 * h);
    }
    const Vec3 g = evaluate_gradient(p, x).value;
    CHECK(norm(g - fd) <= 1e-3 * norm(g));
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("harmonic away from the interface") {
  const auto p = holder_problem(1e-10);
  const double h = 1e-2;
  for (const Vec3& x : {Vec3{0.1, 0.2, 0.4}, Vec3{-0.3, 0.1, -0.35}}) {
    REQUIRE(interface_distance(p, x) > 0.1);
    double lap = -6.0 * u(p, x);
    for (int i = 0; i < 3; ++i) {
      Vec3 a = x, b = x;
      a[i] += h;
      b[i] -= h;
      lap += u(p, a) + u(p, b);
    }
    CHECK(std::abs(lap / (h * h)) <= 1e-3);
  }
}

TEST_CASE("nonnegative density gives a negative solution") {
  for (const auto& p : {flat_unit(1.0, 1e-6), holder_problem(1e-6), shell(1e-6)}) {
    for (const Vec3& x : halton_ball(3, {0, 0, 0}, 0.95, 10, 77)) CHECK(u(p, x) < 0.0);
  }
}

TEST_CASE("continuous across the interface") {
  const auto p = holder_problem(1e-8);
  const Vec2 yp{0.2, -0.1};
  const double z = p.graph().psi(yp);
  const double on = u(p, lift(yp, z, 3));
  const double above = u(p, lift(yp, z + 1e-6, 3));
  const double below = u(p, lift(yp, z - 1e-6, 3));
  CHECK(std::abs(on - above) <= 2e-6);
  CHECK(std::abs(on - below) <= 2e-6);
}

TEST_CASE("transmission jump") {
  const auto flat = transmission_jump(flat_unit(1.0, 1e-8), {0, 0, 0}, default_h_ladder());
  CHECK(flat.converged);
  CHECK(flat.jump == doctest::Approx(1.0).epsilon(0.02));
  CHECK(flat.per_h.size() == 3);
  for (const auto& s : flat.per_h) CHECK(s.jump == doctest::Approx(s.d_plus - s.d_minus));

  CHECK(std::abs(transmission_jump(flat_unit(0.0), {0, 0, 0}, default_h_ladder()).jump) <= 1e-12);

  const auto hj = transmission_jump(holder_problem(1e-8), {0, 0, 0}, default_h_ladder());
  CHECK(hj.order == 0.5);
  CHECK(hj.jump == doctest::Approx(1.0).epsilon(0.02));

  // off-origin point on a curved graph: the jump is g(x0)
  const auto p = holder_problem(1e-8);
  const Vec2 yp{0.1, 0.05};
  const Vec3 x0 = lift(yp, p.graph().psi(yp), 3);
  const auto oj = transmission_jump(p, x0, default_h_ladder());
  CHECK(oj.jump == doctest::Approx(p.density(x0)).epsilon(0.02));

  CHECK_THROWS_AS(transmission_jump(flat_unit(), {0, 0, 0.1}, default_h_ladder()), ArgumentError);
  CHECK_THROWS_AS(transmission_jump(flat_unit(), {0, 0, 0}, {0.6, 0.3}), ArgumentError);
  CHECK_THROWS_AS(transmission_jump(flat_unit(), {0, 0, 0}, {0.01, 0.02}), ArgumentError);
  CHECK_THROWS_AS(transmission_jump(flat_unit(), {0, 0, 0}, {}), ArgumentError);
}

TEST_CASE("side classification") {
  CHECK(problem_side(flat_unit(), {0, 0, 0.1}) == Side::plus);
  CHECK(problem_side(shell(), {0, 0, 0.1}) == Side::plus);
  CHECK(problem_side(shell(), {0, 0, 0.7}) == Side::minus);
  CHECK(problem_side(shell(), {0, 0, 0.5}) == Side::on_interface);
  for (const Vec3& x : side_samples(InterfaceGraph::holder(3, 0.5, 1.0), Side::minus, 0.3, 50, 42)) {
    CHECK(point_side(InterfaceGraph::holder(3, 0.5, 1.0), x) == Side::minus);
    CHECK(norm(x) < 0.3);
  }
}

TEST_CASE("linear fits") {
  const auto p = flat_unit(1.0, 1e-8);
  const auto fp = fit_linear_approximation(p, Side::plus, 1.0 / 64.0, 60);
  const auto fm = fit_linear_approximation(p, Side::minus, 1.0 / 64.0, 60);
  const Vec3 da = fp.poly.a - fm.poly.a;
  CHECK(da[2] == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(da[0]) <= 0.05);
  CHECK(std::abs(da[1]) <= 0.05);
  CHECK(fp.poly.b == doctest::Approx(fm.poly.b).epsilon(0.01));

  const auto z = fit_linear_approximation(flat_unit(0.0), Side::plus, 0.1, 20);
  CHECK(norm(z.poly.a) == 0.0);
  CHECK(z.poly.b == 0.0);

  // Sphere near its north pole: Omega^+ is the inner ball, nu = -x/|x|.
  const auto s = shell(1e-9);
  const Vec3 pole{0.0, 0.0, 0.5};
  const auto in = fit_linear_approximation(s, Side::plus, 0.01, 40, 42, 1, pole);
  const auto out = fit_linear_approximation(s, Side::minus, 0.01, 40, 42, 1, pole);
  const double jump = -(in.poly.a[2] - out.poly.a[2]);
  CHECK(jump == doctest::Approx(1.0).epsilon(0.05));

  CHECK_THROWS_AS(fit_linear_approximation(p, Side::plus, 0.6, 20), ArgumentError);
  CHECK_THROWS_AS(fit_linear_approximation(p, Side::plus, 0.1, 3), ArgumentError);
  CHECK_THROWS_AS(fit_linear_approximation(p, Side::on_interface, 0.1, 20), ArgumentError);
}

TEST_CASE("evaluation does not depend on the thread count") {
  const auto p = holder_problem(1e-6);
  const auto a = fit_linear_approximation(p, Side::plus, 0.1, 30, 42, 1);
  const auto b = fit_linear_approximation(p, Side::plus, 0.1, 30, 42, 4);
  CHECK(a.poly.a == b.poly.a);
  CHECK(a.poly.b == b.poly.b);
  CHECK(a.residual_sup == b.residual_sup);
}

}
