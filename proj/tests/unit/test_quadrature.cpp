#include <doctest.h>

#include <cmath>
#include <numbers>

#include "potlayer/errors.hpp"
#include "potlayer/greens.hpp"
#include "potlayer/quadrature.hpp"
#include "potlayer/rules.hpp"

using namespace potlayer;

namespace {

constexpr double pi = std::numbers::pi;

QuadratureSpec tol(double t) {
  QuadratureSpec s;
  s.target_tol = t;
  return s;
}

// Area of the radial graph over the unit disk, reduced to one radial integral.
double radial_area(const InterfaceGraph& g, double R) {
  const std::vector<double> b{0.0, 0.25 * R, 0.5 * R, R};
  QuadratureSpec s = tol(1e-14);
  s.max_depth = 30;
  return adaptive_1d(
             [&](double r) {
               const double f = g.profile_slope(r);
               return 2.0 * pi * r * std::sqrt(1.0 + f * f);
             },
             b, s)
      .value;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre rules") {
  for (int p : {1, 2, 5, 8, 16, 33}) {
    const GaussRule& g = gauss_legendre(p);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(p));
    double w = 0.0, m = 0.0;
    for (int i = 0; i < p; ++i) {
      w += g.weights[i];
      m += g.weights[i] * std::pow(g.nodes[i], 2 * p - 2);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m == doctest::Approx(2.0 / (2 * p - 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_legendre(0), ArgumentError);
}

TEST_CASE("spec validation") {
  QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  s.target_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = {};
  s.max_depth = 0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = {};
  s.singular_split_radius = -1.0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
}

TEST_CASE("adaptive line integrals") {
  const std::vector<double> b{0.0, 1.0};
  const auto r = adaptive_1d([](double t) { return 1.0 / std::sqrt(t); }, geometric_breaks(1e-12, 1.0), tol(1e-8));
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) <= 1e-5);  // the [0, 1e-12] panel is truncated Gauss
  const auto e = adaptive_1d([](double t) { return std::exp(t); }, b, tol(1e-12));
  CHECK(e.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(e.est_error <= 1e-12);
  CHECK_THROWS_AS(adaptive_1d([](double) { return 1.0; }, std::vector<double>{0.5}, tol(1e-6)), ArgumentError);
  const auto gb = geometric_breaks(0.125, 1.0);
  CHECK(gb == std::vector<double>{0.0, 0.125, 0.25, 0.5, 1.0});
}

TEST_CASE("flat patch examples") {
  const auto flat3 = InterfaceGraph::flat(3);
  const auto dom = PatchDomain::disk({0.0, 0.0}, 1.0);
  const auto sing = graph_patch_integral(
      flat3, [](const Vec2& y) { return 1.0 / norm(y); }, dom, NearPoint{{0.0, 0.0}, 0.0}, tol(1e-10));
  CHECK(sing.converged);
  CHECK(sing.value == doctest::Approx(2.0 * pi).epsilon(1e-10));

  const auto area = graph_patch_integral(flat3, [](const Vec2&) { return 1.0; }, dom, std::nullopt, tol(1e-10));
  CHECK(area.value == doctest::Approx(pi).epsilon(1e-10));
  const auto len =
      graph_patch_integral(InterfaceGraph::flat(2), [](const Vec2&) { return 1.0; }, dom, std::nullopt, tol(1e-10));
  CHECK(len.value == doctest::Approx(2.0).epsilon(1e-12));

  // off-centre singularity in an off-centre disk
  const auto off = graph_patch_integral(
      flat3, [](const Vec2& y) { return 1.0 / norm(y - Vec2{0.3, 0.1}); }, PatchDomain::disk({0.3, 0.1}, 0.5),
      NearPoint{{0.3, 0.1}, 0.0}, tol(1e-10));
  CHECK(off.value == doctest::Approx(pi).epsilon(1e-10));
}

TEST_CASE("curved patch area against a radial oracle") {
  const auto g = InterfaceGraph::holder(3, 0.5, 1.0);
  const double oracle = radial_area(g, 1.0);
  const auto q = graph_patch_integral(g, [](const Vec2&) { return 1.0; }, PatchDomain::disk({0.0, 0.0}, 1.0),
                                      std::nullopt, tol(1e-9));
  CHECK(std::abs(q.value - oracle) <= 1e-5);
  CHECK(std::abs(q.value - oracle) <= std::max(q.est_error, 1e-12) * 10.0);

  // ball section: |(y', psi)| < R is a disk of radius rho with rho^2 + rho^3 = R^2
  const double R = 0.8;
  double lo = 0.0, hi = R;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (m * m + m * m * m < R * R ? lo : hi) = m;
  }
  const double rho = 0.5 * (lo + hi);
  const auto s = graph_patch_integral(g, [](const Vec2&) { return 1.0; }, PatchDomain::ball_section(R),
                                      NearPoint{{0.1, 0.0}, 0.0}, tol(1e-9));
  CHECK(std::abs(s.value - radial_area(g, rho)) <= 1e-7);
}

TEST_CASE("singular and plain paths agree on smooth integrands") {
  const auto g = InterfaceGraph::counterexample(3);
  auto f = [](const Vec2& y) { return std::cos(3.0 * y[0]) + y[1] * y[1]; };
  const auto dom = PatchDomain::ball_section(0.2);
  const auto a = graph_patch_integral(g, f, dom, std::nullopt, tol(1e-10));
  const auto b = graph_patch_integral(g, f, dom, NearPoint{{0.05, 0.02}, 0.01}, tol(1e-10));
  CHECK(std::abs(a.value - b.value) <= a.est_error + b.est_error + 1e-14);
}

TEST_CASE("sphere integrals") {
  const auto one = sphere_integral(3, 0.5, [](const Vec3&) { return 1.0; }, tol(1e-12));
  CHECK(one.value == doctest::Approx(pi).epsilon(1e-12));
  const auto sq = sphere_integral(3, 1.0, [](const Vec3& y) { return y[2] * y[2]; }, tol(1e-12));
  CHECK(sq.value == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-12));
  const BallContext c{3, 1.0};
  const auto newton = sphere_integral(
      3, 0.5, [&](const Vec3& y) { return fundamental(c, y); }, tol(1e-12));
  CHECK(newton.value == doctest::Approx(-0.5).epsilon(1e-12));
  const auto circ = sphere_integral(2, 0.5, [](const Vec3& y) { return 1.0 + y[0]; }, tol(1e-12));
  CHECK(circ.value == doctest::Approx(pi).epsilon(1e-12));
  CHECK_THROWS_AS(sphere_integral(3, 0.0, [](const Vec3&) { return 1.0; }, tol(1e-6)), ArgumentError);
}

TEST_CASE("tightening the tolerance does not worsen oracle errors") {
  // Newton's theorem: the single layer of dB_s is constant -s inside.
  const BallContext c{3, 1.0};
  const Vec3 x{0.0, 0.1, 0.45};
  double prev = 1e300;
  for (double t : {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6, 3.125e-6}) {
    const auto q = sphere_integral(
        3, 0.5, [&](const Vec3& y) { return fundamental(c, x - y); }, tol(t), SphereNear{x, 0.5 - norm(x)});
    const double err = std::abs(q.value + 0.5);
    CHECK(err <= prev + 1e-15);
    CHECK(err <= q.est_error);
    prev = err;
  }
  const auto flat3 = InterfaceGraph::flat(3);
  prev = 1e300;
  for (double t : {1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5}) {
    const auto q = graph_patch_integral(
        flat3, [](const Vec2& y) { return 1.0 / norm(y); }, PatchDomain::disk({0.0, 0.0}, 1.0),
        NearPoint{{0.0, 0.0}, 0.0}, tol(t));
    const double err = std::abs(q.value - 2.0 * pi);
    CHECK(err <= prev + 1e-15);
    CHECK(err <= std::max(q.est_error, 1e-14));
    prev = err;
  }
}

TEST_CASE("failure to converge is reported with the best value") {
  QuadratureSpec s = tol(1e-14);
  s.max_depth = 1;
  const auto q = graph_patch_integral(
      InterfaceGraph::flat(3), [](const Vec2& y) { return std::log(norm(y - Vec2{0.31, 0.0}) + 1e-300); },
      PatchDomain::disk({0.0, 0.0}, 1.0), std::nullopt, s);
  CHECK_FALSE(q.converged);
  CHECK(std::isfinite(q.value));
  CHECK(q.est_error > 1e-14);
}

}
