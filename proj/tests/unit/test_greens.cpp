#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "potlayer/greens.hpp"
#include "potlayer/sampling.hpp"

using namespace potlayer;

namespace {

constexpr double pi = std::numbers::pi;

Vec3 fd_gradient_x(const BallContext& ctx, const Vec3& x, const Vec3& y, double h) {
  Vec3 g{0.0, 0.0, 0.0};
  for (int i = 0; i < ctx.n; ++i) {
    Vec3 a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (greens_ball(ctx, a, y) - greens_ball(ctx, b, y)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_SUITE("greens") {

TEST_CASE("fundamental solution") {
  const BallContext c3{3, 1.0}, c2{2, 1.0};
  CHECK(fundamental(c3, {1.0, 0.0, 0.0}) == doctest::Approx(-1.0 / (4.0 * pi)).epsilon(1e-15));
  CHECK(fundamental(c2, {0.0, 1.0, 0.0}) == 0.0);
  const Vec3 g = fundamental_gradient(c3, {0.0, 2.0, 0.0});
  CHECK(norm(g) == doctest::Approx(1.0 / (16.0 * pi)).epsilon(1e-15));
  CHECK(g[1] > 0.0);
  CHECK_THROWS_AS(fundamental(c3, {0.0, 0.0, 0.0}), SingularityError);
  CHECK_THROWS_AS(fundamental_gradient(c2, {0.0, 0.0, 0.0}), SingularityError);
}

TEST_CASE("Green's function closed-form value and errors") {
  const BallContext c{3, 1.0};
  CHECK(greens_ball(c, {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}) == doctest::Approx(-1.0 / (4.0 * pi)).epsilon(1e-14));
  CHECK_THROWS_AS(greens_ball(c, {0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}), SingularityError);
  CHECK_THROWS_AS(greens_ball(c, {0.1, 0.2, 0.3}, {1.1, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(greens_gradient_x(c, {0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}), SingularityError);
  CHECK_THROWS_AS((BallContext{4, 1.0}.validate()), ArgumentError);
  CHECK_THROWS_AS((BallContext{3, 0.0}.validate()), ArgumentError);
}

TEST_CASE("symmetry on random interior pairs") {
  for (int n : {2, 3})
    for (double r : {1.0, 0.3}) {
      const BallContext c{n, r};
      const auto xs = halton_ball(n, {0, 0, 0}, r, 100, 1);
      const auto ys = halton_ball(n, {0, 0, 0}, r, 100, 500);
      for (int i = 0; i < 100; ++i) {
        const double a = greens_ball(c, xs[i], ys[i]);
        const double b = greens_ball(c, ys[i], xs[i]);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
      }
    }
}

TEST_CASE("vanishes on the boundary") {
  for (int n : {2, 3}) {
    const BallContext c{n, 0.7};
    const auto xs = halton_ball(n, {0, 0, 0}, 0.7, 50, 3);
    const auto ys = halton_ball(n, {0, 0, 0}, 0.7, 50, 90);
    for (int i = 0; i < 50; ++i) {
      const Vec3 yb = (0.7 / norm(ys[i])) * ys[i];
      CHECK(std::abs(greens_ball(c, xs[i], yb)) <= 1e-9);
      CHECK(std::abs(greens_ball(c, yb, xs[i])) <= 1e-9);
    }
    CHECK(std::abs(greens_ball(c, {0, 0, 0}, (n == 3 ? Vec3{0, 0, 0.7} : Vec3{0.7, 0, 0}))) <= 1e-12);
  }
}

TEST_CASE("corrector is harmonic in y") {
  const BallContext c{3, 1.0};
  const double h = 1e-3;
  const auto xs = halton_ball(3, {0, 0, 0}, 0.9, 20, 4);
  const auto ys = halton_ball(3, {0, 0, 0}, 0.9, 20, 40);
  for (int i = 0; i < 20; ++i) {
    double lap = -6.0 * corrector(c, xs[i], ys[i]);
    for (int k = 0; k < 3; ++k) {
      Vec3 a = ys[i], b = ys[i];
      a[k] += h;
      b[k] -= h;
      lap += corrector(c, xs[i], a) + corrector(c, xs[i], b);
    }
    CHECK(std::abs(lap / (h * h)) <= 1e-4);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  for (int n : {2, 3}) {
    const BallContext c{n, 1.0};
    const auto xs = halton_ball(n, {0, 0, 0}, 0.9, 100, 8);
    const auto ys = halton_ball(n, {0, 0, 0}, 0.9, 100, 300);
    for (int i = 0; i < 100; ++i) {
      if (norm(xs[i] - ys[i]) < 0.05) continue;
      const Vec3 g = greens_gradient_x(c, xs[i], ys[i]);
      const Vec3 f = fd_gradient_x(c, xs[i], ys[i], 1e-5);
      CHECK(norm(g - f) <= 1e-6 * norm(g));
    }
    // origin: the corrector limit is smooth there
    const Vec3 y = n == 3 ? Vec3{0.2, -0.3, 0.4} : Vec3{0.2, -0.3, 0.0};
    const Vec3 g0 = greens_gradient_x(c, {0, 0, 0}, y);
    const Vec3 f0 = fd_gradient_x(c, {0, 0, 0}, y, 1e-5);
    CHECK(norm(g0 - f0) <= 1e-6 * norm(g0));
  }
}

TEST_CASE("tangential derivative vanishes at the boundary") {
  const BallContext c{3, 1.0};
  const Vec3 y{0.1, 0.2, -0.3};
  const Vec3 e{0.0, 1.0, 0.0};  // tangent to the sphere at (1, 0, 0)
  double prev = 1e300;
  for (double t : {0.9, 0.99, 0.999, 0.9999}) {
    const double d = std::abs(dot(greens_gradient_x(c, {t, 0.0, 0.0}, y), e));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("flat-disk symmetry of the tangential gradient") {
  // Summing over y' and -y' cancels the tangential part for x on the axis.
  const BallContext c{3, 1.0};
  const Vec3 x{0.0, 0.0, 0.2};
  HaltonSequence h(2, 9);
  for (int i = 0; i < 50; ++i) {
    const Vec3 u = h.next();
    const Vec3 y{0.9 * u[0] - 0.45, 0.9 * u[1] - 0.45, 0.0};
    const Vec3 ym{-y[0], -y[1], 0.0};
    const Vec3 s = greens_gradient_x(c, x, y) + greens_gradient_x(c, x, ym);
    CHECK(std::abs(s[0]) <= 1e-14);
    CHECK(std::abs(s[1]) <= 1e-14);
  }
}

TEST_CASE("harmonic center from boundary samples") {
  const BallContext c{3, 0.5};
  const SphereGrid grid = make_sphere_grid(3, 0.5, 16, 32);
  double wsum = 0.0;
  for (double w : grid.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> f(grid.points.size(), 3.0);
  auto hc = harmonic_center(c, grid, f);
  CHECK(hc.v0 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(norm(hc.grad0) <= 1e-13);

  const Vec3 a{0.3, -1.2, 0.7};
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = dot(a, grid.points[k]);
  hc = harmonic_center(c, grid, f);
  CHECK(std::abs(hc.v0) <= 1e-14);
  CHECK(norm(hc.grad0 - a) <= 1e-13);

  for (std::size_t k = 0; k < f.size(); ++k) f[k] = grid.points[k][0] * grid.points[k][1];
  hc = harmonic_center(c, grid, f);
  CHECK(std::abs(hc.v0) <= 1e-14);
  CHECK(norm(hc.grad0) <= 1e-13);

  // n = 2
  const BallContext c2{2, 2.0};
  const SphereGrid g2 = make_sphere_grid(2, 2.0, 0, 64);
  std::vector<double> f2(g2.points.size());
  for (std::size_t k = 0; k < f2.size(); ++k) f2[k] = 1.0 + 0.5 * g2.points[k][0] - g2.points[k][1];
  const auto h2 = harmonic_center(c2, g2, f2);
  CHECK(h2.v0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm(h2.grad0 - Vec3{0.5, -1.0, 0.0}) <= 1e-13);

  CHECK_THROWS_AS(harmonic_center(c, SphereGrid{}, {}), ArgumentError);
  CHECK_THROWS_AS(harmonic_center(c, grid, std::vector<double>(3, 0.0)), ArgumentError);
}

}
