#pragma once

// Fundamental solution of the Laplacian (Delta Phi = delta_0) and the
// Dirichlet Green's function of the ball B_r.
//
// The corrector h^x(y) = Phi(r x/|x| - |x| y/r) depends on x and y only
// through q = r^2 - 2 x.y + |x|^2 |y|^2 / r^2, which is symmetric in (x, y)
// and smooth at x = 0, where h^0(y) = Phi(r e).

#include <numbers>
#include <span>
#include <vector>

#include "potlayer/errors.hpp"
#include "potlayer/vec.hpp"

namespace potlayer {

struct BallContext {
  int n = 3;
  double radius = 1.0;

  /// H^{n-1}(dB_1): 2 pi for n = 2, 4 pi for n = 3.
  double unit_sphere_measure() const { return n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }
  void validate() const;
};

/// Phi as a function of the distance s > 0.
inline double fundamental_radial(int n, double s) {
  return n == 2 ? std::log(s) / (2.0 * std::numbers::pi) : -1.0 / (4.0 * std::numbers::pi * s);
}

/// Phi'(s) = 1 / (alpha_{n-1} s^{n-1}).
inline double fundamental_radial_derivative(int n, double s) {
  return n == 2 ? 1.0 / (2.0 * std::numbers::pi * s) : 1.0 / (4.0 * std::numbers::pi * s * s);
}

double fundamental(const BallContext& ctx, const Vec3& x);
Vec3 fundamental_gradient(const BallContext& ctx, const Vec3& x);

/// Squared distance |r x/|x| - |x| y/r|^2 entering the corrector.
inline double corrector_q(double r, const Vec3& x, const Vec3& y) {
  return r * r - 2.0 * dot(x, y) + norm2(x) * norm2(y) / (r * r);
}

/// h^x(y) without domain checks.
inline double corrector_unchecked(const BallContext& ctx, const Vec3& x, const Vec3& y) {
  return fundamental_radial(ctx.n, std::sqrt(corrector_q(ctx.radius, x, y)));
}

/// G(x, y) = Phi(x - y) - h^x(y) without domain checks; x != y required.
inline double greens_unchecked(const BallContext& ctx, const Vec3& x, const Vec3& y) {
  const double d = norm(x - y);
  return fundamental_radial(ctx.n, d) - corrector_unchecked(ctx, x, y);
}

/// grad_x G(x, y) without domain checks.
inline Vec3 greens_gradient_x_unchecked(const BallContext& ctx, const Vec3& x, const Vec3& y) {
  const Vec3 z = x - y;
  const double d = norm(z);
  const double a = fundamental_radial_derivative(ctx.n, d) / d;
  const double r2 = ctx.radius * ctx.radius;
  const double q = corrector_q(ctx.radius, x, y);
  const double sq = std::sqrt(q);
  // d/dx Phi(sqrt q) = Phi'(sqrt q) / (2 sqrt q) * (-2 y + 2 x |y|^2 / r^2).
  const double b = fundamental_radial_derivative(ctx.n, sq) / sq;
  const double yy = norm2(y) / r2;
  return {a * z[0] - b * (x[0] * yy - y[0]), a * z[1] - b * (x[1] * yy - y[1]), a * z[2] - b * (x[2] * yy - y[2])};
}

double corrector(const BallContext& ctx, const Vec3& x, const Vec3& y);
double greens_ball(const BallContext& ctx, const Vec3& x, const Vec3& y);
Vec3 greens_gradient_x(const BallContext& ctx, const Vec3& x, const Vec3& y);

/// Quadrature grid on dB_r: Gauss-Legendre in cos(theta) times a uniform
/// azimuthal grid (n = 3), or a uniform grid on the circle (n = 2).
/// Weights sum to one (they average).
struct SphereGrid {
  int n = 3;
  double radius = 1.0;
  std::vector<Vec3> points;
  std::vector<double> weights;
};

SphereGrid make_sphere_grid(int n, double radius, int n_theta, int n_phi);

struct HarmonicCenter {
  double v0 = 0.0;
  Vec3 grad0{0.0, 0.0, 0.0};
};

/// Value and gradient at the centre of the harmonic function with boundary
/// values `values` sampled on `grid`: v(0) is the sphere average of f and
/// grad v(0) = (n / r^2) times the sphere average of f(y) y.
HarmonicCenter harmonic_center(const BallContext& ctx, const SphereGrid& grid, std::span<const double> values);

}  // namespace potlayer
