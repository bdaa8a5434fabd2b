#include "potlayer/greens.hpp"

#include <cmath>
#include <sstream>

#include "potlayer/rules.hpp"

namespace potlayer {

void BallContext::validate() const {
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("ball radius must be positive");
}

double fundamental(const BallContext& ctx, const Vec3& x) {
  const double s = norm(x);
  if (s == 0.0) throw SingularityError("fundamental solution evaluated at the origin");
  return fundamental_radial(ctx.n, s);
}

Vec3 fundamental_gradient(const BallContext& ctx, const Vec3& x) {
  const double s = norm(x);
  if (s == 0.0) throw SingularityError("fundamental solution gradient evaluated at the origin");
  return (fundamental_radial_derivative(ctx.n, s) / s) * x;
}

namespace {

void check_in_ball(const BallContext& ctx, const Vec3& p, const char* what) {
  if (norm(p) > ctx.radius * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << what << " at |p| = " << norm(p) << " lies outside the closed ball of radius " << ctx.radius;
    throw DomainError(os.str());
  }
}

}  // namespace

double corrector(const BallContext& ctx, const Vec3& x, const Vec3& y) {
  check_in_ball(ctx, x, "corrector point x");
  check_in_ball(ctx, y, "corrector point y");
  return corrector_unchecked(ctx, x, y);
}

double greens_ball(const BallContext& ctx, const Vec3& x, const Vec3& y) {
  check_in_ball(ctx, x, "Green's function point x");
  check_in_ball(ctx, y, "Green's function point y");
  if (norm(x - y) == 0.0) throw SingularityError("Green's function evaluated on the diagonal x = y");
  return greens_unchecked(ctx, x, y);
}

Vec3 greens_gradient_x(const BallContext& ctx, const Vec3& x, const Vec3& y) {
  check_in_ball(ctx, x, "Green's gradient point x");
  check_in_ball(ctx, y, "Green's gradient point y");
  if (norm(x - y) == 0.0) throw SingularityError("Green's gradient evaluated on the diagonal x = y");
  return greens_gradient_x_unchecked(ctx, x, y);
}

SphereGrid make_sphere_grid(int n, double radius, int n_theta, int n_phi) {
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
  if (!(radius > 0.0)) throw ArgumentError("sphere grid radius must be positive");
  if (n_phi < 1 || (n == 3 && n_theta < 1)) throw ArgumentError("sphere grid needs at least one node per angle");
  SphereGrid g;
  g.n = n;
  g.radius = radius;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  if (n == 2) {
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * dphi;
      g.points.push_back({radius * std::cos(phi), radius * std::sin(phi), 0.0});
      g.weights.push_back(1.0 / n_phi);
    }
    return g;
  }
  const GaussRule& rule = gauss_legendre(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double mu = rule.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * dphi;
      g.points.push_back({radius * st * std::cos(phi), radius * st * std::sin(phi), radius * mu});
      g.weights.push_back(0.5 * rule.weights[i] / n_phi);
    }
  }
  return g;
}

HarmonicCenter harmonic_center(const BallContext& ctx, const SphereGrid& grid, std::span<const double> values) {
  if (grid.points.empty()) throw ArgumentError("harmonic_center needs a nonempty boundary grid");
  if (values.size() != grid.points.size()) throw ArgumentError("harmonic_center: one value per grid point required");
  HarmonicCenter hc;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double w = grid.weights[k] * values[k];
    hc.v0 += w;
    for (int i = 0; i < 3; ++i) hc.grad0[i] += w * grid.points[k][i];
  }
  const double scale = ctx.n / (grid.radius * grid.radius);
  hc.grad0 = scale * hc.grad0;
  return hc;
}

}  // namespace potlayer
