#pragma once

// Surface integrals over graph patches and spheres.
//
// Graph patches are integrated in polar coordinates (rho, theta) centred at
// the foot point of the evaluation point, which cancels the |x' - y'|^{2-n}
// singularity of on-surface kernels. The radial variable is normalized,
// rho = t R(theta), where R(theta) is the distance from the centre to the
// patch boundary along theta. Radial panels are graded toward the centre at
// the scale of the near distance d.

#include <algorithm>
#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "potlayer/geometry.hpp"
#include "potlayer/rules.hpp"
#include "potlayer/vec.hpp"

namespace potlayer {

/// Integration region of a graph patch, described in chart coordinates y'.
struct PatchDomain {
  enum class Kind {
    disk,          // |y' - center| < radius
    ball_section,  // |(y', psi(y'))| < radius
  };
  Kind kind = Kind::ball_section;
  Vec2 center{0.0, 0.0};
  double radius = 1.0;

  static PatchDomain disk(const Vec2& c, double r) { return {Kind::disk, c, r}; }
  static PatchDomain ball_section(double r) { return {Kind::ball_section, {0.0, 0.0}, r}; }
};

/// Foot point y' of the evaluation point on the chart and its distance to the
/// surface (0 for on-surface evaluation).
struct NearPoint {
  Vec2 foot{0.0, 0.0};
  double distance = 0.0;
};

/// A quadrature node on Gamma.
struct SurfacePoint {
  Vec2 yp;     // chart coordinates
  Vec3 y;      // (y', psi(y'))
  double area; // sqrt(1 + |grad psi|^2)
};

namespace detail {

inline bool inside_domain(const InterfaceGraph& g, const PatchDomain& dom, const Vec2& p) {
  if (dom.kind == PatchDomain::Kind::disk) return norm(p - dom.center) < dom.radius;
  const double h = g.psi(p);
  return p[0] * p[0] + p[1] * p[1] + h * h < dom.radius * dom.radius;
}

/// Distance from c to the boundary of `dom` along direction e (n = 3), or the
/// signed extent along e = (+-1, 0) for n = 2.
inline double boundary_distance(const InterfaceGraph& g, const PatchDomain& dom, const Vec2& c, const Vec2& e) {
  // Flat-disk distance: |c + R e - center| = radius.
  const Vec2 center = dom.kind == PatchDomain::Kind::disk ? dom.center : Vec2{0.0, 0.0};
  const Vec2 w = c - center;
  const double we = w[0] * e[0] + w[1] * e[1];
  const double disc = we * we - (w[0] * w[0] + w[1] * w[1]) + dom.radius * dom.radius;
  const double r_flat = std::max(0.0, -we + std::sqrt(std::max(0.0, disc)));
  if (dom.kind == PatchDomain::Kind::disk || g.is_flat()) return r_flat;
  auto F = [&](double R) {
    const Vec2 p = c + R * e;
    const double h = g.psi(p);
    return p[0] * p[0] + p[1] * p[1] + h * h - dom.radius * dom.radius;
  };
  const double f0 = F(0.0);
  const double f1 = F(r_flat);
  if (f1 <= 0.0) return r_flat;
  if (f0 >= 0.0) return 0.0;
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
  const auto [a, b] = boost::math::tools::toms748_solve(F, 0.0, r_flat, f0, f1, tol, iters);
  return 0.5 * (a + b);
}

/// Physical radial breakpoints on [0, rmax] graded at the near distance d.
inline std::vector<double> radial_breaks(double d, double rmax, double split_radius) {
  std::vector<double> b{0.0};
  if (d > 0.0) {
    for (double s = d / 64.0; s < 0.5 * d && s < rmax; s *= 2.0) b.push_back(s);
    const double h = 0.5 * d;
    const int m = static_cast<int>(std::ceil(split_radius * d / h));
    for (int i = 1; i <= m && i * h < rmax; ++i) b.push_back(i * h);
    for (double s = 2.0 * split_radius * d; s < rmax; s *= 2.0) b.push_back(s);
  } else {
    for (int k = 24; k >= 1; --k) b.push_back(rmax * std::ldexp(1.0, -k));
  }
  b.push_back(rmax);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  while (b.size() > 2 && b[b.size() - 2] >= rmax) b.erase(b.end() - 2);
  return b;
}

}  // namespace detail

/// \int_{patch} f(y) dH^{n-1}(y) for vector-valued f(const SurfacePoint&).
template <std::size_t N, class F>
QuadResultN<N> graph_patch_integral_n(const InterfaceGraph& gamma, F&& f, const PatchDomain& dom,
                                      const std::optional<NearPoint>& near, const QuadratureSpec& spec) {
  spec.validate();
  if (!(dom.radius > 0.0)) throw ArgumentError("patch radius must be positive");
  const int n = gamma.dim();
  const Vec2 fallback = dom.kind == PatchDomain::Kind::disk ? dom.center : Vec2{0.0, 0.0};
  Vec2 c = fallback;
  double d = -1.0;  // no grading
  if (near && detail::inside_domain(gamma, dom, near->foot)) {
    c = near->foot;
    d = std::max(0.0, near->distance);
  }
  if (n == 2) c[1] = 0.0;

  auto node = [&](const Vec2& yp) {
    const double s = gamma.profile_slope(norm(yp));
    return SurfacePoint{yp, lift(yp, gamma.psi(yp), n), std::sqrt(1.0 + s * s)};
  };

  if (n == 2) {
    const double right = detail::boundary_distance(gamma, dom, c, {1.0, 0.0});
    const double left = detail::boundary_distance(gamma, dom, c, {-1.0, 0.0});
    std::vector<double> breaks;
    if (d >= 0.0) {
      for (double s : detail::radial_breaks(d, right, spec.singular_split_radius)) breaks.push_back(c[0] + s);
      for (double s : detail::radial_breaks(d, left, spec.singular_split_radius)) breaks.push_back(c[0] - s);
    } else {
      breaks = {c[0] - left, c[0], c[0] + right};
    }
    return adaptive_1d_n<N>(
        [&](double t) {
          const SurfacePoint sp = node({t, 0.0});
          auto v = f(sp);
          for (auto& x : v) x *= sp.area;
          return v;
        },
        breaks, spec);
  }

  // Largest boundary distance, sampled, to convert physical breaks to t.
  double rmax = 0.0;
  for (int k = 0; k < 32; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 32.0;
    rmax = std::max(rmax, detail::boundary_distance(gamma, dom, c, {std::cos(th), std::sin(th)}));
  }
  if (!(rmax > 0.0)) return {};
  std::vector<double> tb;
  if (d >= 0.0) {
    for (double s : detail::radial_breaks(d, rmax, spec.singular_split_radius)) tb.push_back(s / rmax);
    tb.back() = 1.0;
  } else {
    tb = {0.0, 0.5, 1.0};
  }
  const double pi = std::numbers::pi;
  const std::vector<double> vb{0.0, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi};

  auto column = [&](double theta) {
    const Vec2 e{std::cos(theta), std::sin(theta)};
    const double R = detail::boundary_distance(gamma, dom, c, e);
    return [&, e, R](double t) {
      const double rho = t * R;
      const SurfacePoint sp = node(c + rho * e);
      auto v = f(sp);
      const double jac = sp.area * rho * R;
      for (auto& x : v) x *= jac;
      return v;
    };
  };
  return adaptive_2d_n<N>(column, tb, vb, spec);
}

/// Scalar graph-patch integral of f(y') times the area element.
QuadResult graph_patch_integral(const InterfaceGraph& gamma, const std::function<double(const Vec2&)>& f,
                                const PatchDomain& dom, const std::optional<NearPoint>& near,
                                const QuadratureSpec& spec);

/// Pole direction and distance of the evaluation point from the sphere.
struct SphereNear {
  Vec3 pole{0.0, 0.0, 1.0};
  double distance = 0.0;
};

/// \int_{dB_s} f(y) dH^{n-1}(y), n in {2, 3}; vector-valued.
template <std::size_t N, class F>
QuadResultN<N> sphere_integral_n(int n, double s, F&& f, const std::optional<SphereNear>& near,
                                 const QuadratureSpec& spec) {
  spec.validate();
  if (!(s > 0.0)) throw ArgumentError("sphere radius must be positive");
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
  const double pi = std::numbers::pi;
  Vec3 p = near ? near->pole : Vec3{0.0, 0.0, 1.0};
  if (n == 2) p[2] = 0.0;
  const double pn = norm(p);
  p = pn > 0.0 ? (1.0 / pn) * p : (n == 3 ? Vec3{0, 0, 1} : Vec3{1, 0, 0});

  std::vector<double> ab;  // breaks in polar angle from the pole, [0, pi]
  if (near) {
    for (double a : detail::radial_breaks(std::max(0.0, near->distance), s * pi, spec.singular_split_radius))
      ab.push_back(a / s);
    ab.back() = pi;
  } else {
    ab = {0.0, 0.5 * pi, pi};
  }

  if (n == 2) {
    const double phi0 = std::atan2(p[1], p[0]);
    std::vector<double> breaks;
    for (double a : ab) {
      breaks.push_back(phi0 + a);
      breaks.push_back(phi0 - a);
    }
    return adaptive_1d_n<N>(
        [&](double phi) {
          auto v = f(Vec3{s * std::cos(phi), s * std::sin(phi), 0.0});
          for (auto& x : v) x *= s;
          return v;
        },
        breaks, spec);
  }

  // Orthonormal frame (e1, e2, p).
  const Vec3 a = std::abs(p[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = a - dot(a, p) * p;
  e1 = (1.0 / norm(e1)) * e1;
  const Vec3 e2{p[1] * e1[2] - p[2] * e1[1], p[2] * e1[0] - p[0] * e1[2], p[0] * e1[1] - p[1] * e1[0]};
  const std::vector<double> vb{0.0, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi};
  auto column = [&](double phi) {
    const double cp = std::cos(phi), sp = std::sin(phi);
    return [&, cp, sp](double theta) {
      const double st = std::sin(theta), ct = std::cos(theta);
      const Vec3 y{s * (st * cp * e1[0] + st * sp * e2[0] + ct * p[0]),
                   s * (st * cp * e1[1] + st * sp * e2[1] + ct * p[1]),
                   s * (st * cp * e1[2] + st * sp * e2[2] + ct * p[2])};
      auto v = f(y);
      const double jac = s * s * st;
      for (auto& x : v) x *= jac;
      return v;
    };
  };
  return adaptive_2d_n<N>(column, ab, vb, spec);
}

QuadResult sphere_integral(int n, double s, const std::function<double(const Vec3&)>& f,
                           const QuadratureSpec& spec, const std::optional<SphereNear>& near = std::nullopt);

}  // namespace potlayer
