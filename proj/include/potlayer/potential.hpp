#pragma once

// Solutions of Delta u = g dH^{n-1} restricted to Gamma in a ball B_r with
// zero Dirichlet data, evaluated through the Green's representation
// u(x) = \int_Gamma G(x, y) g(y) dH^{n-1}(y).

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "potlayer/geometry.hpp"
#include "potlayer/greens.hpp"
#include "potlayer/rules.hpp"
#include "potlayer/vec.hpp"

namespace potlayer {

/// The triple (B_r, Gamma, g) plus the quadrature settings used to evaluate it.
///
/// For graph interfaces the integration domain is Gamma intersected with
/// B_{clip_radius}; clip_radius defaults to the ball radius and must not exceed
/// the chart radius.
struct LayerProblem {
  BallContext ctx;
  std::variant<InterfaceGraph, SphereInterface> interface;
  SurfaceDensity density;
  QuadratureSpec spec;
  std::optional<double> clip;

  LayerProblem(BallContext c, std::variant<InterfaceGraph, SphereInterface> gamma, SurfaceDensity g,
               QuadratureSpec s = {}, std::optional<double> clip_radius = std::nullopt);

  double clip_radius() const { return clip.value_or(ctx.radius); }
  bool is_graph() const { return std::holds_alternative<InterfaceGraph>(interface); }
  const InterfaceGraph& graph() const { return std::get<InterfaceGraph>(interface); }
  /// Same problem with a different quadrature tolerance.
  LayerProblem with_tol(double tol) const;
};

struct PointValue {
  double value = 0.0;
  double est_error = 0.0;
  bool converged = true;
  int panels = 0;
};

struct GradientValue {
  Vec3 value{0.0, 0.0, 0.0};
  double est_error = 0.0;
  bool converged = true;
  int panels = 0;
};

/// Distance from x to the interface (exact for spheres; first-order for graphs).
double interface_distance(const LayerProblem& p, const Vec3& x);

/// u(x) for x in the closed ball; on-surface points use the singular path.
PointValue evaluate_solution(const LayerProblem& p, const Vec3& x);

/// grad u(x) for x off Gamma; DomainError on Gamma.
GradientValue evaluate_gradient(const LayerProblem& p, const Vec3& x);

struct JumpSample {
  double h = 0.0;
  double d_plus = 0.0;   // one-sided derivative along nu from Omega^+
  double d_minus = 0.0;  // one-sided derivative along nu from Omega^-
  double jump = 0.0;
  double est_error = 0.0;
};

struct JumpResult {
  double jump = 0.0;
  /// Leading error order eliminated first by the extrapolation.
  double order = 2.0;
  std::vector<JumpSample> per_h;
  bool converged = true;
};

/// Default ladder (1e-2, 5e-3, 2.5e-3).
std::vector<double> default_h_ladder();

/// u_nu^+ - u_nu^- at x0 on Gamma from second-order one-sided differences
/// along the normal nu (pointing into Omega^+), extrapolated across the ladder.
///
/// One-sided gradients of a C^{1,alpha} solution carry errors expanding in
/// powers of h^alpha, so the extrapolation eliminates the orders alpha,
/// 2 alpha, ... in turn, with alpha the power exponent of
/// max(omega_psi, omega_g). Smooth data (omega = 0) use `fallback_order`; for
/// moduli without a power law the order is estimated from three equally
/// ratioed steps and `fallback_order` is used when the estimate is unusable.
JumpResult transmission_jump(const LayerProblem& p, const Vec3& x0, const std::vector<double>& h_ladder,
                             double fallback_order = 2.0);

/// Closed-form solution for Gamma = dB_s, constant density g0, n = 3:
/// u(x) = -g0 s^2 (1/max(|x|, s) - 1/r).
double radial_oracle(double abs_x, double s, double r, double g0);

struct LinearPolynomial {
  Vec3 a{0.0, 0.0, 0.0};
  double b = 0.0;

  double operator()(const Vec3& x) const { return dot(a, x) + b; }
};

struct LinearFit {
  LinearPolynomial poly;
  double residual_sup = 0.0;
  int samples = 0;
};

/// Side of the interface containing x. For the sphere fixture Omega^+ is the
/// inner ball.
Side problem_side(const LayerProblem& p, const Vec3& x);

/// Least-squares affine fit of u on Omega^side within B_{fit_radius}(center),
/// from quasi-random samples (Halton sequence offset by `seed`).
LinearFit fit_linear_approximation(const LayerProblem& p, Side side, double fit_radius, int sample_count,
                                   std::uint64_t seed = 42, int threads = 1, const Vec3& center = {0.0, 0.0, 0.0});

/// Points of B_radius (dimension n) on the requested side of a graph, from the
/// seeded Halton sequence. Side::on_interface accepts every point.
std::vector<Vec3> side_samples(const InterfaceGraph& gamma, Side side, double radius, int count, std::uint64_t seed);

}  // namespace potlayer
