#pragma once

// Graph interfaces {x_n = psi(x')} in a normalized chart, surface densities,
// and the sphere fixture.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "potlayer/modulus.hpp"
#include "potlayer/vec.hpp"

namespace potlayer {

enum class Side { plus, minus, on_interface };

std::string to_string(Side s);

/// Graph interface Gamma = {x_n = psi(x')} over the chart |x'| < chart_radius.
///
/// All built-in families are radial, psi(x') = f(|x'|), normalized so that
/// psi(0) = 0 and grad psi(0) = 0. `seminorm` is K = [psi]_{C^{1,Dini}(0)}
/// with respect to `omega`, i.e. |grad psi(y')| <= K omega(|y'|).
class InterfaceGraph {
 public:
  static InterfaceGraph flat(int n);
  /// psi(x') = K |x'|^{1+alpha}; omega = power(alpha), seminorm K (1 + alpha).
  static InterfaceGraph holder(int n, double alpha, double K);
  /// psi(x') = |x'| / |log |x'|| on |x'| < 1/4, psi(0) = 0; omega = inverse_log.
  static InterfaceGraph counterexample(int n);
  /// Radial profile given by samples (rho_i, slope_i) of f'(rho) with
  /// rho_0 = 0 and slope_0 = 0; f' is interpolated linearly and integrated
  /// exactly. Chart radius is the last sample radius.
  static InterfaceGraph table(int n, std::vector<std::pair<double, double>> slope_samples);

  int dim() const { return n_; }
  double chart_radius() const { return chart_radius_; }
  double seminorm() const { return seminorm_; }
  const Modulus& omega() const { return omega_; }
  const std::string& family() const { return family_; }
  bool is_flat() const { return family_ == "flat"; }

  double psi(const Vec2& yp) const;
  Vec2 grad(const Vec2& yp) const;
  /// Radial profile f and its derivative.
  double profile(double rho) const { return profile_(rho); }
  double profile_slope(double rho) const { return slope_(rho); }

 private:
  InterfaceGraph() = default;

  int n_ = 3;
  double chart_radius_ = 1.0;
  double seminorm_ = 0.0;
  Modulus omega_ = Modulus::zero();
  std::string family_;
  std::function<double(double)> profile_;
  std::function<double(double)> slope_;
};

/// sqrt(1 + |grad psi(y')|^2); DomainError outside the chart.
double area_element(const InterfaceGraph& gamma, const Vec2& yp);

/// Which side of Gamma the point x lies on; |x_n - psi(x')| <= 1e-14 is on_interface.
Side point_side(const InterfaceGraph& gamma, const Vec3& x);

/// Density g on the interface with base value g(0) and modulus omega_g:
/// |g(x) - g(0)| <= seminorm * omega_g(|x|).
class SurfaceDensity {
 public:
  static SurfaceDensity constant(double c);
  /// g(x) = base + A |x|^alpha.
  static SurfaceDensity holder(double alpha, double A, double base = 1.0);
  /// g(x) = eta(x_1) with eta(t) = 1/|log t| on (0, 1/2), 0 for t <= 0.
  static SurfaceDensity counterexample_eta();
  /// Radial table g(x) = h(|x|), h piecewise linear through (r_i, g_i), r_0 = 0.
  static SurfaceDensity table(std::vector<std::pair<double, double>> samples);

  double operator()(const Vec3& x) const { return g_(x); }
  double base_value() const { return g0_; }
  const Modulus& omega() const { return omega_; }
  double seminorm() const { return seminorm_; }
  const std::string& family() const { return family_; }
  bool is_constant() const { return family_ == "constant"; }
  bool is_zero() const { return is_constant() && g0_ == 0.0; }

 private:
  SurfaceDensity() = default;

  std::function<double(const Vec3&)> g_;
  double g0_ = 0.0;
  Modulus omega_ = Modulus::zero();
  double seminorm_ = 0.0;
  std::string family_;
};

/// Sphere of radius s centred at the origin; analytic test fixture.
struct SphereInterface {
  double radius = 0.5;
};

}  // namespace potlayer
