#include "potlayer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "potlayer/errors.hpp"

namespace potlayer {

std::string to_string(Side s) {
  switch (s) {
    case Side::plus: return "plus";
    case Side::minus: return "minus";
    case Side::on_interface: return "on_interface";
  }
  return "on_interface";
}

namespace {

void check_dim(int n) {
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
}

double radius_of(const Vec2& yp) { return norm(yp); }

}  // namespace

InterfaceGraph InterfaceGraph::flat(int n) {
  check_dim(n);
  InterfaceGraph g;
  g.n_ = n;
  g.family_ = "flat";
  g.profile_ = [](double) { return 0.0; };
  g.slope_ = [](double) { return 0.0; };
  return g;
}

InterfaceGraph InterfaceGraph::holder(int n, double alpha, double K) {
  check_dim(n);
  if (!(alpha > 0.0) || alpha > 1.0) throw ArgumentError("holder interface needs 0 < alpha <= 1");
  if (!(K >= 0.0) || !std::isfinite(K)) throw ArgumentError("holder interface needs K >= 0");
  InterfaceGraph g;
  g.n_ = n;
  g.family_ = "holder";
  g.omega_ = Modulus::power(alpha);
  g.seminorm_ = K * (1.0 + alpha);
  g.profile_ = [alpha, K](double r) { return K * std::pow(r, 1.0 + alpha); };
  g.slope_ = [alpha, K](double r) { return K * (1.0 + alpha) * std::pow(r, alpha); };
  return g;
}

InterfaceGraph InterfaceGraph::counterexample(int n) {
  check_dim(n);
  InterfaceGraph g;
  g.n_ = n;
  g.family_ = "counterexample_graph";
  g.chart_radius_ = 0.25;
  g.omega_ = Modulus::inverse_log();
  // |f'(r)| = 1/|log r| + 1/log^2 r <= (1 + 1/log 4) / |log r| on (0, 1/4).
  g.seminorm_ = 1.0 + 1.0 / std::log(4.0);
  g.profile_ = [](double r) { return r <= 0.0 ? 0.0 : r / std::abs(std::log(r)); };
  g.slope_ = [](double r) {
    if (r <= 0.0) return 0.0;
    const double L = std::abs(std::log(r));
    return (L + 1.0) / (L * L);
  };
  return g;
}

InterfaceGraph InterfaceGraph::table(int n, std::vector<std::pair<double, double>> s) {
  check_dim(n);
  if (s.size() < 2) throw ArgumentError("table interface needs at least two samples");
  if (s.front().first != 0.0 || s.front().second != 0.0)
    throw ArgumentError("table interface must start at (0, 0) so that grad psi(0) = 0");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].first > s[i - 1].first) || !std::isfinite(s[i].second))
      throw ArgumentError("table interface radii must be strictly increasing with finite slopes");
  if (s.back().first > 1.0) throw ArgumentError("table interface chart radius must not exceed 1");

  // Exact integral of the piecewise-linear slope at each knot.
  auto knots = std::make_shared<std::vector<std::pair<double, double>>>(std::move(s));
  auto heights = std::make_shared<std::vector<double>>(knots->size(), 0.0);
  for (std::size_t i = 1; i < knots->size(); ++i) {
    const auto [r0, s0] = (*knots)[i - 1];
    const auto [r1, s1] = (*knots)[i];
    (*heights)[i] = (*heights)[i - 1] + 0.5 * (s0 + s1) * (r1 - r0);
  }
  auto locate = [knots](double r) {
    auto it = std::upper_bound(knots->begin(), knots->end(), r, [](double x, const auto& p) { return x < p.first; });
    std::size_t i = static_cast<std::size_t>(it - knots->begin());
    return std::clamp<std::size_t>(i, 1, knots->size() - 1) - 1;
  };

  InterfaceGraph g;
  g.n_ = n;
  g.family_ = "table";
  g.chart_radius_ = knots->back().first;
  g.slope_ = [knots, locate](double r) {
    const std::size_t i = locate(r);
    const auto [r0, s0] = (*knots)[i];
    const auto [r1, s1] = (*knots)[i + 1];
    return s0 + (s1 - s0) * (r - r0) / (r1 - r0);
  };
  g.profile_ = [knots, heights, locate](double r) {
    const std::size_t i = locate(r);
    const auto [r0, s0] = (*knots)[i];
    const auto [r1, s1] = (*knots)[i + 1];
    const double t = r - r0;
    return (*heights)[i] + s0 * t + 0.5 * (s1 - s0) / (r1 - r0) * t * t;
  };
  // omega from the running maximum of |slope|, normalized so omega(1) <= 1.
  std::vector<std::pair<double, double>> w;
  double run = 0.0;
  for (const auto& [r, sl] : *knots) {
    run = std::max(run, std::abs(sl));
    w.emplace_back(r, run);
  }
  g.seminorm_ = run;
  if (run > 0.0) {
    for (auto& p : w) p.second /= run;
    g.omega_ = Modulus::table(std::move(w));
  }
  return g;
}

double InterfaceGraph::psi(const Vec2& yp) const { return profile_(radius_of(yp)); }

Vec2 InterfaceGraph::grad(const Vec2& yp) const {
  const double r = radius_of(yp);
  if (r == 0.0) return {0.0, 0.0};
  const double s = slope_(r) / r;
  return {s * yp[0], s * yp[1]};
}

double area_element(const InterfaceGraph& gamma, const Vec2& yp) {
  if (radius_of(yp) >= gamma.chart_radius() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "area_element at |y'| = " << radius_of(yp) << " outside chart radius " << gamma.chart_radius();
    throw DomainError(os.str());
  }
  const double s = gamma.profile_slope(radius_of(yp));
  return std::sqrt(1.0 + s * s);
}

Side point_side(const InterfaceGraph& gamma, const Vec3& x) {
  const int n = gamma.dim();
  const double d = normal_coord(x, n) - gamma.psi(tangential(x, n));
  if (std::abs(d) <= 1e-14) return Side::on_interface;
  return d > 0.0 ? Side::plus : Side::minus;
}

SurfaceDensity SurfaceDensity::constant(double c) {
  if (!std::isfinite(c)) throw ArgumentError("constant density must be finite");
  SurfaceDensity d;
  d.family_ = "constant";
  d.g0_ = c;
  d.g_ = [c](const Vec3&) { return c; };
  return d;
}

SurfaceDensity SurfaceDensity::holder(double alpha, double A, double base) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ArgumentError("holder density needs 0 < alpha <= 1");
  if (!std::isfinite(A) || !std::isfinite(base)) throw ArgumentError("holder density parameters must be finite");
  SurfaceDensity d;
  d.family_ = "holder";
  d.g0_ = base;
  d.omega_ = Modulus::power(alpha);
  d.seminorm_ = std::abs(A);
  d.g_ = [alpha, A, base](const Vec3& x) { return base + A * std::pow(norm(x), alpha); };
  return d;
}

SurfaceDensity SurfaceDensity::counterexample_eta() {
  SurfaceDensity d;
  d.family_ = "counterexample_eta";
  d.g0_ = 0.0;
  d.omega_ = Modulus::inverse_log();
  // eta(x_1) <= 1/|log|x||, and on (1/e, 1/2) eta stays below 1/log 2.
  d.seminorm_ = 1.0 / std::log(2.0);
  d.g_ = [](const Vec3& x) {
    const double t = x[0];
    if (t <= 0.0) return 0.0;
    if (t >= 0.5) throw DomainError("counterexample density is only defined for x_1 < 1/2");
    return 1.0 / std::abs(std::log(t));
  };
  return d;
}

SurfaceDensity SurfaceDensity::table(std::vector<std::pair<double, double>> s) {
  if (s.size() < 2) throw ArgumentError("table density needs at least two samples");
  if (s.front().first != 0.0) throw ArgumentError("table density must start at radius 0");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].first > s[i - 1].first) || !std::isfinite(s[i].second))
      throw ArgumentError("table density radii must be strictly increasing with finite values");
  auto knots = std::make_shared<std::vector<std::pair<double, double>>>(std::move(s));
  SurfaceDensity d;
  d.family_ = "table";
  d.g0_ = knots->front().second;
  d.g_ = [knots](const Vec3& x) {
    const double r = norm(x);
    if (r >= knots->back().first) return knots->back().second;
    auto it = std::upper_bound(knots->begin(), knots->end(), r, [](double v, const auto& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.second + (hi.second - lo.second) * (r - lo.first) / (hi.first - lo.first);
  };
  std::vector<std::pair<double, double>> w;
  double run = 0.0;
  for (const auto& [r, v] : *knots) {
    run = std::max(run, std::abs(v - d.g0_));
    w.emplace_back(r, run);
  }
  d.seminorm_ = run;
  if (run > 0.0) {
    for (auto& p : w) p.second /= run;
    d.omega_ = Modulus::table(std::move(w));
  }
  return d;
}

}  // namespace potlayer
