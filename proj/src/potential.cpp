#include "potlayer/potential.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "potlayer/errors.hpp"
#include "potlayer/parallel.hpp"
#include "potlayer/quadrature.hpp"
#include "potlayer/sampling.hpp"

namespace potlayer {

LayerProblem::LayerProblem(BallContext c, std::variant<InterfaceGraph, SphereInterface> gamma, SurfaceDensity g,
                           QuadratureSpec s, std::optional<double> clip_r)
    : ctx(c), interface(std::move(gamma)), density(std::move(g)), spec(s), clip(clip_r) {
  ctx.validate();
  spec.validate();
  if (is_graph()) {
    const InterfaceGraph& G = graph();
    if (G.dim() != ctx.n) throw ArgumentError("interface dimension does not match the ball");
    const double cr = clip_radius();
    if (!(cr > 0.0) || cr > ctx.radius * (1.0 + 1e-12))
      throw ArgumentError("clip radius must lie in (0, ball radius]");
    if (cr > G.chart_radius() * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "interface chart radius " << G.chart_radius() << " does not cover the integration radius " << cr;
      throw ArgumentError(os.str());
    }
  } else {
    const double s = std::get<SphereInterface>(interface).radius;
    if (!(s > 0.0) || !(s < ctx.radius)) throw ArgumentError("sphere fixture needs 0 < s < ball radius");
    if (clip) throw ArgumentError("clip radius applies to graph interfaces only");
  }
}

LayerProblem LayerProblem::with_tol(double tol) const {
  LayerProblem q = *this;
  q.spec.target_tol = tol;
  q.spec.validate();
  return q;
}

namespace {

void check_point(const LayerProblem& p, const Vec3& x) {
  if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2]))
    throw ArgumentError("evaluation point must be finite");
  if (p.ctx.n == 2 && x[2] != 0.0) throw ArgumentError("n = 2 points must have a zero third coordinate");
  if (norm(x) > p.ctx.radius * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "evaluation point with |x| = " << norm(x) << " lies outside the ball of radius " << p.ctx.radius;
    throw DomainError(os.str());
  }
}

std::optional<NearPoint> graph_near(const LayerProblem& p, const Vec3& x) {
  const InterfaceGraph& G = p.graph();
  const Vec2 xp = tangential(x, p.ctx.n);
  if (norm(xp) >= G.chart_radius()) return std::nullopt;
  const Vec2 gr = G.grad(xp);
  const double d = std::abs(normal_coord(x, p.ctx.n) - G.psi(xp)) / std::sqrt(1.0 + gr[0] * gr[0] + gr[1] * gr[1]);
  return NearPoint{xp, d};
}

double sphere_radius(const LayerProblem& p) { return std::get<SphereInterface>(p.interface).radius; }

SphereNear sphere_near(const LayerProblem& p, const Vec3& x) {
  const double s = sphere_radius(p);
  return {x, std::abs(norm(x) - s)};
}

bool on_interface(const LayerProblem& p, const Vec3& x) {
  if (p.is_graph()) {
    const InterfaceGraph& G = p.graph();
    const Vec2 xp = tangential(x, p.ctx.n);
    if (norm(xp) >= G.chart_radius()) return false;
    if (point_side(G, x) != Side::on_interface) return false;
    return detail::inside_domain(G, PatchDomain::ball_section(p.clip_radius()), xp);
  }
  return std::abs(norm(x) - sphere_radius(p)) <= 1e-14;
}

}  // namespace

double interface_distance(const LayerProblem& p, const Vec3& x) {
  if (p.is_graph()) {
    auto near = graph_near(p, x);
    return near ? near->distance : std::numeric_limits<double>::infinity();
  }
  return std::abs(norm(x) - sphere_radius(p));
}

Side problem_side(const LayerProblem& p, const Vec3& x) {
  if (p.is_graph()) return point_side(p.graph(), x);
  const double d = sphere_radius(p) - norm(x);
  if (std::abs(d) <= 1e-14) return Side::on_interface;
  return d > 0.0 ? Side::plus : Side::minus;
}

PointValue evaluate_solution(const LayerProblem& p, const Vec3& x) {
  check_point(p, x);
  PointValue out;
  if (p.density.is_zero()) return out;
  const BallContext& ctx = p.ctx;
  auto kernel = [&](const Vec3& y) {
    const double d = norm(x - y);
    if (d == 0.0) return 0.0;  // measure-zero node; never hit by Gauss points
    return greens_unchecked(ctx, x, y) * p.density(y);
  };
  if (p.is_graph()) {
    auto r = graph_patch_integral_n<1>(
        p.graph(), [&](const SurfacePoint& sp) { return std::array<double, 1>{kernel(sp.y)}; },
        PatchDomain::ball_section(p.clip_radius()), graph_near(p, x), p.spec);
    out = {r.value[0], r.est_error, r.converged, r.panels};
  } else {
    auto r = sphere_integral_n<1>(
        ctx.n, sphere_radius(p), [&](const Vec3& y) { return std::array<double, 1>{kernel(y)}; }, sphere_near(p, x),
        p.spec);
    out = {r.value[0], r.est_error, r.converged, r.panels};
  }
  return out;
}

GradientValue evaluate_gradient(const LayerProblem& p, const Vec3& x) {
  check_point(p, x);
  if (on_interface(p, x)) throw DomainError("gradient requested on the interface; use transmission_jump");
  GradientValue out;
  if (p.density.is_zero()) return out;
  const BallContext& ctx = p.ctx;
  auto kernel = [&](const Vec3& y) {
    const Vec3 gx = greens_gradient_x_unchecked(ctx, x, y);
    const double g = p.density(y);
    return std::array<double, 3>{gx[0] * g, gx[1] * g, gx[2] * g};
  };
  QuadResultN<3> r;
  if (p.is_graph()) {
    r = graph_patch_integral_n<3>(
        p.graph(), [&](const SurfacePoint& sp) { return kernel(sp.y); }, PatchDomain::ball_section(p.clip_radius()),
        graph_near(p, x), p.spec);
  } else {
    r = sphere_integral_n<3>(ctx.n, sphere_radius(p), kernel, sphere_near(p, x), p.spec);
  }
  out.value = {r.value[0], r.value[1], r.value[2]};
  if (ctx.n == 2) out.value[2] = 0.0;
  out.est_error = r.est_error;
  out.converged = r.converged;
  out.panels = r.panels;
  return out;
}

std::vector<double> default_h_ladder() { return {1e-2, 5e-3, 2.5e-3}; }

namespace {

// Normal at x0 pointing into Omega^+.
Vec3 plus_normal(const LayerProblem& p, const Vec3& x0) {
  if (p.is_graph()) {
    const Vec2 gr = p.graph().grad(tangential(x0, p.ctx.n));
    const double s = 1.0 / std::sqrt(1.0 + gr[0] * gr[0] + gr[1] * gr[1]);
    return p.ctx.n == 3 ? Vec3{-gr[0] * s, -gr[1] * s, s} : Vec3{-gr[0] * s, s, 0.0};
  }
  const double m = norm(x0);
  return (-1.0 / m) * x0;
}

}  // namespace

JumpResult transmission_jump(const LayerProblem& p, const Vec3& x0, const std::vector<double>& h_ladder,
                             double fallback_order) {
  check_point(p, x0);
  if (h_ladder.empty()) throw ArgumentError("h ladder must not be empty");
  for (std::size_t i = 0; i < h_ladder.size(); ++i) {
    if (!(h_ladder[i] > 0.0)) throw ArgumentError("h ladder entries must be positive");
    if (i > 0 && !(h_ladder[i] < h_ladder[i - 1])) throw ArgumentError("h ladder must be strictly decreasing");
  }
  if (!on_interface(p, x0)) {
    // Snap tolerance for graph points given with rounding noise.
    if (!(interface_distance(p, x0) <= 1e-12)) throw ArgumentError("x0 must lie on the interface");
  }
  const Vec3 nu = plus_normal(p, x0);
  const double hmax = h_ladder.front();
  if (norm(x0) + 2.0 * hmax >= p.ctx.radius) throw ArgumentError("h ladder leaves the ball");
  if (p.is_graph() && norm(tangential(x0, p.ctx.n)) + 2.0 * hmax >= p.graph().chart_radius())
    throw ArgumentError("h ladder leaves the chart");

  JumpResult res;
  const PointValue u0 = evaluate_solution(p.with_tol(p.spec.target_tol * h_ladder.back() / 10.0), x0);
  res.converged = u0.converged;
  for (double h : h_ladder) {
    // Difference quotients divide by h, so the point values are computed
    // proportionally tighter.
    const LayerProblem q = p.with_tol(p.spec.target_tol * h / 10.0);
    const PointValue& a0 = u0;  // computed at the tightest tolerance
    const PointValue p1 = evaluate_solution(q, x0 + h * nu);
    const PointValue p2 = evaluate_solution(q, x0 + (2.0 * h) * nu);
    const PointValue m1 = evaluate_solution(q, x0 - h * nu);
    const PointValue m2 = evaluate_solution(q, x0 - (2.0 * h) * nu);
    JumpSample s;
    s.h = h;
    s.d_plus = (-3.0 * a0.value + 4.0 * p1.value - p2.value) / (2.0 * h);
    s.d_minus = (3.0 * a0.value - 4.0 * m1.value + m2.value) / (2.0 * h);
    s.jump = s.d_plus - s.d_minus;
    s.est_error = (6.0 * a0.est_error + 4.0 * (p1.est_error + m1.est_error) + p2.est_error + m2.est_error) / (2.0 * h);
    res.converged = res.converged && a0.converged && p1.converged && p2.converged && m1.converged && m2.converged;
    res.per_h.push_back(s);
  }

  const auto& J = res.per_h;
  const std::size_t m = J.size();
  res.order = fallback_order;
  res.jump = J[m - 1].jump;
  if (m == 1) return res;

  bool equal_ratios = true;
  for (std::size_t i = 2; i < m; ++i)
    equal_ratios = equal_ratios && std::abs(h_ladder[i - 2] / h_ladder[i - 1] - h_ladder[i - 1] / h_ladder[i]) <=
                                       1e-9 * (h_ladder[i - 1] / h_ladder[i]);

  double lead = p.is_graph() ? Modulus::max_of(p.graph().omega(), p.density.omega()).power_exponent()
                             : std::numeric_limits<double>::infinity();
  if (std::isinf(lead)) {
    lead = fallback_order;
  } else if (!(lead > 0.0)) {
    lead = fallback_order;
    if (m >= 3 && equal_ratios) {
      const double d1 = J[m - 3].jump - J[m - 2].jump;
      const double d2 = J[m - 2].jump - J[m - 1].jump;
      if (d2 != 0.0 && d1 / d2 > 0.0) {
        const double est = std::log(d1 / d2) / std::log(h_ladder[m - 2] / h_ladder[m - 1]);
        if (est >= 0.25 && est <= 4.0) lead = est;
      }
    }
  }
  res.order = lead;

  // Richardson table: column c removes the error term of order c * lead.
  std::vector<double> col(m);
  for (std::size_t i = 0; i < m; ++i) col[i] = J[i].jump;
  for (std::size_t c = 1; c < m; ++c) {
    const double order = static_cast<double>(c) * lead;
    std::vector<double> next(m - c);
    for (std::size_t i = 0; i + c < m; ++i) {
      const double q = std::pow(h_ladder[i + c - 1] / h_ladder[i + c], order);
      next[i] = col[i + 1] + (col[i + 1] - col[i]) / (q - 1.0);
    }
    col = std::move(next);
  }
  res.jump = col[0];
  return res;
}

double radial_oracle(double abs_x, double s, double r, double g0) {
  if (!(s > 0.0) || !(s < r)) throw ArgumentError("radial oracle needs 0 < s < r");
  if (!(abs_x >= 0.0) || abs_x > r * (1.0 + 1e-12)) throw DomainError("radial oracle point outside the ball");
  return -g0 * s * s * (1.0 / std::max(abs_x, s) - 1.0 / r);
}

namespace {

template <class Pred>
std::vector<Vec3> filtered_ball_samples(int n, const Vec3& center, double radius, int count, std::uint64_t seed,
                                        Pred&& keep) {
  std::vector<Vec3> out;
  // Draw in growing batches so the result is a prefix-stable function of the seed.
  int batch = std::max(count, 16);
  for (int round = 0; round < 8 && static_cast<int>(out.size()) < count; ++round) {
    out.clear();
    for (const Vec3& x : halton_ball(n, center, radius, batch, seed)) {
      if (keep(x)) out.push_back(x);
      if (static_cast<int>(out.size()) == count) break;
    }
    batch *= 2;
  }
  return out;
}

}  // namespace

std::vector<Vec3> side_samples(const InterfaceGraph& gamma, Side side, double radius, int count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("sample count must be positive");
  if (!(radius > 0.0)) throw ArgumentError("sample radius must be positive");
  if (radius > gamma.chart_radius()) throw ArgumentError("sample radius exceeds the chart");
  return filtered_ball_samples(gamma.dim(), {0.0, 0.0, 0.0}, radius, count, seed, [&](const Vec3& x) {
    return side == Side::on_interface || point_side(gamma, x) == side;
  });
}

LinearFit fit_linear_approximation(const LayerProblem& p, Side side, double fit_radius, int sample_count,
                                   std::uint64_t seed, int threads, const Vec3& center) {
  const int n = p.ctx.n;
  if (side == Side::on_interface) throw ArgumentError("fit side must be plus or minus");
  if (!(fit_radius > 0.0) || fit_radius > 0.5 * p.ctx.radius)
    throw ArgumentError("fit radius must lie in (0, r/2]");
  if (norm(center) + fit_radius >= p.ctx.radius) throw ArgumentError("fit ball must lie inside the domain");
  if (sample_count < n + 1) throw ArgumentError("fit needs at least n + 1 samples");

  const auto pts = filtered_ball_samples(n, center, fit_radius, sample_count, seed,
                                         [&](const Vec3& x) { return problem_side(p, x) == side; });
  if (static_cast<int>(pts.size()) < n + 1) throw ArgumentError("fewer than n + 1 usable samples on the requested side");

  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { vals[i] = evaluate_solution(p, pts[i]).value; });

  // Columns: x_1..x_n relative to the centre, and 1.
  Eigen::MatrixXd A(pts.size(), n + 1);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = pts[i][j] - center[j];
    A(i, n) = 1.0;
    y(i) = vals[i];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  LinearFit fit;
  for (int j = 0; j < n; ++j) fit.poly.a[j] = c(j);
  fit.poly.b = c(n) - dot(fit.poly.a, center);
  fit.samples = static_cast<int>(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    fit.residual_sup = std::max(fit.residual_sup, std::abs(vals[i] - fit.poly(pts[i])));
  return fit;
}

}  // namespace potlayer
