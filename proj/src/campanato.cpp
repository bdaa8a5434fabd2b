#include "potlayer/campanato.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "potlayer/errors.hpp"
#include "potlayer/greens.hpp"
#include "potlayer/parallel.hpp"
#include "potlayer/rules.hpp"
#include "potlayer/sampling.hpp"

namespace potlayer {

std::vector<double> dk_sequence(const Modulus& w, double rho, int K) {
  if (!(rho > 0.0) || rho > 0.5) throw ArgumentError("rho must lie in (0, 1/2]");
  if (K < 0) throw ArgumentError("K must be nonnegative");
  const double sr = std::sqrt(rho);
  std::vector<double> d{1.0};
  for (int k = 1; k <= K; ++k) d.push_back(std::max(w(std::pow(rho, k)), sr * d.back()));
  return d;
}

SigmaResult sigma(const Modulus& w, double rho, double r, int K_tail) {
  if (!(rho > 0.0) || rho > 0.5) throw ArgumentError("rho must lie in (0, 1/2]");
  if (!(r > 0.0) || r > 0.5) throw ArgumentError("sigma needs 0 < r <= 1/2");
  if (classify_dini(w, default_delta_ladder()).verdict == DiniVerdict::divergent)
    throw DivergentModulusError("sigma is undefined for a modulus that is not Dini: " + w.name());

  SigmaResult s;
  int k = static_cast<int>(std::floor(std::log(r) / std::log(rho)));
  while (std::pow(rho, k + 1) > r) ++k;
  while (k > 0 && std::pow(rho, k) <= r) --k;
  s.k = k;
  if (K_tail < k + 1) throw ArgumentError("K_tail must reach k + 1 for the requested r");

  const auto d = dk_sequence(w, rho, K_tail);
  s.partial = d[k + 1];
  for (int j = k; j <= K_tail; ++j) s.partial += d[j];
  for (int j = 1; j <= K_tail; ++j) {
    s.sum_d += d[j];
    s.c0 += w(std::pow(rho, j));
  }
  // Each w(rho^j) is at most the mean of w over [rho^j, rho^{j-1}] in log
  // measure; d_j <= w(rho^j) + rho^{1/2} d_{j-1} then sums geometrically.
  const double sr = std::sqrt(rho);
  const ImproperIntegral tail = dini_integral(w, std::pow(rho, K_tail));
  const double w_tail = (tail.value + tail.est_error) / std::log(1.0 / rho);
  s.tail_bound = (w_tail + sr * d[K_tail]) / (1.0 - sr);
  s.value = s.partial + s.tail_bound;
  s.sum_bound = (s.c0 + sr) / (1.0 - sr);
  s.bound_ok = s.sum_d <= s.sum_bound * (1.0 + 1e-14);
  return s;
}

namespace {

double piecewise(const LinearPolynomial& lp, const LinearPolynomial& lm, const Vec3& y, int n) {
  return normal_coord(y, n) >= 0.0 ? lp(y) : lm(y);
}

}  // namespace

std::vector<IterationState> iterate(const LayerProblem& p, double rho, int K_steps, const IterationOptions& opts) {
  if (!p.is_graph()) throw ArgumentError("iteration needs a graph interface through the origin");
  if (!(rho > 0.0) || rho > 0.5) throw ArgumentError("rho must lie in (0, 1/2]");
  if (K_steps < 0) throw ArgumentError("step count must be nonnegative");
  if (opts.n_phi < 1 || opts.n_theta < 1 || opts.sup_samples < 1) throw ArgumentError("grid sizes must be positive");
  const int n = p.ctx.n;
  const double R = p.ctx.radius;
  const double g0 = p.density.base_value();
  const Vec3 en = unit_normal(n);
  const Modulus omega = Modulus::max_of(p.graph().omega(), p.density.omega());
  const auto d = dk_sequence(omega, rho, K_steps);

  std::vector<IterationState> states;
  IterationState st;
  st.k = 0;
  st.rho = rho;
  st.l_plus.a = (0.5 * g0) * en;
  st.l_minus.a = (-0.5 * g0) * en;
  st.d_k = d[0];

  // sup errors of the current state over samples of B_{R rho^k}.
  auto measure = [&](IterationState& s) {
    const double rk = R * std::pow(rho, s.k);
    const int count = 8 * opts.sup_samples;
    std::vector<Vec3> plus, minus;
    for (const Vec3& x : halton_ball(n, {0.0, 0.0, 0.0}, rk, count, opts.seed)) {
      const Side side = problem_side(p, x);
      if (side == Side::plus && static_cast<int>(plus.size()) < opts.sup_samples) plus.push_back(x);
      if (side == Side::minus && static_cast<int>(minus.size()) < opts.sup_samples) minus.push_back(x);
    }
    std::vector<Vec3> pts = plus;
    pts.insert(pts.end(), minus.begin(), minus.end());
    std::vector<PointValue> u(pts.size());
    parallel_for(pts.size(), opts.threads, [&](std::size_t i) { u[i] = evaluate_solution(p, pts[i]); });
    s.sup_error_plus = s.sup_error_minus = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i < plus.size())
        s.sup_error_plus = std::max(s.sup_error_plus, std::abs(u[i].value - s.l_plus(pts[i])));
      else
        s.sup_error_minus = std::max(s.sup_error_minus, std::abs(u[i].value - s.l_minus(pts[i])));
      s.converged = s.converged && u[i].converged;
    }
  };

  measure(st);
  states.push_back(st);
  if (!st.converged) return states;

  for (int k = 0; k < K_steps; ++k) {
    const IterationState& cur = states.back();
    const double rk = R * std::pow(rho, k);
    const SphereGrid grid = make_sphere_grid(n, rk, opts.n_theta, opts.n_phi);
    std::vector<PointValue> u(grid.points.size());
    parallel_for(grid.points.size(), opts.threads, [&](std::size_t i) { u[i] = evaluate_solution(p, grid.points[i]); });
    std::vector<double> f(grid.points.size());
    IterationState next;
    next.k = k + 1;
    next.rho = rho;
    next.d_k = d[k + 1];
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = u[i].value - piecewise(cur.l_plus, cur.l_minus, grid.points[i], n);
      next.est_error = std::max(next.est_error, u[i].est_error);
      next.converged = next.converged && u[i].converged;
    }
    const HarmonicCenter hc = harmonic_center(BallContext{n, rk}, grid, f);
    next.l_plus = {cur.l_plus.a + hc.grad0, cur.l_plus.b + hc.v0};
    next.l_minus = {cur.l_minus.a + hc.grad0, cur.l_minus.b + hc.v0};
    next.increment = rk * std::sqrt(norm2(hc.grad0)) + std::abs(hc.v0);
    if (next.converged) measure(next);
    states.push_back(next);
    if (!next.converged) break;
  }
  return states;
}

CauchyCheck cauchy_check(const std::vector<IterationState>& states) {
  if (states.size() < 2) throw ArgumentError("Cauchy check needs at least one update");
  CauchyCheck c;
  const double rho = states.front().rho;
  c.c_fit = states[1].increment / states[0].d_k;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const double scale = states[k - 1].d_k * std::pow(rho, static_cast<double>(k - 1));
    const double bound = c.c_fit * scale;
    const double ratio = bound > 0.0 ? states[k].increment / bound : (states[k].increment > 0.0 ? INFINITY : 0.0);
    c.max_ratio = std::max(c.max_ratio, ratio);
  }
  c.ok = c.max_ratio <= 3.0;
  return c;
}

std::vector<BumpTest> random_bumps(int n, double r, int count, std::uint64_t seed) {
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
  if (!(r > 0.0) || count < 0) throw ArgumentError("bumps need r > 0 and count >= 0");
  std::vector<BumpTest> out;
  HaltonSequence seq(3, seed);
  while (static_cast<int>(out.size()) < count) {
    const Vec3 u = seq.next();
    // Radius in [r/8, r/2], centre within B_{r/2} and within s/2 of the plane.
    const double s = r * (0.125 + 0.375 * u[0]);
    Vec3 c{0.0, 0.0, 0.0};
    c[n - 1] = (u[1] - 0.5) * s;
    if (n == 3) {
      const double ang = 2.0 * std::numbers::pi * u[2];
      const double rad = 0.5 * r - s;
      c[0] = std::max(0.0, rad) * 0.5 * std::cos(ang);
      c[1] = std::max(0.0, rad) * 0.5 * std::sin(ang);
    } else {
      c[0] = std::max(0.0, 0.5 * r - s) * (2.0 * u[2] - 1.0) * 0.5;
    }
    if (norm(c) + s > r) continue;
    out.push_back({c, s});
  }
  return out;
}

double distributional_residual(int n, const LinearPolynomial& l_plus, const LinearPolynomial& l_minus, double g0,
                               const BumpTest& phi) {
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
  const double s = phi.radius;
  if (!(s > 0.0)) throw ArgumentError("bump radius must be positive");
  const Vec3 c = phi.center;
  const double s2 = s * s;
  const GaussRule& gr = gauss_legendre(12);
  const int n_ang = 24;

  auto bump = [&](const Vec3& x) {
    const double u = (s2 - norm2(x - c)) / s2;
    return u * u * u * u;
  };
  auto lap_bump = [&](const Vec3& x) {
    const double q = norm2(x - c);
    const double u = (s2 - q) / s2;
    return -8.0 * n * u * u * u / s2 + 48.0 * u * u * q / (s2 * s2);
  };

  // \int over the slice {x_n = t} of the ball, of f.
  auto slice = [&](double t, auto&& f) {
    const double h = t - c[n - 1];
    const double R2 = s2 - h * h;
    if (R2 <= 0.0) return 0.0;
    const double R = std::sqrt(R2);
    double acc = 0.0;
    if (n == 2) {
      for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double x1 = c[0] + R * gr.nodes[i];
        acc += gr.weights[i] * R * f(Vec3{x1, t, 0.0});
      }
      return acc;
    }
    for (int m = 0; m < n_ang; ++m) {
      const double th = 2.0 * std::numbers::pi * m / n_ang;
      const double ct = std::cos(th), st = std::sin(th);
      for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double rr = 0.5 * R * (gr.nodes[i] + 1.0);
        const double w = 0.5 * R * gr.weights[i] * rr * (2.0 * std::numbers::pi / n_ang);
        acc += w * f(Vec3{c[0] + rr * ct, c[1] + rr * st, t});
      }
    }
    return acc;
  };

  // Slices are parametrized by t = c_n + s sin(alpha), which turns the
  // square-root slice radius into a smooth function of alpha.
  const GaussRule& ga = gauss_legendre(40);
  auto volume = [&](double a, double b, const LinearPolynomial& l) {
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < ga.nodes.size(); ++i) {
      const double al = mid + half * ga.nodes[i];
      const double t = c[n - 1] + s * std::sin(al);
      acc += ga.weights[i] * half * s * std::cos(al) * slice(t, [&](const Vec3& x) { return l(x) * lap_bump(x); });
    }
    return acc;
  };

  const double pi2 = 0.5 * std::numbers::pi;
  const double a0 = std::asin(std::clamp(-c[n - 1] / s, -1.0, 1.0));
  const double vol = volume(a0, pi2, l_plus) + volume(-pi2, a0, l_minus);
  const double surf = slice(0.0, bump);
  return vol - g0 * surf;
}

}  // namespace potlayer
