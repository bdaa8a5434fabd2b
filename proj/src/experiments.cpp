#include "potlayer/experiments.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "potlayer/errors.hpp"
#include "potlayer/parallel.hpp"
#include "potlayer/sampling.hpp"

namespace potlayer {

namespace {

double log_graph(double t) { return t / std::abs(std::log(t)); }

}  // namespace

double r_epsilon(double eps) {
  const double top = log_graph(0.25);
  if (!(eps > 0.0) || !(eps < top)) {
    std::ostringstream os;
    os << "r_epsilon needs 0 < eps < psi(1/4) = " << top << ", got " << eps;
    throw ArgumentError(os.str());
  }
  // Bracket from below by halving until psi drops under eps.
  double lo = std::min(eps * eps, eps / 64.0);
  while (log_graph(lo) > eps) lo *= 0.5;
  auto F = [eps](double t) { return log_graph(t) - eps; };
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13; };
  std::uintmax_t iters = 500;
  const auto [a, b] = boost::math::tools::toms748_solve(F, lo, 0.25, F(lo), F(0.25), tol, iters);
  return 0.5 * (a + b);
}

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("line fit needs two or more (x, y) pairs");
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

LayerProblem blowup_graph_problem(bool control, const QuadratureSpec& spec) {
  const BallContext ctx{3, 1.0};
  if (control) return LayerProblem(ctx, InterfaceGraph::flat(3), SurfaceDensity::constant(1.0), spec);
  return LayerProblem(ctx, InterfaceGraph::counterexample(3), SurfaceDensity::constant(1.0), spec, 0.25);
}

LayerProblem blowup_density_problem(bool control, const QuadratureSpec& spec) {
  const BallContext ctx{3, 1.0};
  return LayerProblem(ctx, InterfaceGraph::flat(3),
                      control ? SurfaceDensity::constant(1.0) : SurfaceDensity::counterexample_eta(), spec, 0.5);
}

namespace {

void check_j_range(const std::vector<int>& j_range) {
  if (j_range.size() < 2) throw ArgumentError("scan needs at least two j values");
  for (std::size_t i = 0; i < j_range.size(); ++i) {
    if (j_range[i] < 3 || j_range[i] > 40) throw ArgumentError("scan indices must lie in [3, 40]");
    if (i > 0 && j_range[i] <= j_range[i - 1]) throw ArgumentError("scan indices must be strictly increasing");
  }
}

BlowupScan run_scan(const LayerProblem& p, const std::vector<int>& j_range, int component, bool graph_abscissa,
                    int threads) {
  BlowupScan s;
  s.j = j_range;
  const std::size_t m = j_range.size();
  s.epsilons.resize(m);
  s.derivative_values.resize(m);
  s.est_errors.resize(m);
  s.abscissae.resize(m);
  s.converged.assign(m, true);
  if (graph_abscissa) s.r_epsilons.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    s.epsilons[i] = std::ldexp(1.0, -j_range[i]);
    if (graph_abscissa) {
      s.r_epsilons[i] = r_epsilon(s.epsilons[i]);
      s.abscissae[i] = std::log(std::abs(std::log(s.r_epsilons[i])));
    } else {
      s.abscissae[i] = std::log(std::abs(std::log(s.epsilons[i])));
    }
  }
  std::vector<GradientValue> grads(m);
  parallel_for(m, threads, [&](std::size_t i) { grads[i] = evaluate_gradient(p, {0.0, 0.0, s.epsilons[i]}); });
  std::vector<double> neg(m);
  for (std::size_t i = 0; i < m; ++i) {
    s.derivative_values[i] = grads[i].value[component];
    s.est_errors[i] = grads[i].est_error;
    s.converged[i] = grads[i].converged;
    neg[i] = -s.derivative_values[i];
  }
  s.fit = least_squares_line(s.abscissae, neg);
  return s;
}

}  // namespace

BlowupScan blowup_graph_scan(const std::vector<int>& j_range, const ScanOptions& opts) {
  check_j_range(j_range);
  // The ladder must stay below psi(1/4) so that r_eps is defined.
  return run_scan(blowup_graph_problem(opts.control, opts.spec), j_range, 2, true, opts.threads);
}

BlowupScan blowup_density_scan(const std::vector<int>& j_range, const ScanOptions& opts) {
  check_j_range(j_range);
  return run_scan(blowup_density_problem(opts.control, opts.spec), j_range, 0, false, opts.threads);
}

KeyLemmaScan key_lemma_ratio(const InterfaceGraph& gamma, const SurfaceDensity& g, double rho,
                             const std::vector<double>& radii, const KeyLemmaOptions& opts) {
  if (gamma.dim() != 3) throw ArgumentError("key-lemma scan runs in dimension 3");
  if (!(rho > 0.0) || rho > 0.5) throw ArgumentError("rho must lie in (0, 1/2]");
  if (radii.empty()) throw ArgumentError("key-lemma scan needs at least one radius");
  if (opts.sample_count < 1) throw ArgumentError("sample count must be positive");
  for (double r : radii)
    if (!(r > 0.0) || r > 1.0 || r > gamma.chart_radius()) throw ArgumentError("radii must lie in (0, min(1, chart)]");

  const Modulus omega = Modulus::max_of(gamma.omega(), g.omega());
  const SurfaceDensity g0 = SurfaceDensity::constant(g.base_value());
  const InterfaceGraph flat = InterfaceGraph::flat(3);

  KeyLemmaScan scan;
  scan.rho = rho;
  scan.radii = radii;
  for (double r : radii) {
    QuadratureSpec spec = opts.spec;
    if (opts.scale_tol_with_radius) spec.target_tol *= r;
    const BallContext ctx{3, r};
    const LayerProblem curved(ctx, gamma, g, spec);
    const LayerProblem model(ctx, flat, g0, spec);

    std::vector<Vec3> pts{{0.0, 0.0, 0.0}};
    for (const Vec3& x : halton_ball(3, {0.0, 0.0, 0.0}, rho * r, opts.sample_count, opts.seed)) pts.push_back(x);

    std::vector<double> w(pts.size()), err(pts.size());
    std::vector<char> ok(pts.size(), 1);
    parallel_for(pts.size(), opts.threads, [&](std::size_t i) {
      const PointValue u = evaluate_solution(curved, pts[i]);
      const PointValue v = evaluate_solution(model, pts[i]);
      w[i] = std::abs(u.value - v.value);
      err[i] = u.est_error + v.est_error;
      ok[i] = u.converged && v.converged;
    });
    double sup = 0.0, e = 0.0;
    bool conv = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (w[i] > sup) {
        sup = w[i];
        e = err[i];
      }
      conv = conv && ok[i];
    }
    const double om = omega.value(r);
    scan.sup_w.push_back(sup);
    scan.omega.push_back(om);
    scan.ratios.push_back(sup == 0.0 ? 0.0 : sup / (r * om));
    scan.est_errors.push_back(e);
    scan.converged.push_back(conv);
  }
  return scan;
}

}  // namespace potlayer
