#include "potlayer/rules.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace potlayer {

void QuadratureSpec::validate() const {
  if (!(target_tol > 0.0)) throw ArgumentError("quadrature target_tol must be positive");
  if (max_depth < 1) throw ArgumentError("quadrature max_depth must be at least 1");
  if (base_order < 2 || base_order > 64) throw ArgumentError("quadrature base_order must lie in [2, 64]");
  if (!(singular_split_radius > 0.0)) throw ArgumentError("singular_split_radius must be positive");
  if (max_panels < 1) throw ArgumentError("max_panels must be positive");
}

namespace {

GaussRule build_rule(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return g;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw ArgumentError("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(order));
  return *slot;
}

std::vector<double> geometric_breaks(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw ArgumentError("geometric_breaks needs 0 < lo < hi");
  std::vector<double> b{0.0};
  for (double t = lo; t < hi; t *= 2.0) b.push_back(t);
  b.push_back(hi);
  return b;
}

}  // namespace potlayer
