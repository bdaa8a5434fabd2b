#pragma once

// Blow-up scans for the two non-Lipschitz examples and the key-lemma ratio
// comparing a curved problem with its flat tangent-plane model.

#include <cstdint>
#include <vector>

#include "potlayer/geometry.hpp"
#include "potlayer/potential.hpp"
#include "potlayer/rules.hpp"

namespace potlayer {

/// Root of psi(t) = t / |log t| = eps on (0, 1/4), to 1e-12.
double r_epsilon(double eps);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y ~ slope * x + intercept.
LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

struct BlowupScan {
  std::vector<int> j;
  std::vector<double> epsilons;           // 2^-j
  std::vector<double> derivative_values;  // the scanned derivative of u at (0, eps)
  std::vector<double> est_errors;
  std::vector<double> r_epsilons;         // graph scan only
  std::vector<double> abscissae;          // log|log r_eps| or log|log eps|
  std::vector<bool> converged;
  /// Fit of -derivative against the abscissa.
  LineFit fit;
};

struct ScanOptions {
  QuadratureSpec spec{};
  int threads = 1;
  /// Run the regular control instead: flat interface (graph scan) or
  /// constant density (density scan).
  bool control = false;
};

/// d u / d x_n at (0, eps_j), eps_j = 2^-j, for the C^1 graph
/// x_n = |x'| / |log |x'|| clipped to B_{1/4}, g = 1, ball of radius 1.
/// The control uses the flat interface over the whole unit ball.
BlowupScan blowup_graph_scan(const std::vector<int>& j_range, const ScanOptions& opts = {});

/// d u / d x_1 at (0, eps_j) for the flat interface clipped to B_{1/2} with
/// the continuous density eta(x_1). The control uses g = 1.
BlowupScan blowup_density_scan(const std::vector<int>& j_range, const ScanOptions& opts = {});

/// The problems scanned above, exposed for direct evaluation.
LayerProblem blowup_graph_problem(bool control, const QuadratureSpec& spec);
LayerProblem blowup_density_problem(bool control, const QuadratureSpec& spec);

struct KeyLemmaOptions {
  QuadratureSpec spec{};
  int sample_count = 2000;
  std::uint64_t seed = 42;
  int threads = 1;
  /// Quadrature tolerance is spec.target_tol * r, tracking the size of u in B_r.
  bool scale_tol_with_radius = true;
};

struct KeyLemmaScan {
  double rho = 0.5;
  std::vector<double> radii;
  std::vector<double> sup_w;     // sup of |u - v| over the samples of B_{rho r}
  std::vector<double> omega;     // omega(r) = max(omega_psi, omega_g)(r)
  std::vector<double> ratios;    // sup_w / (r omega(r))
  std::vector<double> est_errors;
  std::vector<bool> converged;
};

/// For each r: u solves the problem on B_r with interface gamma and density
/// g, v the problem on B_r with the flat interface and constant density g(0).
/// Ratios are lower bounds of the true sup over B_{rho r}.
KeyLemmaScan key_lemma_ratio(const InterfaceGraph& gamma, const SurfaceDensity& g, double rho,
                             const std::vector<double>& radii, const KeyLemmaOptions& opts = {});

}  // namespace potlayer
