#pragma once

// Geometric-scale iteration producing one-sided affine approximations
// l_k^+ / l_k^- of the solution at the origin, and the bookkeeping sequences
// d_k and sigma(r) that control its convergence.

#include <cstdint>
#include <vector>

#include "potlayer/modulus.hpp"
#include "potlayer/potential.hpp"

namespace potlayer {

/// d_0, ..., d_K with d_{-1} = d_0 = 1 and d_k = max(w(rho^k), rho^{1/2} d_{k-1}).
std::vector<double> dk_sequence(const Modulus& w, double rho, int K);

struct SigmaResult {
  int k = 0;                 // rho^{k+1} <= r < rho^k
  double partial = 0.0;      // d_{k+1} + sum_{j=k}^{K_tail} d_j
  double tail_bound = 0.0;   // upper bound of sum_{j > K_tail} d_j
  double value = 0.0;        // partial + tail_bound, an upper bound of sigma(r)
  double sum_d = 0.0;        // sum_{j=1}^{K_tail} d_j
  double c0 = 0.0;           // sum_{j=1}^{K_tail} w(rho^j)
  double sum_bound = 0.0;    // (c0 + rho^{1/2}) / (1 - rho^{1/2})
  bool bound_ok = false;     // sum_d <= sum_bound
};

/// sigma(r) = d_{k+1} + sum_{j >= k} d_j. The tail beyond K_tail is bounded
/// through the Dini integral of w; DivergentModulusError if w is not Dini.
SigmaResult sigma(const Modulus& w, double rho, double r, int K_tail);

struct IterationState {
  int k = 0;
  double rho = 0.5;
  LinearPolynomial l_plus;
  LinearPolynomial l_minus;
  double d_k = 1.0;
  /// sup |u - l_k^{+-}| over samples of Omega^{+-} in B_{rho^k}.
  double sup_error_plus = 0.0;
  double sup_error_minus = 0.0;
  /// rho^{k-1} |a_k - a_{k-1}| + |b_k - b_{k-1}| (0 for k = 0).
  double increment = 0.0;
  /// Accumulated quadrature error of the boundary samples of this step.
  double est_error = 0.0;
  bool converged = true;
};

struct IterationOptions {
  int n_theta = 32;
  int n_phi = 64;
  /// Samples per side used for the sup errors.
  int sup_samples = 64;
  std::uint64_t seed = 42;
  int threads = 1;
};

/// Runs K_steps updates starting from a_0^{+-} = +-g(0)/2 e_n, b_0 = 0;
/// returns the states k = 0..K_steps. On a quadrature failure the states
/// computed so far are returned with converged = false on the last one.
std::vector<IterationState> iterate(const LayerProblem& p, double rho, int K_steps, const IterationOptions& opts = {});

struct CauchyCheck {
  double c_fit = 0.0;      // increment_1 / (d_0 rho^0)
  double max_ratio = 0.0;  // max_k increment_k / (c_fit d_{k-1} rho^{k-1})
  bool ok = false;         // max_ratio <= 3
};

CauchyCheck cauchy_check(const std::vector<IterationState>& states);

/// A bump test function phi(x) = ((s^2 - |x - c|^2) / s^2)^4 on B_s(c).
struct BumpTest {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 1.0;
};

/// Deterministic bumps with support in B_r that meet the plane {x_n = 0}.
std::vector<BumpTest> random_bumps(int n, double r, int count, std::uint64_t seed);

/// \int p Delta phi dx - g0 \int_{x_n = 0} phi dH^{n-1}, where p = l_plus on
/// {x_n >= 0} and l_minus below. Vanishes when a^+ - a^- = g0 e_n and the
/// constant terms agree. Computed by Gauss rules that are exact for these
/// polynomials.
double distributional_residual(int n, const LinearPolynomial& l_plus, const LinearPolynomial& l_minus, double g0,
                               const BumpTest& phi);

}  // namespace potlayer
