#pragma once

// Moduli of continuity and the numerical Dini / Log-Dini tests.

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace potlayer {

/// A nondecreasing modulus of continuity on (0, 1].
///
/// Families:
///  - zero:           w(r) = 0
///  - power(a):       w(r) = r^a
///  - inverse_log:    w(r) = 1/|log r| on (0, 1/e], 1 above
///  - log_power(b):   w(r) = |log r|^-b on (0, 1/e], 1 above
///  - table(samples): monotone piecewise-linear interpolation of (r_i, w_i);
///                    linear to the origin below r_0, constant above r_last
///  - max_of(a, b):   pointwise maximum
class Modulus {
 public:
  enum class Family { zero, power, inverse_log, log_power, table, max_of };

  static Modulus zero();
  static Modulus power(double alpha);
  static Modulus inverse_log();
  static Modulus log_power(double beta);
  static Modulus table(std::vector<std::pair<double, double>> samples);
  static Modulus max_of(const Modulus& a, const Modulus& b);

  /// w(r) for 0 < r <= 1; throws DomainError otherwise.
  double operator()(double r) const;
  /// Same formula without the range check; r > 1 is clamped to 1.
  double value(double r) const;

  Family family() const { return family_; }
  std::string name() const;
  double parameter() const { return param_; }
  /// Largest p with w(r) = O(r^p) as r -> 0 for the closed-form families:
  /// +inf for zero, alpha for power, the minimum over max_of components, and
  /// 0 for the logarithmic and table families.
  double power_exponent() const;

 private:
  Modulus() = default;

  Family family_ = Family::zero;
  double param_ = 0.0;
  std::vector<std::pair<double, double>> samples_;
  std::shared_ptr<const Modulus> left_, right_;
};

enum class DiniVerdict { dini, divergent, inconclusive };

std::string to_string(DiniVerdict v);

struct DiniOptions {
  /// Partial integrals whose last per-decade increment is below this are
  /// considered stabilized.
  double stabilization_tol = 1e-6;
  /// Decay exponent p of the increments in z = |log r| (increments ~ z^-p)
  /// at or above which the tail is summable with margin.
  double summable_exponent = 1.5;
  /// At or below this exponent the increments decay no faster than the
  /// harmonic series and the integral is reported divergent.
  double divergent_exponent = 1.05;
};

struct PartialIntegral {
  double delta;
  double integral;      // \int_delta^1 w(r)/r dr
  double log_integral;  // \int_delta^1 |log r| w(r)/r dr
};

struct SeriesSum {
  double rho;
  int terms;   // K
  double sum;  // sum_{j=0}^K w(rho^j)
};

struct DiniClassification {
  DiniVerdict verdict = DiniVerdict::inconclusive;
  /// Separate verdict for the |log r|-weighted integral.
  DiniVerdict log_dini = DiniVerdict::inconclusive;
  std::vector<PartialIntegral> partial_integrals;
  std::vector<SeriesSum> series_sums;
  /// Fitted decay exponents of the last increments (plain and log-weighted).
  double decay_exponent = 0.0;
  double log_decay_exponent = 0.0;
  /// Last partial integral plus the extrapolated tail (meaningful for dini).
  double limit_estimate = 0.0;
};

/// Default ladder delta = 10^-2, ..., 10^-12.
std::vector<double> default_delta_ladder();

/// \int_lo^hi w(r)/r dr, computed in z = -log r.
double log_measure_integral(const Modulus& m, double lo, double hi, double tol = 1e-12);
/// \int_lo^hi |log r| w(r)/r dr.
double log_weighted_integral(const Modulus& m, double lo, double hi, double tol = 1e-12);

struct ImproperIntegral {
  double value = 0.0;
  double est_error = 0.0;
  bool converged = false;
};

/// The improper integral \int_0^upper w(r)/r dr (upper <= 1).
ImproperIntegral dini_integral(const Modulus& m, double upper = 1.0, double tol = 1e-10);

DiniClassification classify_dini(const Modulus& m, const std::vector<double>& delta_ladder,
                                 const DiniOptions& opts = {});

struct SeriesCheck {
  double series = 0.0;    // sum_{j=0}^K w(rho^j)
  double integral = 0.0;  // \int_{rho^{K+1}}^1 w(r)/r dr
  bool lower_ok = false;  // (1-rho) sum_{j=1}^K w(rho^j) <= integral + tol
  bool upper_ok = false;  // integral <= log(1/rho) series + tol
};

SeriesCheck series_check(const Modulus& m, double rho, int K, double tol = 1e-9);

}  // namespace potlayer
