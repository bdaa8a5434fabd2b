#include "potlayer/modulus.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "potlayer/errors.hpp"
#include "potlayer/rules.hpp"

namespace potlayer {

Modulus Modulus::zero() { return Modulus{}; }

Modulus Modulus::power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("power modulus needs alpha > 0");
  Modulus m;
  m.family_ = Family::power;
  m.param_ = alpha;
  return m;
}

Modulus Modulus::inverse_log() {
  Modulus m;
  m.family_ = Family::inverse_log;
  return m;
}

Modulus Modulus::log_power(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("log_power modulus needs beta > 0");
  Modulus m;
  m.family_ = Family::log_power;
  m.param_ = beta;
  return m;
}

Modulus Modulus::table(std::vector<std::pair<double, double>> samples) {
  if (samples.empty()) throw ArgumentError("table modulus needs at least one sample");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [r, w] = samples[i];
    if (!(r >= 0.0) || !(w >= 0.0) || !std::isfinite(r) || !std::isfinite(w))
      throw ArgumentError("table modulus samples must be finite and nonnegative");
    if (i > 0) {
      if (!(r > samples[i - 1].first)) throw ArgumentError("table modulus radii must be strictly increasing");
      if (w < samples[i - 1].second) throw ArgumentError("table modulus values must be nondecreasing");
    }
  }
  Modulus m;
  m.family_ = Family::table;
  m.samples_ = std::move(samples);
  return m;
}

Modulus Modulus::max_of(const Modulus& a, const Modulus& b) {
  Modulus m;
  m.family_ = Family::max_of;
  m.left_ = std::make_shared<const Modulus>(a);
  m.right_ = std::make_shared<const Modulus>(b);
  return m;
}

double Modulus::operator()(double r) const {
  if (!(r > 0.0) || r > 1.0) {
    std::ostringstream os;
    os << "modulus evaluated at r = " << r << " outside (0, 1]";
    throw DomainError(os.str());
  }
  return value(r);
}

double Modulus::value(double r) const {
  r = std::min(r, 1.0);
  switch (family_) {
    case Family::zero:
      return 0.0;
    case Family::power:
      return r <= 0.0 ? 0.0 : std::pow(r, param_);
    case Family::inverse_log:
      if (r <= 0.0) return 0.0;
      return r <= std::exp(-1.0) ? 1.0 / std::abs(std::log(r)) : 1.0;
    case Family::log_power:
      if (r <= 0.0) return 0.0;
      return r <= std::exp(-1.0) ? std::pow(std::abs(std::log(r)), -param_) : 1.0;
    case Family::table: {
      const auto& s = samples_;
      if (r <= s.front().first) return s.front().first > 0.0 ? s.front().second * r / s.front().first : s.front().second;
      if (r >= s.back().first) return s.back().second;
      auto hi = std::upper_bound(s.begin(), s.end(), r, [](double x, const auto& p) { return x < p.first; });
      auto lo = hi - 1;
      const double t = (r - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
    case Family::max_of:
      return std::max(left_->value(r), right_->value(r));
  }
  return 0.0;
}

double Modulus::power_exponent() const {
  switch (family_) {
    case Family::zero: return std::numeric_limits<double>::infinity();
    case Family::power: return param_;
    case Family::max_of: return std::min(left_->power_exponent(), right_->power_exponent());
    default: return 0.0;
  }
}

std::string Modulus::name() const {
  std::ostringstream os;
  switch (family_) {
    case Family::zero: os << "zero"; break;
    case Family::power: os << "power(" << param_ << ")"; break;
    case Family::inverse_log: os << "inverse_log"; break;
    case Family::log_power: os << "log_power(" << param_ << ")"; break;
    case Family::table: os << "table[" << samples_.size() << "]"; break;
    case Family::max_of: os << "max(" << left_->name() << ", " << right_->name() << ")"; break;
  }
  return os.str();
}

std::string to_string(DiniVerdict v) {
  switch (v) {
    case DiniVerdict::dini: return "dini";
    case DiniVerdict::divergent: return "divergent";
    case DiniVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// w(e^-z), evaluated in z so that the log families stay exact for huge z.
double value_at_log(const Modulus& m, double z) {
  switch (m.family()) {
    case Modulus::Family::zero: return 0.0;
    case Modulus::Family::power: return std::exp(-m.parameter() * z);
    case Modulus::Family::inverse_log: return z >= 1.0 ? 1.0 / z : 1.0;
    case Modulus::Family::log_power: return z >= 1.0 ? std::pow(z, -m.parameter()) : 1.0;
    default: return m.value(std::exp(-z));
  }
}

double z_integral(const Modulus& m, double z0, double z1, double tol, bool log_weight) {
  if (z1 <= z0) return 0.0;
  std::vector<double> breaks{z0};
  if (z0 < 1.0 && z1 > 1.0) breaks.push_back(1.0);
  // Unit-length panels in z keep every decade of r resolved from the start.
  for (double z = std::floor(z0) + 1.0; z < z1; z += 1.0)
    if (z > z0 && z != 1.0) breaks.push_back(z);
  breaks.push_back(z1);
  QuadratureSpec spec;
  spec.target_tol = tol;
  spec.max_depth = 30;
  auto r = adaptive_1d([&](double z) { return (log_weight ? z : 1.0) * value_at_log(m, z); }, breaks, spec);
  return r.value;
}

void check_range(double lo, double hi) {
  if (!(lo > 0.0) || !(hi <= 1.0) || !(lo <= hi)) throw DomainError("integration range must satisfy 0 < lo <= hi <= 1");
}

struct DecayFit {
  bool stabilized = false;
  double exponent = 0.0;
  double tail = 0.0;
};

DecayFit fit_decay(const std::vector<double>& partials, const std::vector<double>& z, double tol) {
  DecayFit fit;
  const std::size_t n = partials.size();
  if (n < 2) return fit;
  const double last = partials[n - 1] - partials[n - 2];
  if (last <= tol) {
    fit.stabilized = true;
    fit.exponent = std::numeric_limits<double>::infinity();
    return fit;
  }
  if (n < 3) return fit;
  const double prev = partials[n - 2] - partials[n - 3];
  const double zm_last = 0.5 * (z[n - 1] + z[n - 2]);
  const double zm_prev = 0.5 * (z[n - 2] + z[n - 3]);
  if (prev <= 0.0) return fit;
  // Normalise by the panel widths so uneven ladders still compare densities.
  const double d_last = last / (z[n - 1] - z[n - 2]);
  const double d_prev = prev / (z[n - 2] - z[n - 3]);
  fit.exponent = std::log(d_prev / d_last) / std::log(zm_last / zm_prev);
  if (fit.exponent > 1.0) {
    const double c = d_last * std::pow(zm_last, fit.exponent);
    fit.tail = c * std::pow(z[n - 1], 1.0 - fit.exponent) / (fit.exponent - 1.0);
  }
  // Power moduli give geometric increments per panel instead. Keep whichever
  // model better predicts the last density from the two before it.
  if (n >= 4 && d_last < d_prev) {
    const double prev2 = partials[n - 3] - partials[n - 4];
    const double d_prev2 = prev2 / (z[n - 3] - z[n - 4]);
    const double zm_prev2 = 0.5 * (z[n - 3] + z[n - 4]);
    if (d_prev2 > d_prev) {
      const double lam = std::log(d_prev2 / d_prev) / (zm_prev - zm_prev2);
      const double geo_pred = d_prev * std::exp(-lam * (zm_last - zm_prev));
      const double p = std::log(d_prev2 / d_prev) / std::log(zm_prev / zm_prev2);
      const double pow_pred = d_prev * std::pow(zm_last / zm_prev, -p);
      if (std::abs(geo_pred - d_last) < std::abs(pow_pred - d_last)) {
        const double lam_last = std::log(d_prev / d_last) / (zm_last - zm_prev);
        const double w = z[n - 1] - z[n - 2];
        // sum over equal panels of last * q^k, q = exp(-lam w)
        const double q = std::exp(-lam_last * w);
        fit.tail = last * q / (1.0 - q);
      }
    }
  }
  return fit;
}

DiniVerdict decide(const DecayFit& fit, const DiniOptions& opts) {
  if (fit.stabilized || fit.exponent >= opts.summable_exponent) return DiniVerdict::dini;
  if (fit.exponent <= opts.divergent_exponent) return DiniVerdict::divergent;
  return DiniVerdict::inconclusive;
}

}  // namespace

double log_measure_integral(const Modulus& m, double lo, double hi, double tol) {
  check_range(lo, hi);
  return z_integral(m, -std::log(hi), -std::log(lo), tol, false);
}

double log_weighted_integral(const Modulus& m, double lo, double hi, double tol) {
  check_range(lo, hi);
  return z_integral(m, -std::log(hi), -std::log(lo), tol, true);
}

ImproperIntegral dini_integral(const Modulus& m, double upper, double tol) {
  if (!(upper > 0.0) || upper > 1.0) throw DomainError("dini_integral upper limit must lie in (0, 1]");
  const double z0 = -std::log(upper);
  ImproperIntegral out;
  // Finite head on [z0, z0 + 1] keeps the kink of the log families at z = 1
  // away from the double-exponential tail rule.
  const double head = z_integral(m, z0, z0 + 1.0, tol * 1e-2, false);
  try {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    const double tail = integrator.integrate([&](double z) { return value_at_log(m, z); }, z0 + 1.0,
                                             std::numeric_limits<double>::infinity(), tol, &err, &l1);
    out.value = head + tail;
    out.est_error = err * std::max(1.0, std::abs(tail));
    out.converged = std::isfinite(out.value) && err <= tol;
  } catch (const std::exception&) {
    out.value = std::numeric_limits<double>::infinity();
    out.est_error = std::numeric_limits<double>::infinity();
    out.converged = false;
  }
  return out;
}

std::vector<double> default_delta_ladder() {
  std::vector<double> ladder;
  for (int e = 2; e <= 12; ++e) ladder.push_back(std::pow(10.0, -e));
  return ladder;
}

DiniClassification classify_dini(const Modulus& m, const std::vector<double>& delta_ladder, const DiniOptions& opts) {
  if (delta_ladder.size() < 3) throw ArgumentError("delta ladder needs at least three entries");
  for (std::size_t i = 0; i < delta_ladder.size(); ++i) {
    const double d = delta_ladder[i];
    if (!(d > 0.0) || !(d < 1.0)) throw ArgumentError("delta ladder entries must lie in (0, 1)");
    if (i > 0 && !(d < delta_ladder[i - 1])) throw ArgumentError("delta ladder must be strictly decreasing");
  }

  DiniClassification out;
  std::vector<double> partial, log_partial, z;
  double acc = 0.0, log_acc = 0.0, z_prev = 0.0;
  for (double d : delta_ladder) {
    const double zd = -std::log(d);
    acc += z_integral(m, z_prev, zd, 1e-13, false);
    log_acc += z_integral(m, z_prev, zd, 1e-13, true);
    z_prev = zd;
    partial.push_back(acc);
    log_partial.push_back(log_acc);
    z.push_back(zd);
    out.partial_integrals.push_back({d, acc, log_acc});
  }

  const DecayFit fit = fit_decay(partial, z, opts.stabilization_tol);
  const DecayFit log_fit = fit_decay(log_partial, z, opts.stabilization_tol);
  out.verdict = decide(fit, opts);
  out.log_dini = decide(log_fit, opts);
  out.decay_exponent = fit.exponent;
  out.log_decay_exponent = log_fit.exponent;
  out.limit_estimate = partial.back() + (out.verdict == DiniVerdict::dini ? fit.tail : 0.0);

  const double smallest = delta_ladder.back();
  for (double rho : {0.3, 0.5, 0.7}) {
    const int K = std::max(1, static_cast<int>(std::ceil(std::log(smallest) / std::log(rho))) - 1);
    double s = 0.0;
    for (int j = 0; j <= K; ++j) s += m.value(std::pow(rho, j));
    out.series_sums.push_back({rho, K, s});
  }
  return out;
}

SeriesCheck series_check(const Modulus& m, double rho, int K, double tol) {
  if (!(rho > 0.0) || !(rho < 1.0)) throw ArgumentError("series_check needs rho in (0, 1)");
  if (K < 1) throw ArgumentError("series_check needs K >= 1");
  SeriesCheck out;
  double tail_sum = 0.0;  // j >= 1
  for (int j = 0; j <= K; ++j) {
    const double w = value_at_log(m, -j * std::log(rho));
    out.series += w;
    if (j >= 1) tail_sum += w;
  }
  out.integral = z_integral(m, 0.0, -(K + 1) * std::log(rho), 1e-13, false);
  out.lower_ok = (1.0 - rho) * tail_sum <= out.integral + tol;
  out.upper_ok = out.integral <= std::log(1.0 / rho) * out.series + tol;
  return out;
}

}  // namespace potlayer
