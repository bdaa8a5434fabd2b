#include "potlayer/cli.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "potlayer/campanato.hpp"
#include "potlayer/errors.hpp"
#include "potlayer/experiments.hpp"
#include "potlayer/parallel.hpp"

namespace potlayer {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  Table& row() {
    rows_.emplace_back();
    return *this;
  }
  Table& num(double x) {
    rows_.back().push_back(format_number(x));
    return *this;
  }
  Table& integer(long long x) {
    rows_.back().push_back(std::to_string(x));
    return *this;
  }
  Table& text(const std::string& s) {
    rows_.back().push_back(s);
    return *this;
  }
  Table& flag(bool b) { return text(b ? "1" : "0"); }

  std::string render() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::vector<double> number_array(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

Vec3 point_of(const Json& j, const std::string& path, int n) {
  const auto v = number_array(j, path);
  if (static_cast<int>(v.size()) != n) throw ConfigError(path, "expected " + std::to_string(n) + " coordinates");
  Vec3 x{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) x[i] = v[i];
  return x;
}

QuadratureSpec base_spec(const RunConfig& run, const Json& cfg) {
  QuadratureSpec s = cfg.contains("quadrature") ? parse_quadrature(cfg.at("quadrature"), "quadrature") : QuadratureSpec{};
  if (run.tol) {
    s.target_tol = *run.tol;
    if (!(s.target_tol > 0.0)) throw ConfigError("tol", "must be positive");
  }
  return s;
}

Json spec_json(const QuadratureSpec& s) {
  return Json{{"target_tol", s.target_tol},
              {"max_depth", s.max_depth},
              {"base_order", s.base_order},
              {"singular_split_radius", s.singular_split_radius},
              {"max_panels", s.max_panels}};
}

// Problem descriptor with the effective quadrature spec folded in.
Json resolved_problem(const Json& pj, const LayerProblem& p) {
  Json r = pj;
  r["quadrature"] = spec_json(p.spec);
  r["n"] = p.ctx.n;
  r["radius"] = p.ctx.radius;
  return r;
}

LayerProblem problem_from(const RunConfig& run, const Json& cfg, const QuadratureSpec& base) {
  if (!cfg.contains("problem")) throw ConfigError("problem", "missing");
  LayerProblem p = parse_problem(cfg.at("problem"), "problem", base);
  if (run.tol) p.spec.target_tol = *run.tol;
  return p;
}

std::uint64_t seed_of(const Json& cfg) {
  if (!cfg.contains("seed")) return 42;
  if (!cfg.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
  return cfg.at("seed").get<std::uint64_t>();
}

Json envelope(const RunConfig& run, Json resolved) {
  return Json{{"tool", "potlayer"}, {"version", kToolVersion}, {"command", run.command}, {"config", std::move(resolved)}};
}

RunOutput modulus_classify(const RunConfig& run) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"modulus", "deltas"});
  if (!cfg.contains("modulus")) throw ConfigError("modulus", "missing");
  const Modulus m = parse_modulus(cfg.at("modulus"), "modulus");
  const std::vector<double> ladder = cfg.contains("deltas") ? number_array(cfg.at("deltas"), "deltas")
                                                            : default_delta_ladder();
  DiniClassification c;
  try {
    c = classify_dini(m, ladder);
  } catch (const ArgumentError& e) {
    throw ConfigError("deltas", e.what());
  }
  Table t({"delta", "partial_integral", "log_dini_partial", "verdict", "log_dini_verdict"});
  for (const auto& pi : c.partial_integrals)
    t.row().num(pi.delta).num(pi.integral).num(pi.log_integral).text(to_string(c.verdict)).text(to_string(c.log_dini));
  Json resolved{{"modulus", cfg.at("modulus")}, {"deltas", ladder}};
  RunOutput out;
  out.csv = t.render();
  out.sidecar = envelope(run, resolved);
  Json series = Json::array();
  for (const auto& s : c.series_sums) series.push_back({{"rho", s.rho}, {"K", s.terms}, {"sum", s.sum}});
  out.sidecar["summary"] = {{"modulus", m.name()},
                            {"verdict", to_string(c.verdict)},
                            {"log_dini", to_string(c.log_dini)},
                            {"decay_exponent", c.decay_exponent},
                            {"limit_estimate", c.limit_estimate},
                            {"series_sums", series}};
  return out;
}

RunOutput solve_eval(const RunConfig& run) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"problem", "points", "quadrature"});
  const LayerProblem p = problem_from(run, cfg, base_spec(run, cfg));
  if (!cfg.contains("points") || !cfg.at("points").is_array() || cfg.at("points").empty())
    throw ConfigError("points", "expected a nonempty array of points");
  const int n = p.ctx.n;
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < cfg.at("points").size(); ++i) {
    const std::string path = "points[" + std::to_string(i) + "]";
    const Vec3 x = point_of(cfg.at("points")[i], path, n);
    if (norm(x) > p.ctx.radius) throw ConfigError(path, "lies outside the ball");
    pts.push_back(x);
  }
  std::vector<PointValue> vals(pts.size());
  parallel_for(pts.size(), run.threads, [&](std::size_t i) { vals[i] = evaluate_solution(p, pts[i]); });

  std::vector<std::string> header{"x1", "x2"};
  if (n == 3) header.push_back("x3");
  for (const char* h : {"u", "est_error", "converged"}) header.push_back(h);
  Table t(header);
  bool ok = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.row();
    for (int k = 0; k < n; ++k) t.num(pts[i][k]);
    t.num(vals[i].value).num(vals[i].est_error).flag(vals[i].converged);
    ok = ok && vals[i].converged;
  }
  RunOutput out;
  out.csv = t.render();
  out.sidecar = envelope(run, {{"problem", resolved_problem(cfg.at("problem"), p)}, {"points", cfg.at("points")}});
  out.exit_code = ok ? 0 : 3;
  return out;
}

RunOutput solve_jump(const RunConfig& run) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"problem", "x0", "h_ladder", "quadrature"});
  const LayerProblem p = problem_from(run, cfg, base_spec(run, cfg));
  const int n = p.ctx.n;
  const Vec3 x0 = cfg.contains("x0") ? point_of(cfg.at("x0"), "x0", n) : Vec3{0.0, 0.0, 0.0};
  const std::vector<double> ladder = cfg.contains("h_ladder") ? number_array(cfg.at("h_ladder"), "h_ladder")
                                                              : default_h_ladder();
  JumpResult r;
  try {
    r = transmission_jump(p, x0, ladder);
  } catch (const ArgumentError& e) {
    throw ConfigError("x0", e.what());
  }
  Table t({"row", "h", "d_plus", "d_minus", "jump", "est_error", "converged"});
  for (const auto& s : r.per_h)
    t.row().text("h").num(s.h).num(s.d_plus).num(s.d_minus).num(s.jump).num(s.est_error).flag(r.converged);
  double err = 0.0;
  for (const auto& s : r.per_h) err = std::max(err, s.est_error);
  t.row().text("extrapolated").num(0.0).text("").text("").num(r.jump).num(err).flag(r.converged);
  RunOutput out;
  out.csv = t.render();
  Json x0j = Json::array();
  for (int k = 0; k < n; ++k) x0j.push_back(x0[k]);
  out.sidecar = envelope(run, {{"problem", resolved_problem(cfg.at("problem"), p)}, {"x0", x0j}, {"h_ladder", ladder}});
  out.sidecar["summary"] = {{"jump", r.jump}, {"order", r.order}};
  out.exit_code = r.converged ? 0 : 3;
  return out;
}

RunOutput oracle_radial(const RunConfig& run) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"s", "r", "g0", "abs_x", "compare", "quadrature"});
  const double s = get_number_or(cfg, "s", "", 0.5);
  const double r = get_number_or(cfg, "r", "", 1.0);
  const double g0 = get_number_or(cfg, "g0", "", 1.0);
  if (!(s > 0.0) || !(s < r)) throw ConfigError("s", "needs 0 < s < r");
  const std::vector<double> xs = cfg.contains("abs_x") ? number_array(cfg.at("abs_x"), "abs_x")
                                                       : std::vector<double>{0.1, 0.25, 0.6, 0.75, 0.9};
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] >= 0.0) || xs[i] > r) throw ConfigError("abs_x[" + std::to_string(i) + "]", "must lie in [0, r]");
  const bool compare = get_bool_or(cfg, "compare", "", true);
  const QuadratureSpec spec = base_spec(run, cfg);
  const LayerProblem p(BallContext{3, r}, SphereInterface{s}, SurfaceDensity::constant(g0), spec);

  std::vector<PointValue> vals(xs.size());
  if (compare)
    parallel_for(xs.size(), run.threads, [&](std::size_t i) {
      // Off-axis direction so the evaluation does not sit on a grid symmetry line.
      const double a = xs[i];
      vals[i] = evaluate_solution(p, {0.36 * a, 0.48 * a, 0.8 * a});
    });
  Table t({"abs_x", "oracle", "numeric", "abs_error", "est_error", "converged"});
  bool ok = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double o = radial_oracle(xs[i], s, r, g0);
    t.row().num(xs[i]).num(o);
    if (compare) {
      t.num(vals[i].value).num(std::abs(vals[i].value - o)).num(vals[i].est_error).flag(vals[i].converged);
      ok = ok && vals[i].converged;
    } else {
      t.text("").text("").num(0.0).flag(true);
    }
  }
  RunOutput out;
  out.csv = t.render();
  out.sidecar = envelope(run, {{"s", s}, {"r", r}, {"g0", g0}, {"abs_x", xs}, {"compare", compare},
                               {"quadrature", spec_json(spec)}});
  out.exit_code = ok ? 0 : 3;
  return out;
}

RunOutput blowup(const RunConfig& run, bool graph) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"j_min", "j_max", "control", "quadrature"});
  const int j_min = get_int_or(cfg, "j_min", "", 4);
  const int j_max = get_int_or(cfg, "j_max", "", 12);
  if (j_min < 3) throw ConfigError("j_min", "must be at least 3");
  if (j_max <= j_min || j_max > 40) throw ConfigError("j_max", "must lie in (j_min, 40]");
  ScanOptions o;
  o.spec = base_spec(run, cfg);
  o.threads = run.threads;
  o.control = get_bool_or(cfg, "control", "", false);
  std::vector<int> js;
  for (int j = j_min; j <= j_max; ++j) js.push_back(j);
  const BlowupScan s = graph ? blowup_graph_scan(js, o) : blowup_density_scan(js, o);

  std::vector<std::string> header{"j", "epsilon"};
  if (graph) header.push_back("r_epsilon");
  for (const char* h : {"abscissa", graph ? "du_dxn" : "du_dx1", "est_error", "converged"}) header.push_back(h);
  Table t(header);
  bool ok = true, decreasing = true;
  for (std::size_t i = 0; i < js.size(); ++i) {
    t.row().integer(js[i]).num(s.epsilons[i]);
    if (graph) t.num(s.r_epsilons[i]);
    t.num(s.abscissae[i]).num(s.derivative_values[i]).num(s.est_errors[i]).flag(s.converged[i]);
    ok = ok && s.converged[i];
    if (i > 0) decreasing = decreasing && s.derivative_values[i] < s.derivative_values[i - 1];
  }
  RunOutput out;
  out.csv = t.render();
  out.sidecar = envelope(run, {{"j_min", j_min}, {"j_max", j_max}, {"control", o.control},
                               {"quadrature", spec_json(o.spec)}});
  out.sidecar["summary"] = {{"slope", s.fit.slope}, {"intercept", s.fit.intercept}, {"strictly_decreasing", decreasing}};
  out.exit_code = ok ? 0 : 3;
  return out;
}

RunOutput key_lemma(const RunConfig& run) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"interface", "density", "rho", "radii", "samples", "seed", "scale_tol", "quadrature"});
  if (!cfg.contains("interface")) throw ConfigError("interface", "missing");
  if (!cfg.contains("density")) throw ConfigError("density", "missing");
  const InterfaceGraph gamma = parse_interface(cfg.at("interface"), "interface");
  const SurfaceDensity g = parse_density(cfg.at("density"), "density");
  const double rho = get_number_or(cfg, "rho", "", 0.5);
  if (!(rho > 0.0) || rho > 0.5) throw ConfigError("rho", "must lie in (0, 1/2]");
  std::vector<double> radii;
  if (cfg.contains("radii")) {
    radii = number_array(cfg.at("radii"), "radii");
  } else {
    for (int k = 1; k <= 6; ++k) radii.push_back(std::ldexp(1.0, -k));
  }
  KeyLemmaOptions o;
  o.spec = base_spec(run, cfg);
  o.sample_count = get_int_or(cfg, "samples", "", 2000);
  o.seed = seed_of(cfg);
  o.threads = run.threads;
  o.scale_tol_with_radius = get_bool_or(cfg, "scale_tol", "", true);
  KeyLemmaScan s;
  try {
    s = key_lemma_ratio(gamma, g, rho, radii, o);
  } catch (const ArgumentError& e) {
    throw ConfigError("radii", e.what());
  }
  Table t({"r", "omega_r", "sup_w", "ratio", "est_error", "converged"});
  bool ok = true;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    t.row().num(radii[i]).num(s.omega[i]).num(s.sup_w[i]).num(s.ratios[i]).num(s.est_errors[i]).flag(s.converged[i]);
    ok = ok && s.converged[i];
  }
  RunOutput out;
  out.csv = t.render();
  out.sidecar = envelope(run, {{"interface", cfg.at("interface")}, {"density", cfg.at("density")}, {"rho", rho},
                               {"radii", radii}, {"samples", o.sample_count}, {"seed", o.seed},
                               {"scale_tol", o.scale_tol_with_radius}, {"quadrature", spec_json(o.spec)}});
  out.exit_code = ok ? 0 : 3;
  return out;
}

RunOutput iterate_cmd(const RunConfig& run) {
  const Json& cfg = run.config;
  check_keys(cfg, "", {"problem", "rho", "steps", "n_theta", "n_phi", "sup_samples", "seed", "quadrature"});
  const LayerProblem p = problem_from(run, cfg, base_spec(run, cfg));
  if (!p.is_graph()) throw ConfigError("problem.interface", "iteration needs a graph interface");
  const double rho = get_number_or(cfg, "rho", "", 0.5);
  if (!(rho > 0.0) || rho > 0.5) throw ConfigError("rho", "must lie in (0, 1/2]");
  const int steps = get_int_or(cfg, "steps", "", 6);
  if (steps < 0 || steps > 30) throw ConfigError("steps", "must lie in [0, 30]");
  IterationOptions o;
  o.n_theta = get_int_or(cfg, "n_theta", "", o.n_theta);
  o.n_phi = get_int_or(cfg, "n_phi", "", o.n_phi);
  o.sup_samples = get_int_or(cfg, "sup_samples", "", o.sup_samples);
  if (o.n_theta < 1) throw ConfigError("n_theta", "must be positive");
  if (o.n_phi < 1) throw ConfigError("n_phi", "must be positive");
  if (o.sup_samples < 1) throw ConfigError("sup_samples", "must be positive");
  o.seed = seed_of(cfg);
  o.threads = run.threads;
  const auto states = iterate(p, rho, steps, o);

  const int n = p.ctx.n;
  std::vector<std::string> header{"k"};
  for (const char* side : {"a_plus", "a_minus"})
    for (int i = 1; i <= n; ++i) header.push_back(std::string(side) + "_" + std::to_string(i));
  for (const char* h : {"b", "d_k", "sup_error_plus", "sup_error_minus", "increment", "est_error", "converged"})
    header.push_back(h);
  Table t(header);
  bool ok = static_cast<int>(states.size()) == steps + 1;
  for (const auto& s : states) {
    t.row().integer(s.k);
    for (int i = 0; i < n; ++i) t.num(s.l_plus.a[i]);
    for (int i = 0; i < n; ++i) t.num(s.l_minus.a[i]);
    t.num(s.l_plus.b).num(s.d_k).num(s.sup_error_plus).num(s.sup_error_minus).num(s.increment).num(s.est_error);
    t.flag(s.converged);
    ok = ok && s.converged;
  }
  RunOutput out;
  out.csv = t.render();
  out.sidecar = envelope(run, {{"problem", resolved_problem(cfg.at("problem"), p)}, {"rho", rho}, {"steps", steps},
                               {"n_theta", o.n_theta}, {"n_phi", o.n_phi}, {"sup_samples", o.sup_samples},
                               {"seed", o.seed}});
  if (states.size() >= 2) {
    const CauchyCheck c = cauchy_check(states);
    out.sidecar["summary"] = {{"c_fit", c.c_fit}, {"cauchy_max_ratio", c.max_ratio}};
  }
  out.exit_code = ok ? 0 : 3;
  return out;
}

}  // namespace

RunOutput dispatch(const RunConfig& run) {
  if (run.threads < 1) throw ConfigError("threads", "must be at least 1");
  require_object(run.config, "");
  RunOutput out;
  if (run.command == "modulus classify") out = modulus_classify(run);
  else if (run.command == "solve eval") out = solve_eval(run);
  else if (run.command == "solve jump") out = solve_jump(run);
  else if (run.command == "oracle radial") out = oracle_radial(run);
  else if (run.command == "experiment blowup-graph") out = blowup(run, true);
  else if (run.command == "experiment blowup-density") out = blowup(run, false);
  else if (run.command == "experiment key-lemma") out = key_lemma(run);
  else if (run.command == "experiment iterate") out = iterate_cmd(run);
  else throw ConfigError("command", "unknown command '" + run.command + "'");
  if (out.exit_code == 3) out.message = "quadrature did not reach the requested tolerance on some rows";
  return out;
}

}  // namespace potlayer
