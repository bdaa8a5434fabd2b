#include "potlayer/config.hpp"

#include <cmath>

#include "potlayer/errors.hpp"

namespace potlayer {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::vector<std::pair<double, double>> parse_pairs(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of [r, value] pairs");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ConfigError(p, "expected a pair of numbers");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

const Json& params_of(const Json& j, const std::string& path) {
  static const Json empty = Json::object();
  if (!j.contains("params")) return empty;
  const Json& p = j.at("params");
  require_object(p, join(path, "params"));
  return p;
}

std::string family_of(const Json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("family")) throw ConfigError(join(path, "family"), "missing");
  if (!j.at("family").is_string()) throw ConfigError(join(path, "family"), "expected a string");
  return j.at("family").get<std::string>();
}

// Library argument errors become config errors on the descriptor.
template <class F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ArgumentError& e) {
    throw ConfigError(path, e.what());
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(join(path, it.key()), "unknown field");
  }
}

double get_number(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing");
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

double get_number_or(const Json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? get_number(obj, key, path) : fallback;
}

int get_int_or(const Json& obj, const std::string& key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<int>();
}

bool get_bool_or(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  return v.get<bool>();
}

Modulus parse_modulus(const Json& j, const std::string& path) {
  const std::string fam = family_of(j, path);
  check_keys(j, path, {"family", "params"});
  const Json& p = params_of(j, path);
  const std::string pp = join(path, "params");
  return wrap(path, [&] {
    if (fam == "zero") return Modulus::zero();
    if (fam == "power") return Modulus::power(get_number(p, "alpha", pp));
    if (fam == "inverse_log") return Modulus::inverse_log();
    if (fam == "log_power") return Modulus::log_power(get_number(p, "beta", pp));
    if (fam == "table") {
      if (!p.contains("samples")) throw ConfigError(join(pp, "samples"), "missing");
      return Modulus::table(parse_pairs(p.at("samples"), join(pp, "samples")));
    }
    if (fam == "max_of") {
      if (!p.contains("a") || !p.contains("b")) throw ConfigError(pp, "max_of needs components a and b");
      return Modulus::max_of(parse_modulus(p.at("a"), join(pp, "a")), parse_modulus(p.at("b"), join(pp, "b")));
    }
    throw ConfigError(join(path, "family"), "unknown modulus family '" + fam + "'");
  });
}

InterfaceGraph parse_interface(const Json& j, const std::string& path, int default_n) {
  const std::string fam = family_of(j, path);
  check_keys(j, path, {"family", "params", "n"});
  const int n = get_int_or(j, "n", path, default_n);
  if (n != 2 && n != 3) throw ConfigError(join(path, "n"), "dimension must be 2 or 3");
  const Json& p = params_of(j, path);
  const std::string pp = join(path, "params");
  return wrap(path, [&] {
    if (fam == "flat") return InterfaceGraph::flat(n);
    if (fam == "holder") return InterfaceGraph::holder(n, get_number(p, "alpha", pp), get_number_or(p, "K", pp, 1.0));
    if (fam == "counterexample_graph") return InterfaceGraph::counterexample(n);
    if (fam == "table") {
      if (!p.contains("slopes")) throw ConfigError(join(pp, "slopes"), "missing");
      return InterfaceGraph::table(n, parse_pairs(p.at("slopes"), join(pp, "slopes")));
    }
    throw ConfigError(join(path, "family"), "unknown interface family '" + fam + "'");
  });
}

SurfaceDensity parse_density(const Json& j, const std::string& path) {
  const std::string fam = family_of(j, path);
  check_keys(j, path, {"family", "params"});
  const Json& p = params_of(j, path);
  const std::string pp = join(path, "params");
  return wrap(path, [&] {
    if (fam == "constant") return SurfaceDensity::constant(get_number_or(p, "c", pp, 1.0));
    if (fam == "holder")
      return SurfaceDensity::holder(get_number(p, "alpha", pp), get_number_or(p, "A", pp, 1.0),
                                    get_number_or(p, "base", pp, 1.0));
    if (fam == "counterexample_eta") return SurfaceDensity::counterexample_eta();
    if (fam == "table") {
      if (!p.contains("samples")) throw ConfigError(join(pp, "samples"), "missing");
      return SurfaceDensity::table(parse_pairs(p.at("samples"), join(pp, "samples")));
    }
    throw ConfigError(join(path, "family"), "unknown density family '" + fam + "'");
  });
}

QuadratureSpec parse_quadrature(const Json& j, const std::string& path, QuadratureSpec s) {
  check_keys(j, path, {"target_tol", "max_depth", "base_order", "singular_split_radius", "max_panels"});
  s.target_tol = get_number_or(j, "target_tol", path, s.target_tol);
  s.max_depth = get_int_or(j, "max_depth", path, s.max_depth);
  s.base_order = get_int_or(j, "base_order", path, s.base_order);
  s.singular_split_radius = get_number_or(j, "singular_split_radius", path, s.singular_split_radius);
  s.max_panels = get_int_or(j, "max_panels", path, s.max_panels);
  wrap(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

LayerProblem parse_problem(const Json& j, const std::string& path, const QuadratureSpec& base) {
  check_keys(j, path, {"n", "radius", "interface", "density", "clip", "quadrature"});
  const int n = get_int_or(j, "n", path, 3);
  if (n != 2 && n != 3) throw ConfigError(join(path, "n"), "dimension must be 2 or 3");
  const double r = get_number_or(j, "radius", path, 1.0);
  if (!(r > 0.0)) throw ConfigError(join(path, "radius"), "must be positive");
  if (!j.contains("interface")) throw ConfigError(join(path, "interface"), "missing");
  if (!j.contains("density")) throw ConfigError(join(path, "density"), "missing");
  const QuadratureSpec spec =
      j.contains("quadrature") ? parse_quadrature(j.at("quadrature"), join(path, "quadrature"), base) : base;
  const SurfaceDensity g = parse_density(j.at("density"), join(path, "density"));
  std::optional<double> clip;
  if (j.contains("clip")) clip = get_number(j, "clip", path);

  const Json& ij = j.at("interface");
  const std::string ipath = join(path, "interface");
  if (family_of(ij, ipath) == "sphere") {
    check_keys(ij, ipath, {"family", "params", "n"});
    const double s = get_number(params_of(ij, ipath), "radius", join(ipath, "params"));
    return wrap(path, [&] { return LayerProblem(BallContext{n, r}, SphereInterface{s}, g, spec, clip); });
  }
  const InterfaceGraph gamma = parse_interface(ij, ipath, n);
  if (gamma.dim() != n) throw ConfigError(join(ipath, "n"), "does not match the problem dimension");
  return wrap(path, [&] { return LayerProblem(BallContext{n, r}, gamma, g, spec, clip); });
}

}  // namespace potlayer
