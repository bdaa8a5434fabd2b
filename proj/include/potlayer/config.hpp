#pragma once

// JSON descriptors for moduli, interfaces, densities, quadrature settings and
// problems. Every parse error names the offending field by its dotted path.

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "potlayer/geometry.hpp"
#include "potlayer/modulus.hpp"
#include "potlayer/potential.hpp"
#include "potlayer/rules.hpp"

namespace potlayer {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

using Json = nlohmann::json;

/// {"family": "power", "params": {"alpha": 0.5}}; families zero, power,
/// inverse_log, log_power (beta), table (samples [[r, w], ...]),
/// max_of (a, b).
Modulus parse_modulus(const Json& j, const std::string& path);

/// {"family": "flat" | "holder" | "counterexample_graph" | "table",
///  "params": {...}, "n": 3}. `n` defaults to `default_n`.
InterfaceGraph parse_interface(const Json& j, const std::string& path, int default_n = 3);

/// {"family": "constant" | "holder" | "counterexample_eta" | "table", "params": {...}}.
SurfaceDensity parse_density(const Json& j, const std::string& path);

/// Overrides of QuadratureSpec fields: target_tol, max_depth, base_order,
/// singular_split_radius, max_panels.
QuadratureSpec parse_quadrature(const Json& j, const std::string& path, QuadratureSpec base = {});

/// {"n": 3, "radius": 1, "interface": {...} | {"family": "sphere", "params": {"radius": s}},
///  "density": {...}, "clip": r_clip, "quadrature": {...}}.
LayerProblem parse_problem(const Json& j, const std::string& path, const QuadratureSpec& base = {});

/// Helpers shared with the command layer.
double get_number(const Json& obj, const std::string& key, const std::string& path);
double get_number_or(const Json& obj, const std::string& key, const std::string& path, double fallback);
int get_int_or(const Json& obj, const std::string& key, const std::string& path, int fallback);
bool get_bool_or(const Json& obj, const std::string& key, const std::string& path, bool fallback);
void require_object(const Json& j, const std::string& path);
/// Rejects keys outside `allowed`.
void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed);

}  // namespace potlayer
