// Command-line front end. Exit codes: 0 success, 2 invalid configuration
// (nothing written), 3 convergence failure (outputs written, failing rows
// flagged), 1 any other error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "potlayer/cli.hpp"
#include "potlayer/errors.hpp"

using potlayer::ConfigError;
using potlayer::Json;

namespace {

struct Options {
  std::string config_path;
  std::string out;
  int threads = 1;
  double tol = 0.0;
  // command-specific overrides
  std::string family, params, problem, points, x0;
  double rho = 0.0;
  int steps = -1;
};

std::string slurp(const std::string& path, const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(field, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json_text(const std::string& text, const std::string& field) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(field, std::string("malformed JSON: ") + e.what());
  }
}

// Inline JSON if it looks like an object, otherwise a file path.
Json json_arg(const std::string& arg, const std::string& field) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') return parse_json_text(arg, field);
  return parse_json_text(slurp(arg, field), field);
}

std::vector<double> parse_numbers(const std::string& line, const std::string& field) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError(field, "not a number: '" + cell + "'");
    }
  }
  return v;
}

// Points CSV: one point per line, optional header line.
Json points_csv(const std::string& path) {
  std::istringstream in(slurp(path, "points"));
  Json pts = Json::array();
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (first) {
      first = false;
      try {
        pts.push_back(parse_numbers(line, "points"));
      } catch (const ConfigError&) {
        // header line
      }
      continue;
    }
    pts.push_back(parse_numbers(line, "points"));
  }
  return pts;
}

Json build_config(const std::string& command, const Options& o) {
  Json cfg = o.config_path.empty() ? Json::object() : parse_json_text(slurp(o.config_path, "config"), "config");
  if (!cfg.is_object()) throw ConfigError("config", "expected a JSON object");
  if (command == "modulus classify") {
    if (!o.family.empty()) {
      cfg["modulus"] = {{"family", o.family}};
      if (!o.params.empty()) cfg["modulus"]["params"] = json_arg(o.params, "params");
    } else if (!o.params.empty()) {
      throw ConfigError("params", "--params requires --family");
    }
  }
  if (!o.problem.empty()) cfg["problem"] = json_arg(o.problem, "problem");
  if (!o.points.empty()) cfg["points"] = points_csv(o.points);
  if (!o.x0.empty()) cfg["x0"] = parse_numbers(o.x0, "x0");
  if (o.rho != 0.0) cfg["rho"] = o.rho;
  if (o.steps >= 0) cfg["steps"] = o.steps;
  return cfg;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-layer potentials in a ball: evaluation, oracles and experiments"};
  app.require_subcommand(1);
  Options o;
  std::string command;

  auto common = [&](CLI::App* sub, const std::string& name) {
    sub->add_option("--config", o.config_path, "JSON configuration file");
    sub->add_option("--out", o.out, "CSV output path; a JSON sidecar is written next to it");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "quadrature target tolerance")->check(CLI::PositiveNumber);
    sub->callback([&command, name] { command = name; });
    return sub;
  };

  auto* modulus = app.add_subcommand("modulus", "moduli of continuity")->require_subcommand(1);
  auto* classify = common(modulus->add_subcommand("classify", "Dini / Log-Dini classification"), "modulus classify");
  classify->add_option("--family", o.family, "modulus family");
  classify->add_option("--params", o.params, "family parameters as JSON");

  auto* solve = app.add_subcommand("solve", "evaluate solutions")->require_subcommand(1);
  auto* eval = common(solve->add_subcommand("eval", "u at a list of points"), "solve eval");
  eval->add_option("--problem", o.problem, "problem JSON (file or inline)");
  eval->add_option("--points", o.points, "CSV of points");
  auto* jump = common(solve->add_subcommand("jump", "normal-derivative jump on the interface"), "solve jump");
  jump->add_option("--problem", o.problem, "problem JSON (file or inline)");
  jump->add_option("--x0", o.x0, "comma-separated interface point");

  auto* oracle = app.add_subcommand("oracle", "closed-form fixtures")->require_subcommand(1);
  common(oracle->add_subcommand("radial", "spherical shell oracle"), "oracle radial");

  auto* exp = app.add_subcommand("experiment", "scans and iterations")->require_subcommand(1);
  common(exp->add_subcommand("blowup-graph", "gradient scan toward the C^1 interface"), "experiment blowup-graph");
  common(exp->add_subcommand("blowup-density", "gradient scan for the continuous density"), "experiment blowup-density");
  common(exp->add_subcommand("key-lemma", "curved versus flat comparison ratios"), "experiment key-lemma");
  auto* iter = common(exp->add_subcommand("iterate", "one-sided affine approximation iteration"), "experiment iterate");
  iter->add_option("--problem", o.problem, "problem JSON (file or inline)");
  iter->add_option("--rho", o.rho, "scale ratio in (0, 1/2]");
  iter->add_option("--steps", o.steps, "number of steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  potlayer::RunOutput result;
  try {
    potlayer::RunConfig run;
    run.command = command;
    run.threads = o.threads;
    if (o.tol > 0.0) run.tol = o.tol;
    run.config = build_config(command, o);
    result = potlayer::dispatch(run);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (o.out.empty()) {
      std::cout << result.csv;
    } else {
      write_file(o.out, result.csv);
      write_file(o.out + ".json", result.sidecar.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (!result.message.empty()) std::cerr << result.message << "\n";
  return result.exit_code;
}
