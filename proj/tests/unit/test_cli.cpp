#include <doctest.h>

#include <cstdio>
#include <functional>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "potlayer/cli.hpp"
#include "potlayer/config.hpp"

using namespace potlayer;

namespace {

std::string config_error_field(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

RunOutput run(const std::string& command, const Json& cfg, int threads = 1) {
  RunConfig r;
  r.command = command;
  r.config = cfg;
  r.threads = threads;
  return dispatch(r);
}

const Json flat_problem = Json::parse(R"({"interface": {"family": "flat"},
                                          "density": {"family": "constant", "params": {"c": 1}}})");

int shell_exit(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number format") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-1.0 / 3.0) == "-0.33333333333333331");
  CHECK(format_number(2.5e-300) == "2.5e-300");
}

TEST_CASE("descriptor errors name the field") {
  CHECK(config_error_field([] { parse_modulus(Json::parse(R"({"family": "nope"})"), "modulus"); }) ==
        "modulus.family");
  CHECK(config_error_field([] { parse_modulus(Json::parse(R"({"family": "power"})"), "modulus"); }) ==
        "modulus.params.alpha");
  CHECK(config_error_field([] { parse_modulus(Json::parse(R"({"family": "power", "params": {"alpha": -1}})"), "m"); }) ==
        "m");
  CHECK(config_error_field([] {
          parse_problem(Json::parse(R"({"interface": {"family": "flat"}, "density": {"family": "constant"}, "colour": 1})"),
                        "problem");
        }) == "problem.colour");
  CHECK(config_error_field([] {
          parse_problem(Json::parse(R"({"interface": {"family": "holder", "params": {"alpha": "x"}},
                                         "density": {"family": "constant"}})"),
                        "problem");
        }) == "problem.interface.params.alpha");
  CHECK(config_error_field([] { parse_problem(Json::parse(R"({"interface": {"family": "flat"}})"), "problem"); }) ==
        "problem.density");
  CHECK(config_error_field([] {
          parse_quadrature(Json::parse(R"({"target_tol": 0})"), "quadrature");
        }) == "quadrature");
  CHECK(config_error_field([] {
          parse_problem(Json::parse(R"({"n": 4, "interface": {"family": "flat"}, "density": {"family": "constant"}})"),
                        "problem");
        }) == "problem.n");
}

TEST_CASE("descriptors build the expected objects") {
  const auto m = parse_modulus(Json::parse(R"({"family": "max_of", "params": {"a": {"family": "power", "params": {"alpha": 0.5}},
                                                                              "b": {"family": "inverse_log"}}})"),
                               "m");
  CHECK(m(std::exp(-2.0)) == doctest::Approx(0.5));
  const auto p = parse_problem(Json::parse(R"({"interface": {"family": "sphere", "params": {"radius": 0.5}},
                                               "density": {"family": "constant", "params": {"c": 2}},
                                               "quadrature": {"target_tol": 1e-5}})"),
                               "problem");
  CHECK_FALSE(p.is_graph());
  CHECK(p.spec.target_tol == 1e-5);
  CHECK(p.density.base_value() == 2.0);
  const auto g = parse_interface(Json::parse(R"({"family": "table", "params": {"slopes": [[0, 0], [0.5, 0.2], [1, 0.3]]}})"),
                                 "interface");
  CHECK(g.chart_radius() == 1.0);
}

TEST_CASE("solve eval at the origin") {
  Json cfg{{"problem", flat_problem}, {"points", Json::parse("[[0, 0, 0], [0, 0, 0.5]]")}};
  const auto out = run("solve eval", cfg);
  CHECK(out.exit_code == 0);
  std::istringstream in(out.csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "x1,x2,x3,u,est_error,converged");
  const double u = std::stod(first.substr(first.find(',', first.find(',', first.find(',') + 1) + 1) + 1));
  CHECK(u == doctest::Approx(-0.25).epsilon(1e-5));
  CHECK(out.sidecar["tool"] == "potlayer");
  CHECK(out.sidecar["version"] == kToolVersion);
  CHECK(out.sidecar["config"].contains("problem"));
  CHECK_FALSE(out.sidecar["config"].contains("threads"));
}

TEST_CASE("modulus classify reports divergence") {
  const auto out = run("modulus classify", Json{{"modulus", {{"family", "inverse_log"}}}});
  CHECK(out.exit_code == 0);
  CHECK(out.csv.find("divergent") != std::string::npos);
  CHECK(out.sidecar["summary"]["verdict"] == "divergent");
}

TEST_CASE("unknown keys, commands and missing sections are config errors") {
  CHECK_THROWS_AS(run("solve eval", Json{{"problem", flat_problem}}), ConfigError);
  CHECK_THROWS_AS(run("solve eval", Json{{"problem", flat_problem}, {"points", Json::array()}}), ConfigError);
  CHECK_THROWS_AS(run("solve eval", Json{{"problem", flat_problem}, {"points", {{0, 0}}}}), ConfigError);
  CHECK_THROWS_AS(run("oracle radial", Json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(run("experiment teleport", Json::object()), ConfigError);
  CHECK_THROWS_AS(run("experiment blowup-graph", Json{{"j_min", 6}, {"j_max", 5}}), ConfigError);
}

TEST_CASE("convergence failure gives exit code 3 and flags the row") {
  Json p = flat_problem;
  p["quadrature"] = {{"target_tol", 1e-15}, {"max_depth", 1}, {"base_order", 2}};
  const auto out = run("solve eval", Json{{"problem", p}, {"points", {{0.1, 0.1, 0.05}}}});
  CHECK(out.exit_code == 3);
  CHECK(out.csv.substr(out.csv.size() - 2) == "0\n");
  CHECK_FALSE(out.message.empty());
}

TEST_CASE("outputs do not depend on the thread count") {
  Json cfg{{"problem", flat_problem}, {"points", Json::parse("[[0, 0, 0], [0.1, 0.2, 0.3], [0.2, -0.1, -0.4], [0, 0, 0.01]]")}};
  const auto a = run("solve eval", cfg, 1);
  const auto b = run("solve eval", cfg, 4);
  CHECK(a.csv == b.csv);
  CHECK(a.sidecar.dump() == b.sidecar.dump());
}

TEST_CASE("executable exit codes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "potlayer_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string exe = POTLAYER_CLI_PATH;
  const std::string quiet = " >/dev/null 2>&1";

  // malformed JSON: exit 2, nothing written
  const fs::path bad = dir / "bad.csv";
  CHECK(shell_exit(exe + " solve eval --problem '{\"interface\":' --out " + bad.string() + quiet) == 2);
  CHECK_FALSE(fs::exists(bad));
  CHECK_FALSE(fs::exists(bad.string() + ".json"));

  // unknown flag: exit 2
  CHECK(shell_exit(exe + " oracle radial --frobnicate" + quiet) == 2);

  // success writes the table and its sidecar
  const fs::path good = dir / "m.csv";
  CHECK(shell_exit(exe + " modulus classify --family power --params '{\"alpha\": 0.5}' --out " + good.string() +
                   quiet) == 0);
  CHECK(fs::exists(good));
  std::ifstream side(good.string() + ".json");
  const Json j = Json::parse(side);
  CHECK(j["summary"]["verdict"] == "dini");
  fs::remove_all(dir);
}

}
