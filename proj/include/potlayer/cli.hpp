#pragma once

// Batch command layer: one resolved configuration in, one CSV table and a
// JSON sidecar out. Nothing here touches the filesystem.

#include <cstdint>
#include <optional>
#include <string>

#include "potlayer/config.hpp"

namespace potlayer {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
  /// "modulus classify", "solve eval", "solve jump", "oracle radial",
  /// "experiment blowup-graph", "experiment blowup-density",
  /// "experiment key-lemma", "experiment iterate".
  std::string command;
  Json config = Json::object();
  int threads = 1;
  std::optional<double> tol;
};

struct RunOutput {
  /// 0 success, 2 invalid configuration, 3 convergence failure (table is
  /// still produced and marks the failing rows).
  int exit_code = 0;
  std::string csv;
  Json sidecar;
  std::string message;
};

/// Validates the configuration, runs the command and renders its outputs.
/// Throws ConfigError on schema violations before any computation starts.
RunOutput dispatch(const RunConfig& run);

/// 17 significant digits, the CSV number format.
std::string format_number(double x);

}  // namespace potlayer
