#pragma once
/**
 * @file config.hpp
 * @brief Experiment configuration documents.
 *
 * A document is a JSON object with sections `process`, `numerics`, `run` and
 * `output`. Keys may be nested objects or dotted names at any level
 * ("numerics": {"dt": 0.01} and "numerics.dt": 0.01 are equivalent); arrays
 * are values. `process` may also be a preset name.
 *
 * Process keys: preset, drift.type (constant | affine | tabulated),
 * drift.value, drift.slope, drift.intercept, drift.knots ([[x, g], ...]),
 * sigma, jumps.type (none | exponential | deterministic | mixture),
 * jumps.rate, jumps.size, jumps.components ([{weight, type, rate | size}]),
 * jumps.intensity. Explicit keys override those of the preset.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rjd/model.hpp"

namespace rjd {

using Json = nlohmann::ordered_json;

enum class RunKind { certificate, simulate, couple, decay, path_decay, stationary, verify, examples };

std::string to_string(RunKind kind);
/// True for kinds that drive the ordered coupling.
bool uses_coupling(RunKind kind);

enum class OutputFormat { csv, json };

struct Numerics {
  double dt = 1e-3;
  double t_max = 10.0;
  std::size_t paths = 10000;
  std::uint64_t seed = 0;
  /// Empty means "auto" (20 / k).
  std::optional<double> burn_in;
  unsigned jobs = 1;
};

struct RunSettings {
  RunKind kind = RunKind::certificate;
  double p = 1.0;
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 1.0;
  double x = 2.0;
  std::vector<double> times{1.0, 2.0, 4.0, 8.0};
  /// Window length for path-decay runs: windows are [t, t + window].
  double window = 1.0;
  std::size_t stride = 1;
};

struct OutputSettings {
  std::string path;
  OutputFormat format = OutputFormat::json;
};

struct ExperimentConfig {
  /// Absent for the examples runner when no process is given.
  std::optional<ProcessSpec> process;
  Numerics numerics;
  RunSettings run;
  OutputSettings output;
  /// Dotted names of every key filled from a default.
  std::vector<std::string> defaults_applied;
  /// Fully resolved configuration, echoed into reports.
  Json echo;
};

/// Flattens nested objects into dotted keys ("a": {"b": 1} -> "a.b": 1).
/// Throws ConfigError on a key given twice.
Json flatten(const Json& document);

/// Overlays the flattened `overrides` on the flattened `base`.
Json merge_documents(const Json& base, const Json& overrides);

/// Validates a document and fills defaults. Throws ConfigError listing
/// unknown keys, or naming the violated constraint.
ExperimentConfig parse_config(const Json& document);

/// Expands a preset name into explicit process keys (without the "process."
/// prefix). Throws ConfigError for unknown names.
Json preset_keys(const std::string& name);

/// Builds a ProcessSpec from flattened process keys (without the prefix).
ProcessSpec parse_process(const Json& keys);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace rjd
