#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pmrig/holomap.hpp"
#include "pmrig/liouville.hpp"
#include "pmrig/metric.hpp"
#include "pmrig/sequences.hpp"

namespace pmrig::cli {

/// Invalid configuration or object description. The front-end maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidConfig = 2;

std::string tool_version();

// ---------------------------------------------------------------------------
// Object descriptions.
//
//   metric    := "poincare" | "mu_max(" beta ")" | "pullback(" map "," metric ")"
//              | "scale(" t "," metric ")" | "dilate(" rho "," metric ")"
//              | "example4_1(" n ")" | "exp_weight(example4_1(" n "))"
//              | "example4_2(" n "," alpha "," z ")"
//              | "liouville(" curvature "," R [ "," n ] ")"
//   curvature := "constant(" k ")" | "radial(" a ")"
//   sequence  := "smoothed_weights" | "fading_zeros" | "constant(" metric ")"
//              | "scaled(" metric ")" | "mu_max_ladder(" beta ")"
//   family    := "rotations" | "rim_automorphisms" | "constant(" map ")"
//   points    := "point(" z ")" | "rim" | "rim(" s ")"
//
// map is a disk map in the s-expression grammar of parse_holomap. The
// families are n -> e^{i/n} z, n -> automorphism(1 - 1/n) and a constant
// map; the point sequences are n -> z, n -> 1 - 1/n and n -> 1 - 1/(s n).

Pseudometric parse_metric(std::string_view text);
CurvatureFunction parse_curvature(std::string_view text);
MetricSequence parse_sequence(std::string_view text);
std::function<HoloMap(int)> parse_map_family(std::string_view text);
std::function<Complex(int)> parse_point_sequence(std::string_view text);
/// Comma-separated complex literals.
std::vector<Complex> parse_complex_list(std::string_view text);

// ---------------------------------------------------------------------------
// Configuration.
//
// One "key = value" pair per line; blank lines and lines starting with '#'
// are ignored; the key "command" names the subcommand. Keys not declared by
// the subcommand, duplicate keys and a missing command are rejected.

struct KeySpec {
  std::string key;
  std::string default_value;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string summary;
  /// Library checkers this subcommand exposes.
  std::vector<std::string> checkers;
  std::vector<KeySpec> keys;
};

/// Every subcommand; keys "name" and "output_dir" are accepted by all.
const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(std::string_view name);

struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> values;  // explicit values only

  /// Explicit value or the declared default.
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  /// Explicit values merged over the defaults.
  std::map<std::string, std::string> effective() const;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text: the command line first, then keys in sorted order.
std::string serialize(const ExperimentConfig& config);
/// Adds or replaces key=value after validating the key.
void set_value(ExperimentConfig& config, const std::string& key, const std::string& value);

// ---------------------------------------------------------------------------
// Reports.

struct Profile {
  std::string value_label;
  /// (1 - |z|, value) rows, first column strictly decreasing.
  std::vector<std::pair<double, double>> rows;
};

struct Report {
  std::string command;
  std::string name;
  std::map<std::string, std::string> parameters;
  bool pass = false;
  std::string verdict;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::optional<Profile> profile;
  std::optional<std::string> error;
};

nlohmann::ordered_json to_json(const Report& report);
/// Writes through a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);
/// Two-column text at path plus the metadata sidecar path + ".json".
/// Throws Error when the report has no profile or the path is unwritable.
void emit_profile(const Report& report, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Execution.

/// PMRIG_OUTPUT_DIR when set, otherwise the current directory.
std::filesystem::path default_output_dir();

struct RunOptions {
  /// Overrides the config's output_dir and default_output_dir when set.
  std::optional<std::filesystem::path> output_dir;
  std::ostream* log = nullptr;
};

struct RunResult {
  int exit_code = kExitInvalidConfig;
  Report report;
  std::vector<std::filesystem::path> files;
};

/// Resolves every object description (ConfigError on failure), runs the
/// checkers and writes <name>.json, plus <name>.profile.dat(.json) when the
/// report has radial samples and <name>.csv for liouville-solve. Errors raised
/// by a checker are recorded in the report and give exit code 1.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace pmrig::cli
