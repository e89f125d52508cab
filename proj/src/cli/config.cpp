#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pmrig/cli.hpp"

namespace pmrig::cli {

namespace {

std::vector<CommandSpec> build_specs() {
  std::vector<CommandSpec> specs = {
      {"verify-harnack",
       "boundary Harnack inequality with its barrier PDE and cubic checks",
       {"check_harnack", "verify_aux_pde", "cubic_check"},
       {{"suite", "none", "none | catalog (built-in metric pairs at r = 0.3, 0.5, 0.8)"},
        {"lambda", "scale(0.9, poincare)", "dominated metric"},
        {"mu", "poincare", "dominating metric (pinched in [-c, -4])"},
        {"c", "4", "curvature pinching constant"},
        {"r", "0.5", "inner radius of the annulus"},
        {"r_max", "0.9995", "outer radius of the sample"},
        {"n_r", "40", "radial sample count"},
        {"n_t", "36", "angular sample count"},
        {"tol", "1e-7", "absolute tolerance on log-quotients"}}},
      {"golusin",
       "sharpened Schwarz-Pick bound for curvature -4 metrics",
       {"check_golusin"},
       {{"lambda", "poincare", "metric with curvature -4"},
        {"r_max", "0.999", "outer radius of the sample"},
        {"n_r", "40", "radial sample count"},
        {"n_t", "24", "angular sample count"},
        {"tol", "1e-9", "tolerance"}}},
      {"rigidity-scan",
       "boundary rate of lambda/mu - 1 against (1 - |z|)^{c/2}",
       {"rigidity_scan"},
       {{"lambda", "pullback((mono 2), poincare)", "dominated metric"},
        {"mu", "poincare", "dominating metric"},
        {"c", "4", "curvature pinching constant"},
        {"angle", "0", "direction of the approach ray"},
        {"k_min", "4", "first dyadic level, t = 1 - 2^-k"},
        {"k_max", "14", "last dyadic level; deeper levels hit the rounding floor for c = 4"},
        {"expect", "any", "any | vanishes | bounded_nonzero | diverges"}}},
      {"pj-decompose",
       "Poisson-Jensen decomposition of log lambda and the quotient bound at zeros",
       {"pj_decompose", "harmonic_majorant", "green_mean", "lemma_6_3_bound"},
       {{"lambda", "pullback((blaschke 0 0.5 -0.3+0.2i), poincare)", "metric with pinch upper bound <= -4"},
        {"R", "0.9", "radius of the decomposition disk"},
        {"z", "0.3, 0.1+0.4i, -0.6", "evaluation points"},
        {"n_r", "48", "radial quadrature nodes"},
        {"n_t", "96", "angular quadrature nodes"},
        {"n_boundary", "512", "circle nodes of the harmonic majorant"},
        {"tol", "1e-3", "tolerance on the reconstruction residual"},
        {"mu", "none", "dominating metric for the quotient bound (none to skip)"},
        {"xi", "0", "zero at which the quotient bound is evaluated"}}},
      {"sequence-scan",
       "sequence dichotomy, sequential Schwarz-Pick and the maximal-metric witness",
       {"dichotomy_scan", "sequential_schwarz_pick", "prop_5_7_witness"},
       {{"mode", "dichotomy", "dichotomy | schwarz-pick | witness"},
        {"sequence", "fading_zeros", "metric sequence (dichotomy)"},
        {"mu", "poincare", "dominating metric (dichotomy)"},
        {"c", "4", "curvature pinching constant (dichotomy)"},
        {"family", "rotations", "map family (schwarz-pick)"},
        {"hypothesis", "default", "point sequence; default point(0.5), or rim for schwarz-pick"},
        {"k_min", "default", "ladder n = 2^k_min..2^k_max; default 1 (2 for schwarz-pick)"},
        {"k_max", "default", "default 6 (12 for schwarz-pick)"},
        {"a", "0.5", "bound on lambda(0) (witness)"},
        {"z", "0.5", "evaluation point (witness)"},
        {"expect", "any", "expected verdict or limit class, lower case"}}},
      {"zero-track",
       "orders at a zero and of zeros approaching it along a sequence",
       {"zero_rigidity_track"},
       {{"sequence", "mu_max_ladder(1)", "metric sequence"},
        {"mu", "mu_max(1)", "dominating metric"},
        {"xi", "0", "tracked zero"},
        {"hypothesis", "point(0.5)", "point sequence with q_n(z_n) -> 1"},
        {"k_min", "1", "ladder n = 2^k_min..2^k_max"},
        {"k_max", "6", "ladder end"},
        {"tol_order", "1e-2", "tolerance on order limits"}}},
      {"liouville-solve",
       "prescribed-curvature Dirichlet problem on a disk",
       {},
       {{"kappa", "constant(-4)", "curvature: constant(k) | radial(a)"},
        {"R", "0.9", "disk radius"},
        {"boundary", "poincare", "poincare | constant(u): boundary data of u = log density"},
        {"zero_xi", "none", "location of a factored zero (none for no zero)"},
        {"zero_alpha", "1", "order of the factored zero"},
        {"n", "128", "grid nodes per axis"},
        {"max_iter", "60", "Newton iteration limit"},
        {"tol", "1e-8", "residual target"},
        {"csv", "true", "write the gridded solution as CSV"}}},
      {"ball-check",
       "Kobayashi geometry of the unit ball",
       {"theorem_2_2_check", "prop_7_4_check", "aladro_ratio", "radial_distance_band"},
       {{"check", "boundary-conditions", "boundary-conditions | geodesic-disc | aladro | distance-band"},
        {"map", "(ball-aut 0.3 0.2i)", "ball self-map (boundary-conditions)"},
        {"v", "1, 0", "direction; normalized before use"},
        {"disc", "slice", "slice, or ';'-separated polynomial disk maps as components (geodesic-disc)"},
        {"p", "1, 0", "boundary point of the slice (geodesic-disc)"},
        {"z", "1, 0", "radial direction (aladro, distance-band)"},
        {"p0", "0, 0", "base point (distance-band)"},
        {"bound", "0.7", "band bound (distance-band)"},
        {"k_min", "4", "first dyadic level, delta = 2^-k"},
        {"k_max", "12", "last dyadic level"},
        {"expect", "any", "any | pass | fail (boundary-conditions)"}}},
      {"burns-krantz",
       "third-order boundary fixing versus the hyperbolic-derivative rate",
       {"burns_krantz_check"},
       {{"map", "(feps 0.08333333333333333)", "disk self-map fixing 1"},
        {"k_min", "4", "first dyadic level"},
        {"k_max", "11", "last dyadic level; the cubic displacement reaches rounding level near k = 13"}}},
  };
  for (auto& s : specs) {
    s.keys.push_back({"name", s.name, "report base name"});
    s.keys.push_back({"output_dir", "default", "report directory; default PMRIG_OUTPUT_DIR or ."});
  }
  return specs;
}

const KeySpec* find_key(const CommandSpec& spec, std::string_view key) {
  for (const auto& k : spec.keys)
    if (k.key == key) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = build_specs();
  return specs;
}

const CommandSpec& command_spec(std::string_view name) {
  for (const auto& s : command_specs())
    if (s.name == name) return s;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string ExperimentConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it != values.end()) return it->second;
  const KeySpec* k = find_key(command_spec(command), key);
  if (!k) throw ConfigError("command '" + command + "' has no key '" + key + "'");
  return k->default_value;
}

double ExperimentConfig::get_double(const std::string& key) const {
  const std::string s = get(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("key '" + key + "': malformed number '" + s + "'");
  return v;
}

int ExperimentConfig::get_int(const std::string& key) const {
  const std::string s = get(key);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("key '" + key + "': malformed integer '" + s + "'");
  return v;
}

std::map<std::string, std::string> ExperimentConfig::effective() const {
  std::map<std::string, std::string> out;
  for (const auto& k : command_spec(command).keys) out[k.key] = get(k.key);
  return out;
}

void set_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const CommandSpec& spec = command_spec(config.command);
  if (!find_key(spec, key)) throw ConfigError("command '" + config.command + "' has no key '" + key + "'");
  const auto v = trim(value);
  if (v.empty()) throw ConfigError("key '" + key + "': empty value");
  if (v.find('\n') != std::string_view::npos) throw ConfigError("key '" + key + "': value spans lines");
  config.values[key] = std::string(v);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::vector<std::pair<std::string, std::string>> pairs;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
          return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                 c == '_' || c == 'R';
        }))
      throw ConfigError("line " + std::to_string(line_no) + ": malformed key '" + key + "'");
    for (const auto& [k, v] : pairs)
      if (k == key) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (key == "command" && !cfg.command.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key 'command'");
    if (key == "command")
      cfg.command = value;
    else
      pairs.emplace_back(key, value);
  }
  if (cfg.command.empty()) throw ConfigError("missing 'command'");
  command_spec(cfg.command);
  for (const auto& [k, v] : pairs) set_value(cfg, k, v);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& config) {
  std::string out = "command = " + config.command + "\n";
  for (const auto& [k, v] : config.values) out += k + " = " + v + "\n";
  return out;
}

}  // namespace pmrig::cli
