// Command-line front-end: `pmrig list`, `pmrig run FILE`, or `pmrig <command> key=value ...`.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmrig/cli.hpp"

namespace {

using namespace pmrig::cli;

void print_listing(std::ostream& os) {
  for (const auto& spec : command_specs()) {
    os << spec.name << "\n  " << spec.summary << "\n";
    if (!spec.checkers.empty()) {
      os << "  checkers:";
      for (const auto& c : spec.checkers) os << " " << c;
      os << "\n";
    }
    for (const auto& k : spec.keys) os << "    " << k.key << " = " << k.default_value << "    # " << k.help << "\n";
  }
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& pairs) {
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + p + "'");
    set_value(cfg, p.substr(0, eq), p.substr(eq + 1));
  }
}

int execute(const ExperimentConfig& cfg, const std::string& output_dir) {
  RunOptions opts;
  if (!output_dir.empty()) opts.output_dir = output_dir;
  opts.log = &std::cout;
  const RunResult r = run(cfg, opts);
  if (r.exit_code == kExitInvalidConfig && r.report.error) std::cerr << "pmrig: " << *r.report.error << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for boundary rigidity of pinched-curvature metrics"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  app.add_subcommand("list", "list subcommands, their keys with defaults and the checkers they expose");

  std::string run_file, run_out;
  std::vector<std::string> run_pairs;
  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
  run_cmd->add_option("config", run_file, "config file")->required();
  run_cmd->add_option("overrides", run_pairs, "key=value overrides");
  run_cmd->add_option("--output-dir", run_out, "report directory");

  struct Direct {
    CLI::App* app;
    std::string config, out;
    std::vector<std::string> pairs;
  };
  std::vector<Direct> direct(command_specs().size());
  for (std::size_t i = 0; i < command_specs().size(); ++i) {
    const auto& spec = command_specs()[i];
    auto& d = direct[i];
    d.app = app.add_subcommand(spec.name, spec.summary);
    d.app->add_option("pairs", d.pairs, "key=value settings");
    d.app->add_option("--config", d.config, "config file supplying base values");
    d.app->add_option("--output-dir", d.out, "report directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (app.got_subcommand("list")) {
      print_listing(std::cout);
      return kExitPass;
    }
    if (run_cmd->parsed()) {
      ExperimentConfig cfg = load_config(run_file);
      apply_overrides(cfg, run_pairs);
      return execute(cfg, run_out);
    }
    for (std::size_t i = 0; i < direct.size(); ++i) {
      if (!direct[i].app->parsed()) continue;
      ExperimentConfig cfg;
      if (!direct[i].config.empty()) {
        cfg = load_config(direct[i].config);
        if (cfg.command != command_specs()[i].name)
          throw ConfigError("config file is for '" + cfg.command + "', not '" + command_specs()[i].name + "'");
      } else {
        cfg.command = command_specs()[i].name;
      }
      apply_overrides(cfg, direct[i].pairs);
      return execute(cfg, direct[i].out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "pmrig: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  return kExitInvalidConfig;
}
