#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include "pmrig/cli.hpp"

namespace pmrig::cli {

std::string tool_version() { return "pmrig " PMRIG_VERSION; }

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version();
  j["command"] = report.command;
  j["name"] = report.name;
  j["verdict"] = report.verdict;
  j["pass"] = report.pass;
  j["parameters"] = report.parameters;
  j["results"] = report.results;
  if (report.error) j["error"] = *report.error;
  if (report.profile) {
    j["profile"] = {{"columns", {"1-|z|", report.profile->value_label}}, {"rows", report.profile->rows.size()}};
  }
  return j;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move report into place at '" + path.string() + "'");
  }
}

void emit_profile(const Report& report, const std::filesystem::path& path) {
  if (!report.profile) throw Error("emit_profile: report '" + report.name + "' has no radial samples");
  std::string text = "# 1-|z| " + report.profile->value_label + "\n";
  char buf[96];
  for (const auto& [x, y] : report.profile->rows) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x, y);
    text += buf;
  }
  write_atomic(path, text);

  nlohmann::ordered_json meta;
  meta["command"] = report.command;
  meta["name"] = report.name;
  meta["parameters"] = report.parameters;
  meta["verdict"] = report.verdict;
  meta["tool_version"] = tool_version();
  meta["columns"] = {"1-|z|", report.profile->value_label};
  meta["rows"] = report.profile->rows.size();
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  write_atomic(sidecar, meta.dump(2) + "\n");
}

std::filesystem::path default_output_dir() {
  const char* env = std::getenv("PMRIG_OUTPUT_DIR");
  if (env && *env) return env;
  return ".";
}

}  // namespace pmrig::cli
