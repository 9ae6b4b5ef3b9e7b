// Command-line front end: run presets or config files, list presets, check validity.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/scenarios.h"

namespace cs = chronosqueeze;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidity = 2;
constexpr int kExitNonConvergence = 3;

void print_reason(const char* kind, const std::exception& e) {
  nlohmann::json reason = {{"status", "error"}, {"kind", kind}, {"message", e.what()}};
  std::cerr << reason.dump() << '\n';
}

int run(const std::string& target, const std::string& out, const std::vector<std::string>& overrides) {
  const cs::ScenarioConfig config = cs::resolve_config(target, overrides);
  const std::string dir = out.empty() ? config.output_dir : out;
  const cs::ScenarioResult result = cs::run_scenario(config, dir);
  for (const auto& f : result.files) std::cout << f.string() << '\n';
  return kExitOk;
}

int list() {
  for (const auto& p : cs::list_presets()) std::cout << p.name << "\t" << p.description << '\n';
  return kExitOk;
}

int check(const std::string& target, const std::vector<std::string>& overrides) {
  const cs::ScenarioConfig config = cs::resolve_config(target, overrides);
  nlohmann::json out = nlohmann::json::array();
  bool ok = true;
  for (const auto& v : cs::check_scenario(config)) {
    out.push_back({{"r", v.r},          {"r_max", v.r_max},   {"budget", v.budget},
                   {"g", v.g},          {"within_svaa", v.within_svaa},
                   {"causal", v.causal}, {"ok", v.ok()},      {"warnings", v.warnings}});
    ok = ok && v.ok();
  }
  std::cout << out.dump(2) << '\n';
  return ok ? kExitOk : kExitValidity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain squeezing of the quantum vacuum in a driven nonlinear crystal"};
  app.require_subcommand(1);

  std::string target, out;
  std::vector<std::string> overrides;

  auto* run_cmd = app.add_subcommand("run", "Run a preset or JSON config and write CSV/JSON outputs");
  run_cmd->add_option("target", target, "Preset name or config file")->required();
  run_cmd->add_option("--out", out, "Output directory (default: output.dir of the config)");
  run_cmd->add_option("--override", overrides, "Dotted key assignment, e.g. traces.0.r=1")
      ->take_all();

  auto* list_cmd = app.add_subcommand("list", "List the built-in presets");

  auto* check_cmd = app.add_subcommand("check", "Validity gate only (SVAA and causality)");
  check_cmd->add_option("target", target, "Preset name or config file")->required();
  check_cmd->add_option("--override", overrides, "Dotted key assignment")->take_all();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(target, out, overrides);
    if (*list_cmd) return list();
    if (*check_cmd) return check(target, overrides);
  } catch (const cs::ValidityError& e) {
    print_reason("validity", e);
    return kExitValidity;
  } catch (const cs::IntegrationError& e) {
    print_reason("integration", e);
    return kExitNonConvergence;
  } catch (const cs::FitError& e) {
    print_reason("fit", e);
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    print_reason("error", e);
    return kExitError;
  }
  return kExitError;
}
