#include <iostream>

#include <CLI11.hpp>

#include "rydmeas/cli.hpp"

#ifndef RYDMEAS_SCENARIO_DIR
#define RYDMEAS_SCENARIO_DIR "scenarios"
#endif

int main(int argc, char** argv) {
  using namespace rydmeas;
  CLI::App app{"Dual-species ancilla / measuring-atom readout toolkit"};
  app.set_version_flag("--version", kToolVersion);

  RunOptions opt;
  std::string config, rule;
  std::uint64_t seed = 0;
  bool list = false;
  std::string scenario_dir = RYDMEAS_SCENARIO_DIR;

  app.add_option("command", opt.command, "Subcommand")->check(CLI::IsMember(subcommands()));
  app.add_option("--config", config, "Scenario file (YAML)");
  app.add_option("--out-dir", opt.out_dir, "Directory for CSV output")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Seed for layout jitter (overrides the scenario)");
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--list-scenarios", list, "List bundled scenario files and exit");
  app.add_option("--scenario-dir", scenario_dir, "Where --list-scenarios looks")->capture_default_str();
  app.add_flag("--no-camera-readout", opt.no_camera_readout, "budget: leave out the camera frame readout");
  app.add_option("--exposure-rule", rule, "budget: min_exposure_floor or integration_only")
      ->check(CLI::IsMember({"min_exposure_floor", "integration_only"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kUsage;
  }

  if (list) {
    for (const auto& p : list_scenarios(scenario_dir)) {
      std::string description;
      try {
        description = load_scenario(p).description;
      } catch (const std::exception&) {
        description = "(invalid)";
      }
      std::cout << p.filename().string() << "\t" << description << "\n";
    }
    return exit_code::kOk;
  }
  if (opt.command.empty()) {
    std::cerr << "error: a subcommand is required\n" << app.help();
    return exit_code::kUsage;
  }
  if (!config.empty()) opt.config = config;
  if (*seed_opt) opt.seed = seed;
  if (!rule.empty()) {
    opt.exposure_rule = rule == "integration_only" ? ExposureRule::IntegrationOnly : ExposureRule::MinExposureFloor;
  }
  return run_command(opt, std::cout, std::cerr);
}
