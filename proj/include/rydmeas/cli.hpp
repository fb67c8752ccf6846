#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rydmeas/budget.hpp"
#include "rydmeas/config.hpp"

namespace rydmeas {

inline constexpr const char* kToolVersion = "0.1.0";

/// Subcommands accepted by run_command.
const std::vector<std::string>& subcommands();

struct RunOptions {
  std::string command;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the scenario's jitter seed
  int threads = 1;
  bool no_camera_readout = false;
  std::optional<ExposureRule> exposure_rule;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kNumerical = 3;
}  // namespace exit_code

/// Scenario used when no --config is given: the figure defaults for the
/// command (CNOT parameters for `ghz`, measurement mapping otherwise).
Scenario default_scenario(const std::string& command);

/// Runs one subcommand, writing CSV files under out_dir and a short report to
/// `out`. Errors go to `err`; the return value is the process exit code.
int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Bundled scenario files (*.cfg) in `dir`, sorted by name.
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir);

/// Minimal CSV writer: comment header (tool version, scenario hash, parameter
/// echo), column row, then rows. Numbers use %.12g so output is byte-stable.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Scenario& scenario, const std::string& command,
            const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);

  static std::string num(double v);
  static std::string integer(long long v);

 private:
  std::ofstream file_;
  std::filesystem::path path_;
};

}  // namespace rydmeas
