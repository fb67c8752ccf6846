#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rydmeas/budget.hpp"
#include "rydmeas/dynamics.hpp"
#include "rydmeas/readout.hpp"
#include "rydmeas/setup.hpp"

namespace rydmeas {

/// Schema violations in a scenario file; carries every problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Inclusive, evenly spaced grid.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

/// A parsed scenario file. Frequencies in the file are cyclic MHz; `setup`
/// holds the converted drive (pulse in rad/us).
struct Scenario {
  std::string name;
  std::string description;
  std::string source_text;
  std::filesystem::path source_dir;

  TransferSetup setup;
  std::optional<std::filesystem::path> tables_path;

  MeasurementModel readout;
  CycleBudget budget;
  ExposureRule exposure_rule = ExposureRule::MinExposureFloor;
  bool include_camera_readout = true;

  // outputs
  Grid detuning_grid_mhz{-2.0, 2.0, 401};
  int samples = 201;
  std::vector<Level> ancilla_branches{Level::Rydberg, Level::Zero};
  std::vector<int> k_list{1, 2, 3, 4, 5};
  Grid t_grid_us{1.0, 25.0, 25};
  std::vector<int> ghz_k{1, 2, 3, 4};
  std::vector<std::string> potential_pair_states{"Rb46s-Cs48s", "Rb60s-Cs64s"};
  Grid potential_r_um{1.5, 6.0, 91};
  double max_phase_per_step = 0.02;

  /// FNV-1a 64-bit hash of the file contents, hex.
  std::string hash() const;
  /// Tables named by the scenario, or the built-in ones.
  AtomicTables tables() const;
};

/// Parses YAML scenario text. Throws ConfigError listing every schema problem.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& source_dir = {});

/// Reads and parses a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace rydmeas
