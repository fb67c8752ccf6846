#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rydmeas/cli.hpp"
#include "rydmeas/config.hpp"
#include "rydmeas/errors.hpp"

using namespace rydmeas;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = RYDMEAS_SCENARIO_DIR;

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("rydmeas_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Runs the built CLI; returns the exit status, stdout+stderr in `output`.
int run_cli(const std::string& args, std::string& output, const fs::path& dir) {
  const fs::path log = dir / "cli.log";
  const std::string cmd = std::string("\"") + RYDMEAS_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  output = slurp(log);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, EmptyFileIsRejected) {
  EXPECT_THROW(parse_scenario(""), ConfigError);
  EXPECT_GE(errors_of("").size(), 1u);
}

TEST(Config, CollectsEveryError) {
  const std::string text = R"(name: broken
geometry:
  k: 9
  r_am_um: -1
  colour: blue
drive:
  pulse:
    variant: chirped_sech
    omega_max_MHz: 0.6
  omega_r_MHz: 6
  delta_r_MHz: 3
species:
  pair_state: Rb99s-Cs99s
readout:
  camera:
    eta_d: 1.5
budget:
  exposure_rule: sometimes
outputs:
  samples: 1
)";
  const auto e = errors_of(text);
  EXPECT_TRUE(any_contains(e, "geometry.k")) << e.size();
  EXPECT_TRUE(any_contains(e, "geometry.colour: unknown field"));
  EXPECT_TRUE(any_contains(e, "drive.pulse.beta_MHz"));
  EXPECT_TRUE(any_contains(e, "drive.pulse.mu"));
  EXPECT_TRUE(any_contains(e, "drive.delta_r_MHz"));
  EXPECT_TRUE(any_contains(e, "unknown pair state 'Rb99s-Cs99s'"));
  EXPECT_TRUE(any_contains(e, "readout.camera"));
  EXPECT_TRUE(any_contains(e, "budget.exposure_rule"));
  EXPECT_TRUE(any_contains(e, "outputs.samples"));
  EXPECT_GE(e.size(), 10u);
}

TEST(Config, UnknownTopLevelAndTypeErrors) {
  const auto e = errors_of("name: x\nextra: 1\ngeometry:\n  k: three\n");
  EXPECT_TRUE(any_contains(e, "extra: unknown field"));
  EXPECT_TRUE(any_contains(e, "geometry.k"));
}

TEST(Config, FrequenciesAreCyclicMegahertz) {
  const Scenario sc = parse_scenario("name: f\ndrive:\n  pulse: {variant: square, omega_max_MHz: 0.2}\n  delta_MHz: 0.1\n");
  EXPECT_NEAR(peak_amplitude(sc.setup.pulse), units::mhz_to_angular(0.2), 1e-12);
  EXPECT_NEAR(duration(sc.setup.pulse), 2.5, 1e-12);
}

TEST(Config, HashTracksContents) {
  const Scenario a = parse_scenario("name: a\n");
  const Scenario b = parse_scenario("name: a\n");
  const Scenario c = parse_scenario("name: a\n\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, BundledScenariosParse) {
  const auto files = list_scenarios(kScenarios);
  EXPECT_GE(files.size(), 10u);
  for (const auto& f : files) {
    EXPECT_NO_THROW({
      const Scenario sc = load_scenario(f);
      EXPECT_FALSE(sc.description.empty()) << f;
    }) << f;
  }
}

TEST(Config, MissingFile) { EXPECT_THROW(load_scenario("/nonexistent/x.cfg"), ConfigError); }

TEST(Cli, CsvHeaderAndByteStableRerun) {
  const fs::path d = scratch("rerun");
  std::string out;
  const std::string args = "budget --config \"" + (kScenarios / "budget.cfg").string() + "\" --out-dir \"";
  ASSERT_EQ(run_cli(args + (d / "a").string() + "\"", out, d), 0) << out;
  ASSERT_EQ(run_cli(args + (d / "b").string() + "\"", out, d), 0) << out;
  const std::string a = slurp(d / "a" / "budget.csv");
  EXPECT_EQ(a, slurp(d / "b" / "budget.csv"));
  const Scenario sc = load_scenario(kScenarios / "budget.cfg");
  EXPECT_EQ(a.rfind("# rydmeas " + std::string(kToolVersion) + "\n# command: budget\n", 0), 0u);
  EXPECT_NE(a.find("# scenario: budget (hash " + sc.hash() + ")"), std::string::npos);
  EXPECT_NE(a.find("# |   camera_readout_time_us: 500"), std::string::npos);
  EXPECT_NE(a.find("\nitem,time_us\n"), std::string::npos);
  EXPECT_NE(a.find("\ntotal,523.2\n"), std::string::npos);
}

TEST(Cli, BudgetWithoutReadout) {
  const fs::path d = scratch("noreadout");
  std::string out;
  ASSERT_EQ(run_cli("budget --no-camera-readout --out-dir \"" + d.string() + "\"", out, d), 0) << out;
  const std::string csv = slurp(d / "budget.csv");
  const auto pos = csv.find("\ntotal,");
  ASSERT_NE(pos, std::string::npos);
  const double total = std::stod(csv.substr(pos + 7));
  EXPECT_NEAR(total, 22.0, 2.0);
  ASSERT_EQ(run_cli("budget --no-camera-readout --exposure-rule integration_only --out-dir \"" + d.string() + "\"",
                    out, d),
            0);
  EXPECT_NE(slurp(d / "budget.csv").find("\ntotal,21\n"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch("exit");
  std::string out;
  std::ofstream(d / "empty.cfg").close();
  EXPECT_EQ(run_cli("budget --config \"" + (d / "empty.cfg").string() + "\" --out-dir \"" + d.string() + "\"", out, d), 2);
  EXPECT_NE(out.find("invalid scenario"), std::string::npos) << out;

  EXPECT_EQ(run_cli("no-such-command", out, d), 2);
  EXPECT_EQ(run_cli("budget --threads 0", out, d), 2);

  // spectrum-chirp on a non-chirped scenario is a domain error
  EXPECT_EQ(run_cli("spectrum-chirp --config \"" + (kScenarios / "spectra.cfg").string() + "\" --out-dir \"" +
                        d.string() + "\"",
                    out, d),
            2);

  // a step bound beyond RK4 stability makes the norm drift
  std::ofstream(d / "unstable.cfg") << "name: unstable\ndrive:\n  pulse: {variant: square, omega_max_MHz: 0.2}\n"
                                       "outputs:\n  max_phase_per_step: 3\n";
  EXPECT_EQ(run_cli("spectrum-square --config \"" + (d / "unstable.cfg").string() + "\" --out-dir \"" + d.string() + "\"",
                    out, d),
            3);
  EXPECT_NE(out.find("norm drifted"), std::string::npos) << out;
}

TEST(Cli, ListScenariosAndVersion) {
  const fs::path d = scratch("list");
  std::string out;
  ASSERT_EQ(run_cli("--list-scenarios", out, d), 0);
  EXPECT_NE(out.find("fig3_300K.cfg\t"), std::string::npos) << out;
  EXPECT_NE(out.find("ghz.cfg\t"), std::string::npos);
  ASSERT_EQ(run_cli("--version", out, d), 0);
  EXPECT_NE(out.find(kToolVersion), std::string::npos);
}

TEST(Cli, SpectrumAndCameraOutputs) {
  const fs::path d = scratch("outputs");
  std::ostringstream out, err;
  RunOptions opt;
  opt.command = "camera-error";
  opt.config = kScenarios / "camera.cfg";
  opt.out_dir = d / "nested" / "dir";
  ASSERT_EQ(run_command(opt, out, err), 0) << err.str();
  const std::string csv = slurp(opt.out_dir / "camera_error.csv");
  EXPECT_NE(csv.find("\nk,t_m_us,n_t_opt,error\n"), std::string::npos);

  opt.command = "spectrum-square";
  opt.config = kScenarios / "spectra.cfg";
  ASSERT_EQ(run_command(opt, out, err), 0) << err.str();
  const std::string spec = slurp(opt.out_dir / "spectrum_square.csv");
  EXPECT_NE(spec.find("\n0,0.999999"), std::string::npos);
  EXPECT_EQ(std::count(spec.begin(), spec.end(), '\n') - std::count(spec.begin(), spec.end(), '#'), 402);
}

TEST(Cli, CsvNumberFormat) {
  EXPECT_EQ(CsvWriter::num(0.1), "0.1");
  EXPECT_EQ(CsvWriter::num(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(CsvWriter::num(2.5e-9), "2.5e-09");
  EXPECT_EQ(CsvWriter::integer(-7), "-7");
}
