#include "rydmeas/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "rydmeas/errors.hpp"
#include "rydmeas/pulses.hpp"
#include "rydmeas/readout.hpp"

namespace rydmeas {

namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"spectrum-square", "spectrum-sin2", "spectrum-chirp",
                                              "fig3",            "ghz",           "camera-error",
                                              "readout-physics", "budget",        "potential"};
  return names;
}

CsvWriter::CsvWriter(const fs::path& path, const Scenario& scenario, const std::string& command,
                     const std::vector<std::string>& columns)
    : file_(path), path_(path) {
  if (!file_) throw DomainError("cannot write " + path.string());
  file_ << "# rydmeas " << kToolVersion << "\n";
  file_ << "# command: " << command << "\n";
  file_ << "# scenario: " << scenario.name << " (hash " << scenario.hash() << ")\n";
  std::istringstream src(scenario.source_text);
  for (std::string line; std::getline(src, line);) {
    if (!line.empty()) file_ << "# | " << line << "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) file_ << (i ? "," : "") << columns[i];
  file_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) file_ << (i ? "," : "") << cells[i];
  file_ << "\n";
}

std::string CsvWriter::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string CsvWriter::integer(long long v) { return std::to_string(v); }

Scenario default_scenario(const std::string& command) {
  Scenario sc;
  sc.name = "default-" + command;
  sc.source_text = "name: " + sc.name + "\n";
  if (command == "ghz") {
    sc.setup = cnot_setup(1);
  }
  return sc;
}

std::vector<fs::path> list_scenarios(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".cfg") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

const auto num = &CsvWriter::num;
const auto integer = &CsvWriter::integer;

const char* level_name(Level l) {
  switch (l) {
    case Level::Zero: return "zero";
    case Level::One: return "one";
    case Level::Rydberg: return "rydberg";
  }
  return "?";
}

std::vector<double> mhz_grid_angular(const Grid& g) {
  std::vector<double> v = g.values();
  for (double& x : v) x = units::mhz_to_angular(x);
  return v;
}

int run_spectrum(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  const PulseEnvelope& configured = sc.setup.pulse;
  const double omega = peak_amplitude(configured);
  PulseEnvelope pulse;
  std::string file;
  if (opt.command == "spectrum-square") {
    pulse = square_pi_pulse(omega);
    file = "spectrum_square.csv";
  } else if (opt.command == "spectrum-sin2") {
    pulse = sin2_pi_pulse(omega);
    file = "spectrum_sin2.csv";
  } else {
    if (!std::holds_alternative<ChirpedSechPulse>(configured)) {
      throw DomainError("drive.pulse: spectrum-chirp needs variant chirped_sech");
    }
    pulse = configured;
    file = "spectrum_chirp.csv";
  }
  const std::vector<double> grid = mhz_grid_angular(sc.detuning_grid_mhz);
  SpectrumOptions so;
  so.frame = sc.setup.frame;
  so.max_phase_per_step = sc.max_phase_per_step;
  so.threads = opt.threads;
  const std::vector<double> p = two_level_spectrum(pulse, grid, so);

  CsvWriter csv(opt.out_dir / file, sc, opt.command, {"delta0_MHz", "probability"});
  double peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({num(units::angular_to_mhz(grid[i])), num(p[i])});
    peak = std::max(peak, p[i]);
  }
  out << opt.command << ": " << grid.size() << " points, peak probability " << num(peak) << ", pulse area "
      << num(pulse_area(pulse)) << " rad, duration " << num(duration(pulse)) << " us\n";
  out << "wrote " << (opt.out_dir / file).string() << "\n";
  return exit_code::kOk;
}

int run_fig3(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  const AtomicTables tables = sc.tables();
  const SystemSpec spec = build_system(sc.setup, tables);
  const double t_final = duration(sc.setup.pulse);
  EvolveOptions eo;
  eo.max_phase_per_step = sc.max_phase_per_step;
  eo.threads = opt.threads;

  for (Level branch : sc.ancilla_branches) {
    const Trajectory traj = evolve(spec, product_state(spec.k, branch, Level::Zero), t_final, sc.samples, eo);
    const std::string file = std::string("fig3_") + level_name(branch) + ".csv";
    CsvWriter csv(opt.out_dir / file, sc, opt.command,
                  {"time_us", "atom_index", "pop_0", "pop_1", "pop_r", "norm"});
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      const double norm = traj.norm(s);
      for (int atom = 0; atom <= spec.k; ++atom) {
        csv.row({num(traj.times[s]), integer(atom), num(traj.population(s, atom, Level::Zero)),
                 num(traj.population(s, atom, Level::One)), num(traj.population(s, atom, Level::Rydberg)),
                 num(norm)});
      }
    }
    const TransferReport rep = transfer_report(traj, spec);
    const auto [lo, hi] = std::minmax_element(rep.final_one.begin(), rep.final_one.end());
    out << "ancilla " << level_name(branch) << ": final pop_1 min " << num(*lo) << " max " << num(*hi)
        << ", max Rb Rydberg " << num(rep.max_rb_rydberg) << " (bound " << num(rep.rydberg_bound)
        << "), norm loss " << num(rep.norm_loss) << "\n";
    out << "wrote " << (opt.out_dir / file).string() << "\n";
  }
  return exit_code::kOk;
}

int run_ghz(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  const AtomicTables tables = sc.tables();
  EvolveOptions eo;
  eo.max_phase_per_step = sc.max_phase_per_step;
  eo.threads = opt.threads;

  TransferSetup one = sc.setup;
  one.k = 1;
  one.positions_um.clear();
  const double phi0 = extract_dynamical_phase(build_system(one, tables), eo);

  CsvWriter csv(opt.out_dir / "ghz.csv", sc, opt.command, {"k", "fidelity", "fidelity_lossless", "phi0_rad"});
  for (int k : sc.ghz_k) {
    TransferSetup s = sc.setup;
    s.k = k;
    s.positions_um.clear();
    TransferSetup lossless = s;
    lossless.lossless = true;
    const double f = ghz_fidelity(run_ghz_sequence(build_system(s, tables), eo), k, phi0);
    const double fl = ghz_fidelity(run_ghz_sequence(build_system(lossless, tables), eo), k, phi0);
    csv.row({integer(k), num(f), num(fl), num(phi0)});
    out << "k=" << k << " F=" << num(f) << " F_lossless=" << num(fl) << "\n";
  }
  out << "phi0 = " << num(phi0) << " rad\n";
  out << "wrote " << (opt.out_dir / "ghz.csv").string() << "\n";
  return exit_code::kOk;
}

int run_camera_error(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  std::vector<double> t_s = sc.t_grid_us.values();
  for (double& t : t_s) t = units::us_to_s(t);
  const auto rows = error_curve(sc.readout, sc.k_list, t_s, opt.threads);
  CsvWriter csv(opt.out_dir / "camera_error.csv", sc, opt.command, {"k", "t_m_us", "n_t_opt", "error"});
  for (const auto& r : rows) csv.row({integer(r.k), num(units::s_to_us(r.t_m)), integer(r.n_t), num(r.error)});
  out << "camera-error: " << rows.size() << " rows\n";
  out << "wrote " << (opt.out_dir / "camera_error.csv").string() << "\n";
  return exit_code::kOk;
}

int run_readout_physics(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  const PhysicalConstants pc;
  const double r_s = scattering_rate(sc.readout.light);
  const double q_rate = photoelectron_rate(r_s, sc.readout.camera);
  const double t_eq = doppler_equilibrium_temperature(sc.readout.light, pc);
  const double heating = recoil_heating_1d(r_s, 25e-6, pc.rb_d2_wavelength, pc.mass_rb87, pc);
  const double shift_lo = doppler_shift(pc.rb_d2_wavelength, 1e-6, pc.mass_rb87, pc);
  const double shift_hi = doppler_shift(pc.rb_d2_wavelength, 10e-6, pc.mass_rb87, pc);
  const MicrowaveField mw = microwave_field_and_power(units::per_us_to_per_s(units::mhz_to_angular(0.2)), pc);

  const std::vector<std::array<std::string, 3>> rows{
      {"r_s", num(r_s), "s^-1"},
      {"q_rate", num(q_rate), "s^-1 per atom"},
      {"T_eq", num(t_eq * 1e6), "uK"},
      {"heating_at_25us", num(heating * 1e6), "uK"},
      {"doppler_shift_band_1uK", num(shift_lo / units::kTwoPi / 1e3), "kHz (cyclic)"},
      {"doppler_shift_band_10uK", num(shift_hi / units::kTwoPi / 1e3), "kHz (cyclic)"},
      {"ionization_threshold_n48", num(ionization_threshold_circular(48, pc)), "V/m"},
      {"ionization_threshold_n64", num(ionization_threshold_circular(64, pc)), "V/m"},
      {"microwave_E_0p2MHz", num(mw.e_field), "V/m"},
      {"microwave_intensity_0p2MHz", num(mw.intensity), "W/cm^2"},
  };
  CsvWriter csv(opt.out_dir / "readout_physics.csv", sc, opt.command, {"key", "value", "unit"});
  for (const auto& r : rows) {
    csv.row({r[0], r[1], r[2]});
    out << r[0] << " = " << r[1] << " " << r[2] << "\n";
  }
  out << "wrote " << (opt.out_dir / "readout_physics.csv").string() << "\n";
  return exit_code::kOk;
}

int run_budget(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  const bool include = sc.include_camera_readout && !opt.no_camera_readout;
  const ExposureRule rule = opt.exposure_rule.value_or(sc.exposure_rule);
  const CycleBudget& b = sc.budget;
  const CycleTime t = cycle_time(b, include, rule);
  const double exposure = rule == ExposureRule::MinExposureFloor
                              ? std::max(b.camera_integration_time, b.camera_min_exposure)
                              : b.camera_integration_time;

  const std::vector<std::pair<std::string, double>> items{
      {"hadamard_layers", b.n_hadamard_layers * b.hadamard_time},
      {"cz_gates", b.n_cz * b.cz_time},
      {"cs_rydberg_pulses", b.cs_rydberg_pulses_time},
      {"transfer", b.transfer_time},
      {"camera_exposure", exposure},
      {"camera_readout", include ? b.camera_readout_time : 0.0},
      {"reset", t.reset},
  };
  CsvWriter csv(opt.out_dir / "budget.csv", sc, opt.command, {"item", "time_us"});
  out << "item                 time_us\n";
  for (const auto& [name, v] : items) {
    csv.row({name, num(v)});
    char line[64];
    std::snprintf(line, sizeof line, "%-20s %8.2f\n", name.c_str(), v);
    out << line;
  }
  const std::vector<std::pair<std::string, double>> totals{
      {"t_a", t.gates}, {"t_b", t.measurement}, {"t_c", t.reset}, {"total", t.total}};
  for (const auto& [name, v] : totals) csv.row({name, num(v)});
  out << "exposure_rule=" << (rule == ExposureRule::MinExposureFloor ? "min_exposure_floor" : "integration_only")
      << "\ncamera_readout=" << (include ? "true" : "false") << "\n";
  for (const auto& [name, v] : totals) out << name << "=" << num(v) << "\n";
  return exit_code::kOk;
}

int run_potential(const Scenario& sc, const RunOptions& opt, std::ostream& out) {
  const AtomicTables tables = sc.tables();
  const std::vector<double> r = sc.potential_r_um.values();
  CsvWriter csv(opt.out_dir / "potential.csv", sc, opt.command,
                {"pair_state", "r_um", "rbrb_GHz", "cscs_GHz", "rbcs_GHz", "ratio_rbcs_rbrb"});
  for (const auto& ps : sc.potential_pair_states) {
    const auto& rbrb = tables.pair(ps, "RbRb");
    const auto& cscs = tables.pair(ps, "CsCs");
    const auto& rbcs = tables.pair(ps, "RbCs");
    for (double x : r) {
      const double a = pair_potential(rbrb, x);
      const double c = pair_potential(rbcs, x);
      csv.row({ps, num(x), num(a), num(pair_potential(cscs, x)), num(c), num(a != 0.0 ? c / a : INFINITY)});
    }
  }
  out << "potential: " << sc.potential_pair_states.size() * r.size() << " rows\n";
  out << "wrote " << (opt.out_dir / "potential.csv").string() << "\n";
  return exit_code::kOk;
}

}  // namespace

int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), opt.command) == names.end()) {
      throw DomainError("unknown subcommand '" + opt.command + "'");
    }
    if (opt.threads < 1) throw DomainError("--threads must be >= 1");
    Scenario sc = opt.config ? load_scenario(*opt.config) : default_scenario(opt.command);
    if (opt.seed) sc.setup.jitter_seed = *opt.seed;
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) throw DomainError("cannot create output directory " + opt.out_dir.string() + ": " + ec.message());

    if (opt.command.starts_with("spectrum-")) return run_spectrum(sc, opt, out);
    if (opt.command == "fig3") return run_fig3(sc, opt, out);
    if (opt.command == "ghz") return run_ghz(sc, opt, out);
    if (opt.command == "camera-error") return run_camera_error(sc, opt, out);
    if (opt.command == "readout-physics") return run_readout_physics(sc, opt, out);
    if (opt.command == "budget") return run_budget(sc, opt, out);
    return run_potential(sc, opt, out);
  } catch (const ConfigError& e) {
    err << "error: invalid scenario\n";
    for (const auto& m : e.errors()) err << "  " << m << "\n";
    return exit_code::kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_code::kNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  }
}

}  // namespace rydmeas
