#include "rydmeas/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rydmeas/errors.hpp"

namespace rydmeas {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += "\n  " + s;
  return out;
}

// Collects field-level problems instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

  bool is_map(const YAML::Node& n, const std::string& path) {
    if (!n || n.IsNull()) return false;
    if (!n.IsMap()) {
      error(path, "expected a mapping");
      return false;
    }
    return true;
  }

  void allow(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> keys) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) error(path + "." + key, "unknown field");
    }
  }

  template <typename T>
  bool get(const YAML::Node& map, const std::string& path, const char* key, T& out) {
    const YAML::Node n = map[key];
    if (!n) return false;
    try {
      out = n.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      error(path + "." + key, std::string("expected ") + type_name<T>());
      return false;
    }
  }

  template <typename T>
  void positive(const std::string& path, T value) {
    if (!(value > T{})) error(path, "must be positive");
  }

  Grid grid(const YAML::Node& map, const std::string& path, const char* key, Grid fallback) {
    const YAML::Node n = map[key];
    if (!n) return fallback;
    const std::string p = path + "." + key;
    if (!is_map(n, p)) return fallback;
    allow(n, p, {"start", "stop", "count"});
    Grid g = fallback;
    get(n, p, "start", g.start);
    get(n, p, "stop", g.stop);
    get(n, p, "count", g.count);
    if (g.count < 1) error(p + ".count", "must be >= 1");
    if (g.count > 1 && !(g.stop > g.start)) error(p, "stop must exceed start");
    return g;
  }

 private:
  template <typename T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_same_v<T, int>) return "an integer";
    else if constexpr (std::is_same_v<T, bool>) return "true or false";
    else if constexpr (std::is_same_v<T, std::uint64_t>) return "a non-negative integer";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list";
  }

  std::vector<std::string>& errors_;
};

void parse_geometry(Reader& r, const YAML::Node& n, TransferSetup& s) {
  const std::string p = "geometry";
  if (!r.is_map(n, p)) return;
  r.allow(n, p, {"k", "r_am_um", "positions_um", "jitter"});
  if (r.get(n, p, "k", s.k) && (s.k < 1 || s.k > Basis::kMaxMeasuring)) {
    r.error(p + ".k", "must be in 1.." + std::to_string(Basis::kMaxMeasuring));
  }
  if (r.get(n, p, "r_am_um", s.r_am_um)) r.positive(p + ".r_am_um", s.r_am_um);
  if (const auto pos = n["positions_um"]) {
    if (!pos.IsSequence()) {
      r.error(p + ".positions_um", "expected a list of [x, y] pairs");
    } else {
      s.positions_um.clear();
      for (std::size_t i = 0; i < pos.size(); ++i) {
        const auto& xy = pos[i];
        if (!xy.IsSequence() || xy.size() != 2) {
          r.error(p + ".positions_um[" + std::to_string(i) + "]", "expected [x, y]");
          continue;
        }
        try {
          s.positions_um.push_back({xy[0].as<double>(), xy[1].as<double>()});
        } catch (const YAML::Exception&) {
          r.error(p + ".positions_um[" + std::to_string(i) + "]", "coordinates must be numbers");
        }
      }
      if (!n["k"]) s.k = static_cast<int>(s.positions_um.size());
      if (static_cast<int>(s.positions_um.size()) != s.k) {
        r.error(p + ".positions_um", "lists " + std::to_string(s.positions_um.size()) + " atoms but k = " +
                                         std::to_string(s.k));
      }
    }
  }
  if (const auto j = n["jitter"]) {
    const std::string jp = p + ".jitter";
    if (r.is_map(j, jp)) {
      r.allow(j, jp, {"sigma_um", "seed"});
      r.get(j, jp, "sigma_um", s.jitter_sigma_um);
      if (s.jitter_sigma_um < 0.0) r.error(jp + ".sigma_um", "must be non-negative");
      r.get(j, jp, "seed", s.jitter_seed);
    }
  }
}

void parse_species(Reader& r, const YAML::Node& n, Scenario& sc) {
  const std::string p = "species";
  if (!r.is_map(n, p)) return;
  TransferSetup& s = sc.setup;
  r.allow(n, p, {"pair_state", "rb_state", "cs_state", "temperature_K", "lifetimes", "rb_lifetime_us",
                 "cs_lifetime_us", "tables", "lossless"});
  r.get(n, p, "pair_state", s.pair_state);
  r.get(n, p, "rb_state", s.rb_state);
  r.get(n, p, "cs_state", s.cs_state);
  r.get(n, p, "temperature_K", s.temperature_k);
  std::string src;
  if (r.get(n, p, "lifetimes", src)) {
    try {
      s.lifetimes = parse_lifetime_source(src);
    } catch (const DomainError& e) {
      r.error(p + ".lifetimes", e.what());
    }
  }
  double v = 0.0;
  if (r.get(n, p, "rb_lifetime_us", v)) {
    r.positive(p + ".rb_lifetime_us", v);
    s.rb_lifetime_us = v;
  }
  if (r.get(n, p, "cs_lifetime_us", v)) {
    r.positive(p + ".cs_lifetime_us", v);
    s.cs_lifetime_us = v;
  }
  std::string tables;
  if (r.get(n, p, "tables", tables)) sc.tables_path = sc.source_dir / tables;
  r.get(n, p, "lossless", s.lossless);
}

void parse_pulse(Reader& r, const YAML::Node& n, TransferSetup& s) {
  const std::string p = "drive.pulse";
  if (!r.is_map(n, p)) return;
  r.allow(n, p, {"variant", "omega_max_MHz", "tau_us", "beta_MHz", "mu", "delta0_MHz"});
  std::string variant;
  if (!r.get(n, p, "variant", variant)) {
    r.error(p + ".variant", "required (square, sin2 or chirped_sech)");
    return;
  }
  double omega_max = 0.0, tau = 0.0;
  if (!r.get(n, p, "omega_max_MHz", omega_max)) r.error(p + ".omega_max_MHz", "required");
  else r.positive(p + ".omega_max_MHz", omega_max);
  if (r.get(n, p, "tau_us", tau)) r.positive(p + ".tau_us", tau);
  if (!(omega_max > 0.0)) return;
  const double w = units::mhz_to_angular(omega_max);
  if (variant == "square") {
    auto pulse = square_pi_pulse(w);
    if (tau > 0.0) pulse.tau = tau;
    s.pulse = pulse;
  } else if (variant == "sin2") {
    auto pulse = sin2_pi_pulse(w);
    if (tau > 0.0) pulse.tau = tau;
    s.pulse = pulse;
  } else if (variant == "chirped_sech") {
    double beta = 0.0, mu = 0.0, delta0 = 0.0;
    if (!r.get(n, p, "beta_MHz", beta)) r.error(p + ".beta_MHz", "required for chirped_sech");
    else r.positive(p + ".beta_MHz", beta);
    if (!r.get(n, p, "mu", mu)) r.error(p + ".mu", "required for chirped_sech");
    r.get(n, p, "delta0_MHz", delta0);
    if (beta > 0.0) {
      s.pulse = chirped_sech(w, units::mhz_to_angular(beta), mu, units::mhz_to_angular(delta0), tau);
    }
  } else {
    r.error(p + ".variant", "'" + variant + "' is not one of square, sin2, chirped_sech");
  }
}

void parse_drive(Reader& r, const YAML::Node& n, TransferSetup& s) {
  const std::string p = "drive";
  if (!r.is_map(n, p)) return;
  r.allow(n, p, {"omega_r_MHz", "delta_r_MHz", "delta_MHz", "chirp_frame", "pulse"});
  r.get(n, p, "omega_r_MHz", s.omega_r_mhz);
  r.get(n, p, "delta_r_MHz", s.delta_r_mhz);
  r.get(n, p, "delta_MHz", s.delta_mhz);
  if (s.omega_r_mhz < 0.0) r.error(p + ".omega_r_MHz", "must be non-negative");
  if (s.omega_r_mhz > 0.0 && !(s.delta_r_mhz > s.omega_r_mhz)) r.error(p + ".delta_r_MHz", "must exceed omega_r_MHz");
  std::string frame;
  if (r.get(n, p, "chirp_frame", frame)) {
    if (frame == "detuning") s.frame = ChirpFrame::DetuningSweep;
    else if (frame == "phase") s.frame = ChirpFrame::PhaseModulated;
    else r.error(p + ".chirp_frame", "expected detuning or phase");
  }
  parse_pulse(r, n["pulse"], s);
}

void parse_readout(Reader& r, const YAML::Node& n, MeasurementModel& m) {
  const std::string p = "readout";
  if (!r.is_map(n, p)) return;
  r.allow(n, p, {"intensity_ratio", "detuning_ratio", "gamma_MHz", "camera"});
  r.get(n, p, "intensity_ratio", m.light.intensity_ratio);
  r.get(n, p, "detuning_ratio", m.light.detuning_ratio);
  double gamma_mhz = 0.0;
  if (r.get(n, p, "gamma_MHz", gamma_mhz)) {
    r.positive(p + ".gamma_MHz", gamma_mhz);
    m.light.gamma = units::kTwoPi * gamma_mhz * 1e6;
  }
  if (m.light.intensity_ratio < 0.0) r.error(p + ".intensity_ratio", "must be non-negative");

  const YAML::Node c = n["camera"];
  const std::string cp = p + ".camera";
  if (!r.is_map(c, cp)) return;
  r.allow(c, cp, {"solid_angle_fraction", "eta_d", "eta_loss", "dark_rate_per_s", "read_noise", "gain",
                  "n_pixels", "p_dark", "p_bright"});
  CameraModel& cam = m.camera;
  r.get(c, cp, "solid_angle_fraction", cam.solid_angle_fraction);
  r.get(c, cp, "eta_d", cam.eta_d);
  r.get(c, cp, "eta_loss", cam.eta_loss);
  r.get(c, cp, "dark_rate_per_s", cam.dark_rate);
  r.get(c, cp, "read_noise", cam.read_noise);
  r.get(c, cp, "gain", cam.gain);
  r.get(c, cp, "n_pixels", cam.n_pixels);
  r.get(c, cp, "p_dark", cam.p_dark);
  r.get(c, cp, "p_bright", cam.p_bright);
  try {
    validate(cam);
  } catch (const DomainError& e) {
    r.error(cp, e.what());
  }
}

void parse_budget(Reader& r, const YAML::Node& n, Scenario& sc) {
  const std::string p = "budget";
  if (!r.is_map(n, p)) return;
  r.allow(n, p, {"hadamard_time_us", "cz_time_us", "n_hadamard_layers", "n_cz", "cs_rydberg_pulses_time_us",
                 "transfer_time_us", "camera_integration_time_us", "camera_min_exposure_us",
                 "camera_readout_time_us", "ancilla_reset_avg_us", "measurement_reset_avg_us",
                 "include_camera_readout", "exposure_rule"});
  CycleBudget& b = sc.budget;
  r.get(n, p, "hadamard_time_us", b.hadamard_time);
  r.get(n, p, "cz_time_us", b.cz_time);
  r.get(n, p, "n_hadamard_layers", b.n_hadamard_layers);
  r.get(n, p, "n_cz", b.n_cz);
  r.get(n, p, "cs_rydberg_pulses_time_us", b.cs_rydberg_pulses_time);
  r.get(n, p, "transfer_time_us", b.transfer_time);
  r.get(n, p, "camera_integration_time_us", b.camera_integration_time);
  r.get(n, p, "camera_min_exposure_us", b.camera_min_exposure);
  r.get(n, p, "camera_readout_time_us", b.camera_readout_time);
  r.get(n, p, "ancilla_reset_avg_us", b.ancilla_reset_avg);
  r.get(n, p, "measurement_reset_avg_us", b.measurement_reset_avg);
  r.get(n, p, "include_camera_readout", sc.include_camera_readout);
  std::string rule;
  if (r.get(n, p, "exposure_rule", rule)) {
    if (rule == "min_exposure_floor") sc.exposure_rule = ExposureRule::MinExposureFloor;
    else if (rule == "integration_only") sc.exposure_rule = ExposureRule::IntegrationOnly;
    else r.error(p + ".exposure_rule", "expected min_exposure_floor or integration_only");
  }
  try {
    validate(b);
  } catch (const DomainError& e) {
    r.error(p, e.what());
  }
}

std::vector<int> int_list(Reader& r, const YAML::Node& map, const std::string& path, const char* key,
                          std::vector<int> fallback, int lo, int hi) {
  const YAML::Node n = map[key];
  if (!n) return fallback;
  const std::string p = path + "." + key;
  if (!n.IsSequence() || n.size() == 0) {
    r.error(p, "expected a non-empty list of integers");
    return fallback;
  }
  std::vector<int> out;
  for (const auto& item : n) {
    try {
      const int v = item.as<int>();
      if (v < lo || v > hi) r.error(p, "value " + std::to_string(v) + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
      out.push_back(v);
    } catch (const YAML::Exception&) {
      r.error(p, "expected integers");
    }
  }
  return out;
}

void parse_outputs(Reader& r, const YAML::Node& n, Scenario& sc) {
  const std::string p = "outputs";
  if (!r.is_map(n, p)) return;
  r.allow(n, p, {"detuning_grid_MHz", "samples", "ancilla", "k_list", "t_grid_us", "ghz_k", "potential_pair_states",
                 "potential_r_um", "max_phase_per_step"});
  sc.detuning_grid_mhz = r.grid(n, p, "detuning_grid_MHz", sc.detuning_grid_mhz);
  if (r.get(n, p, "samples", sc.samples) && sc.samples < 2) r.error(p + ".samples", "must be >= 2");
  if (const auto a = n["ancilla"]) {
    if (!a.IsSequence() || a.size() == 0) {
      r.error(p + ".ancilla", "expected a non-empty list of rydberg/zero/one");
    } else {
      sc.ancilla_branches.clear();
      for (const auto& item : a) {
        const auto v = item.as<std::string>("");
        if (v == "rydberg") sc.ancilla_branches.push_back(Level::Rydberg);
        else if (v == "zero") sc.ancilla_branches.push_back(Level::Zero);
        else if (v == "one") sc.ancilla_branches.push_back(Level::One);
        else r.error(p + ".ancilla", "'" + v + "' is not rydberg, zero or one");
      }
    }
  }
  sc.k_list = int_list(r, n, p, "k_list", sc.k_list, 1, 1000);
  sc.t_grid_us = r.grid(n, p, "t_grid_us", sc.t_grid_us);
  if (!(sc.t_grid_us.start > 0.0)) r.error(p + ".t_grid_us.start", "must be positive");
  sc.ghz_k = int_list(r, n, p, "ghz_k", sc.ghz_k, 1, Basis::kMaxMeasuring);
  if (const auto ps = n["potential_pair_states"]) {
    if (!ps.IsSequence() || ps.size() == 0) {
      r.error(p + ".potential_pair_states", "expected a non-empty list");
    } else {
      sc.potential_pair_states.clear();
      for (const auto& item : ps) sc.potential_pair_states.push_back(item.as<std::string>(""));
    }
  }
  sc.potential_r_um = r.grid(n, p, "potential_r_um", sc.potential_r_um);
  if (!(sc.potential_r_um.start > 0.0)) r.error(p + ".potential_r_um.start", "must be positive");
  if (r.get(n, p, "max_phase_per_step", sc.max_phase_per_step)) r.positive(p + ".max_phase_per_step", sc.max_phase_per_step);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error("invalid scenario:" + join(errors)), errors_(std::move(errors)) {}

std::vector<double> Grid::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return v;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Scenario::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(source_text)));
  return buf;
}

AtomicTables Scenario::tables() const {
  return tables_path ? AtomicTables::load(*tables_path) : AtomicTables::builtin();
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& source_dir) {
  std::vector<std::string> errors;
  Reader r(errors);
  Scenario sc;
  sc.source_text = text;
  sc.source_dir = source_dir;

  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("<file>: not valid YAML: ") + e.what()});
  }
  if (!root || root.IsNull()) {
    throw ConfigError({"<file>: empty scenario; expected a mapping with at least 'name'", "name: required"});
  }
  if (!root.IsMap()) throw ConfigError({"<file>: expected a mapping at top level"});

  r.allow(root, "<root>", {"name", "description", "geometry", "species", "drive", "readout", "budget", "outputs"});
  if (!r.get(root, "<root>", "name", sc.name) || sc.name.empty()) r.error("name", "required");
  r.get(root, "<root>", "description", sc.description);

  parse_geometry(r, root["geometry"], sc.setup);
  parse_species(r, root["species"], sc);
  parse_drive(r, root["drive"], sc.setup);
  parse_readout(r, root["readout"], sc.readout);
  parse_budget(r, root["budget"], sc);
  parse_outputs(r, root["outputs"], sc);

  // Cross-references into the tables.
  {
    try {
      const AtomicTables tables = sc.tables();
      try {
        tables.pair(sc.setup.pair_state, "RbCs");
        tables.pair(sc.setup.pair_state, "RbRb");
      } catch (const LookupError&) {
        r.error("species.pair_state", "unknown pair state '" + sc.setup.pair_state + "'");
      }
      if (!sc.setup.lossless) {
        try {
          resolve_lifetimes(sc.setup, tables);
        } catch (const LookupError& e) {
          r.error("species", e.what());
        }
      }
      for (const auto& ps : sc.potential_pair_states) {
        try {
          tables.pair(ps, "RbCs");
        } catch (const LookupError&) {
          r.error("outputs.potential_pair_states", "unknown pair state '" + ps + "'");
        }
      }
    } catch (const DomainError& e) {
      r.error("species.tables", e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open scenario file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

}  // namespace rydmeas
