#include "rydmeas/atomic_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rydmeas/errors.hpp"

namespace rydmeas {

bool PhysicalConstants::all_positive() const {
  for (double v : {hbar, c, epsilon0, k_boltzmann, bohr_magneton, amu, mass_rb87, mass_cs133,
                   rb_d2_wavelength, rb_d2_gamma, e_atomic_field, mu_eff_microwave}) {
    if (!(v > 0.0)) return false;
  }
  return true;
}

std::string_view to_string(Species s) { return s == Species::Rb ? "Rb" : "Cs"; }

Species parse_species(std::string_view s) {
  if (s == "Rb") return Species::Rb;
  if (s == "Cs") return Species::Cs;
  throw DomainError("unknown species '" + std::string(s) + "' (expected Rb or Cs)");
}

std::string_view to_string(LifetimeSource s) {
  return s == LifetimeSource::Tabulated ? "tabulated" : "rounded";
}

LifetimeSource parse_lifetime_source(std::string_view s) {
  if (s == "tabulated") return LifetimeSource::Tabulated;
  if (s == "rounded") return LifetimeSource::Rounded;
  throw DomainError("unknown lifetime source '" + std::string(s) +
                    "' (expected tabulated or rounded)");
}

namespace {

int principal_n(std::string_view state) {
  int n = 0;
  std::size_t i = 0;
  while (i < state.size() && std::isdigit(static_cast<unsigned char>(state[i]))) {
    n = 10 * n + (state[i] - '0');
    ++i;
  }
  if (i == 0) throw DomainError("state label '" + std::string(state) + "' has no principal quantum number");
  return n;
}

LifetimeEntry row(Species sp, const char* state, double t, double tau, double rate,
                  LifetimeSource src = LifetimeSource::Tabulated) {
  return {sp, state, principal_n(state), t, tau, rate, src};
}

std::string lifetime_key(const LifetimeEntry& e) {
  std::ostringstream os;
  os << to_string(e.species) << ' ' << e.state << " @ " << e.temperature_k << " K ("
     << to_string(e.source) << ')';
  return os.str();
}

}  // namespace

AtomicTables::AtomicTables(std::vector<LifetimeEntry> lifetimes, std::vector<PairCoefficients> pairs)
    : lifetimes_(std::move(lifetimes)), pairs_(std::move(pairs)) {
  std::set<std::string> seen;
  for (const auto& p : pairs_) {
    if (!seen.insert(p.label).second) throw DomainError("duplicate pair label '" + p.label + "'");
    if (p.c3 < 0.0 || p.c6 < 0.0) throw DomainError("pair '" + p.label + "' has a negative coefficient");
  }
  seen.clear();
  for (const auto& e : lifetimes_) {
    if (!(e.lifetime_us > 0.0)) throw DomainError("non-positive lifetime for " + lifetime_key(e));
    if (!seen.insert(lifetime_key(e)).second) throw DomainError("duplicate lifetime row " + lifetime_key(e));
  }
}

const AtomicTables& AtomicTables::builtin() {
  using enum Species;
  constexpr auto R = LifetimeSource::Rounded;
  static const AtomicTables tables(
      {
          row(Rb, "46s", 300, 52.1, 19.2), row(Cs, "48s", 300, 53.8, 18.6),
          row(Rb, "46s", 77, 85.2, 11.7),  row(Cs, "48s", 77, 87.2, 11.5),
          row(Rb, "46s", 4, 107, 9.32),    row(Cs, "48s", 4, 109, 9.16),
          row(Rb, "60s", 300, 101, 9.90),  row(Cs, "64s", 300, 112, 8.93),
          row(Rb, "60s", 77, 183, 5.46),   row(Cs, "64s", 77, 202, 4.95),
          row(Rb, "60s", 4, 249, 4.02),    row(Cs, "64s", 4, 275, 3.64),
          // Rounded values used by the transfer and gate scenarios.
          row(Rb, "46s", 300, 50, 20.0, R),  row(Cs, "48s", 300, 55, 1e3 / 55, R),
          row(Rb, "46s", 77, 80, 12.5, R),   row(Cs, "48s", 77, 90, 1e3 / 90, R),
          row(Rb, "46s", 4, 100, 10.0, R),   row(Cs, "48s", 4, 110, 1e3 / 110, R),
          row(Rb, "60s", 4, 250, 4.0, R),    row(Cs, "64s", 4, 280, 1e3 / 280, R),
      },
      {
          {"Rb46s-Cs48s:RbRb", 0.000108, 5.65},
          {"Rb46s-Cs48s:CsCs", 0.000341, 6.86},
          {"Rb46s-Cs48s:RbCs", 1.87, 8.867},
          {"Rb60s-Cs64s:RbRb", 0.1388, 129.8},
          {"Rb60s-Cs64s:CsCs", 0.664, 178.7},
          {"Rb60s-Cs64s:RbCs", 6.955, 7.466},
      });
  return tables;
}

double AtomicTables::lifetime(Species species, std::string_view state, double temperature_k,
                              LifetimeSource source) const {
  for (const auto& e : lifetimes_) {
    if (e.species == species && e.state == state && e.source == source &&
        std::abs(e.temperature_k - temperature_k) < 1e-9) {
      return e.lifetime_us;
    }
  }
  std::ostringstream os;
  os << "no lifetime for " << to_string(species) << ' ' << state << " @ " << temperature_k << " K ("
     << to_string(source) << "); available:";
  for (const auto& e : lifetimes_) os << "\n  " << lifetime_key(e);
  throw LookupError(os.str());
}

const PairCoefficients& AtomicTables::pair(std::string_view label) const {
  auto it = std::find_if(pairs_.begin(), pairs_.end(), [&](const auto& p) { return p.label == label; });
  if (it != pairs_.end()) return *it;
  std::string msg = "no pair coefficients labelled '" + std::string(label) + "'; available:";
  for (const auto& p : pairs_) msg += "\n  " + p.label;
  throw LookupError(msg);
}

const PairCoefficients& AtomicTables::pair(std::string_view pair_state, std::string_view species_pair) const {
  return pair(std::string(pair_state) + ":" + std::string(species_pair));
}

std::string AtomicTables::to_yaml() const {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << kVersion;
  out << YAML::Key << "lifetimes" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : lifetimes_) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "species" << YAML::Value << std::string(to_string(e.species));
    out << YAML::Key << "state" << YAML::Value << e.state;
    out << YAML::Key << "temperature_K" << YAML::Value << e.temperature_k;
    out << YAML::Key << "lifetime_us" << YAML::Value << e.lifetime_us;
    out << YAML::Key << "decay_rate_1e3_per_s" << YAML::Value << e.decay_rate_1e3_per_s;
    out << YAML::Key << "source" << YAML::Value << std::string(to_string(e.source));
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "pairs" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : pairs_) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << p.label;
    out << YAML::Key << "c3" << YAML::Value << p.c3;
    out << YAML::Key << "c6" << YAML::Value << p.c6;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

AtomicTables AtomicTables::from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw DomainError(std::string("table file is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw DomainError("table file must be a mapping with 'lifetimes' and 'pairs'");
  std::vector<LifetimeEntry> lifetimes;
  std::vector<PairCoefficients> pairs;
  try {
    for (const auto& n : root["lifetimes"]) {
      LifetimeEntry e;
      e.species = parse_species(n["species"].as<std::string>());
      e.state = n["state"].as<std::string>();
      e.n = principal_n(e.state);
      e.temperature_k = n["temperature_K"].as<double>();
      e.lifetime_us = n["lifetime_us"].as<double>();
      e.decay_rate_1e3_per_s =
          n["decay_rate_1e3_per_s"] ? n["decay_rate_1e3_per_s"].as<double>() : 1e3 / e.lifetime_us;
      e.source = n["source"] ? parse_lifetime_source(n["source"].as<std::string>())
                             : LifetimeSource::Tabulated;
      lifetimes.push_back(std::move(e));
    }
    for (const auto& n : root["pairs"]) {
      pairs.push_back({n["label"].as<std::string>(), n["c3"].as<double>(), n["c6"].as<double>()});
    }
  } catch (const YAML::Exception& e) {
    throw DomainError(std::string("malformed table record: ") + e.what());
  }
  return AtomicTables(std::move(lifetimes), std::move(pairs));
}

AtomicTables AtomicTables::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read table file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_yaml(ss.str());
}

void AtomicTables::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write table file " + path.string());
  out << to_yaml();
}

double pair_potential(const PairCoefficients& coeffs, double r_um) {
  if (!(r_um > 0.0)) throw DomainError("pair_potential: separation must be positive");
  const double r3 = r_um * r_um * r_um;
  return coeffs.c3 / r3 + coeffs.c6 / (r3 * r3);
}

double pair_potential_angular(const PairCoefficients& coeffs, double r_um) {
  return units::ghz_to_angular(pair_potential(coeffs, r_um));
}

PairCoefficients fit_pair_coefficients(std::span<const PairSample> samples, double g_min, std::string label) {
  // Columns are normalised before forming the 2x2 normal equations; r^-3 and
  // r^-6 differ by orders of magnitude over the fit window.
  std::vector<PairSample> kept;
  for (const auto& s : samples) {
    if (s.overlap < g_min) continue;
    if (!(s.r_um > 0.0)) throw DomainError("fit_pair_coefficients: separation must be positive");
    kept.push_back(s);
  }
  if (kept.size() < 2) {
    throw DomainError("fit_pair_coefficients: insufficient data (" + std::to_string(kept.size()) +
                      " samples with g >= g_min, need 2)");
  }
  double n3 = 0.0, n6 = 0.0;
  for (const auto& s : kept) {
    const double x = 1.0 / std::pow(s.r_um, 3);
    n3 += s.overlap * x * x;
    n6 += s.overlap * x * x * x * x;
  }
  if (!(n3 > 0.0) || !(n6 > 0.0)) throw NumericalError("fit_pair_coefficients: degenerate fit (zero total weight)");
  n3 = std::sqrt(n3);
  n6 = std::sqrt(n6);

  double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (const auto& s : kept) {
    const double x = std::pow(s.r_um, -3) / n3;
    const double y = std::pow(s.r_um, -6) / n6;
    a11 += s.overlap * x * x;
    a12 += s.overlap * x * y;
    a22 += s.overlap * y * y;
    b1 += s.overlap * x * s.energy_ghz;
    b2 += s.overlap * y * s.energy_ghz;
  }
  const double det = a11 * a22 - a12 * a12;
  if (!(std::abs(det) > 1e-13 * a11 * a22)) {
    throw NumericalError("fit_pair_coefficients: degenerate fit (singular normal equations)");
  }
  const double u = (a22 * b1 - a12 * b2) / det;
  const double v = (a11 * b2 - a12 * b1) / det;
  return {std::move(label), u / n3, v / n6};
}

double scale_lifetime_n3(double tau_ref_us, int n_ref, int n) {
  if (n_ref < 1 || n < 1) throw DomainError("scale_lifetime_n3: principal quantum numbers must be >= 1");
  const double ratio = static_cast<double>(n) / n_ref;
  return tau_ref_us * ratio * ratio * ratio;
}

double ionization_threshold_circular(int n, const PhysicalConstants& pc) {
  if (n < 1) throw DomainError("ionization_threshold_circular: n must be >= 1");
  const double n2 = static_cast<double>(n) * n;
  return pc.e_atomic_field / (16.0 * n2 * n2);
}

MicrowaveField microwave_field_and_power(double omega_max_rad_per_s, const PhysicalConstants& pc) {
  if (!(omega_max_rad_per_s > 0.0)) throw DomainError("microwave_field_and_power: omega_max must be positive");
  MicrowaveField f;
  f.b_field = pc.hbar * omega_max_rad_per_s / pc.mu_eff_microwave;
  f.e_field = pc.c * f.b_field;
  f.intensity = 0.5 * pc.epsilon0 * pc.c * f.e_field * f.e_field * 1e-4;  // W/m^2 -> W/cm^2
  return f;
}

}  // namespace rydmeas
