#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rydmeas/units.hpp"

namespace rydmeas {

/// SI constants and the two calibration constants used by the scalar
/// estimates. Every field is strictly positive.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;         // J s
  double c = 299792458.0;                // m/s
  double epsilon0 = 8.8541878128e-12;    // F/m
  double k_boltzmann = 1.380649e-23;     // J/K
  double bohr_magneton = 9.2740100783e-24;  // J/T
  double amu = 1.66053906660e-27;        // kg
  double mass_rb87 = 86.909180527 * 1.66053906660e-27;
  double mass_cs133 = 132.905451961 * 1.66053906660e-27;
  double rb_d2_wavelength = 780.241e-9;  // m
  double rb_d2_gamma = units::kTwoPi * 6.06e6;  // s^-1

  // Atomic field unit for the circular-polarization ionization estimate.
  // 5.14e11 reproduces 6050 V/m at n = 48; the rounded 5.1e11 gives 6003 V/m.
  double e_atomic_field = 5.14e11;  // V/m

  // Effective magnetic-dipole matrix element of the Rb clock transition,
  // fixed by 2pi x 0.2 MHz <-> 3500 V/m (about 1.22 Bohr magnetons).
  double mu_eff_microwave = 1.054571817e-34 * units::kTwoPi * 0.2e6 * 299792458.0 / 3500.0;  // J/T

  bool all_positive() const;
};

enum class Species { Rb, Cs };

std::string_view to_string(Species s);
Species parse_species(std::string_view s);

/// Which lifetime set to consult. `Tabulated` is the full lifetime table;
/// `Rounded` holds the rounded values used by the transfer and gate
/// scenarios (50/80/100 us Rb 46s, 55/90/110 us Cs 48s, 250 us Rb 60s and
/// 280 us Cs 64s at 4 K).
enum class LifetimeSource { Tabulated, Rounded };

std::string_view to_string(LifetimeSource s);
LifetimeSource parse_lifetime_source(std::string_view s);

struct LifetimeEntry {
  Species species = Species::Rb;
  std::string state;  // e.g. "46s"
  int n = 0;
  double temperature_k = 0.0;
  double lifetime_us = 0.0;
  double decay_rate_1e3_per_s = 0.0;  // as printed, units of 10^3 s^-1
  LifetimeSource source = LifetimeSource::Tabulated;
};

/// C3/C6 pair-potential coefficients. Label format is "<pair state>:<species
/// pair>", e.g. "Rb46s-Cs48s:RbCs".
struct PairCoefficients {
  std::string label;
  double c3 = 0.0;  // GHz um^3
  double c6 = 0.0;  // GHz um^6
};

/// Built-in Rydberg lifetimes and pair-interaction coefficients. Immutable
/// after construction; the default instance holds the reference tables
/// (table version 1).
class AtomicTables {
 public:
  static constexpr int kVersion = 1;

  AtomicTables(std::vector<LifetimeEntry> lifetimes, std::vector<PairCoefficients> pairs);

  static const AtomicTables& builtin();

  /// Reads a table file (YAML records, see docs/tables.md). Throws DomainError
  /// on malformed records or duplicate keys.
  static AtomicTables load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  std::string to_yaml() const;
  static AtomicTables from_yaml(const std::string& text);

  /// Lifetime in us. Throws LookupError naming every available key.
  double lifetime(Species species, std::string_view state, double temperature_k,
                  LifetimeSource source = LifetimeSource::Tabulated) const;

  /// Coefficients by full label. Throws LookupError naming every available label.
  const PairCoefficients& pair(std::string_view label) const;

  /// Coefficients by pair-state row and species combination, e.g.
  /// ("Rb46s-Cs48s", "RbRb").
  const PairCoefficients& pair(std::string_view pair_state, std::string_view species_pair) const;

  const std::vector<LifetimeEntry>& lifetimes() const { return lifetimes_; }
  const std::vector<PairCoefficients>& pairs() const { return pairs_; }

 private:
  std::vector<LifetimeEntry> lifetimes_;
  std::vector<PairCoefficients> pairs_;
};

/// V(r) = C3/r^3 + C6/r^6 in GHz (cyclic) for r in um. Throws DomainError for r <= 0.
double pair_potential(const PairCoefficients& coeffs, double r_um);

/// Same as pair_potential, returned as angular frequency in rad/us.
double pair_potential_angular(const PairCoefficients& coeffs, double r_um);

struct PairSample {
  double r_um = 0.0;
  double energy_ghz = 0.0;
  double overlap = 1.0;  // g = |<pair|target>|^2
};

/// Weighted linear least squares of energy against (r^-3, r^-6) with weight
/// g, over samples with g >= g_min. Throws DomainError when fewer than two
/// samples are admitted (or any admitted r <= 0), NumericalError when the
/// normal equations are singular.
PairCoefficients fit_pair_coefficients(std::span<const PairSample> samples, double g_min,
                                       std::string label = "fit");

/// tau_ref * (n / n_ref)^3.
double scale_lifetime_n3(double tau_ref_us, int n_ref, int n);

/// E_at / (16 n^4) in V/m: microwave ionization threshold for circular polarization.
double ionization_threshold_circular(int n, const PhysicalConstants& pc = {});

struct MicrowaveField {
  double e_field = 0.0;     // V/m
  double b_field = 0.0;     // T
  double intensity = 0.0;   // W/cm^2
};

/// Field amplitude and plane-wave intensity needed for a magnetic-dipole
/// Rabi frequency omega_max (rad/s).
MicrowaveField microwave_field_and_power(double omega_max_rad_per_s, const PhysicalConstants& pc = {});

}  // namespace rydmeas
