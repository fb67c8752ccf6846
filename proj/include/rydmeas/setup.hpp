#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rydmeas/atomic_data.hpp"
#include "rydmeas/dynamics.hpp"
#include "rydmeas/geometry.hpp"

namespace rydmeas {

/// Physical description of one ancilla + k measuring atoms, in lab units
/// (MHz cyclic, um, K). `build_system` turns it into a SystemSpec.
struct TransferSetup {
  // geometry
  int k = 5;
  double r_am_um = 2.5;
  std::vector<Point2> positions_um;  // explicit layout when non-empty
  double jitter_sigma_um = 0.0;
  std::uint64_t jitter_seed = 0;

  // species / states
  std::string pair_state = "Rb46s-Cs48s";
  std::string rb_state = "46s";
  std::string cs_state = "48s";
  double temperature_k = 300.0;
  LifetimeSource lifetimes = LifetimeSource::Rounded;
  std::optional<double> rb_lifetime_us;  // overrides the table
  std::optional<double> cs_lifetime_us;

  // drive
  double omega_r_mhz = 6.0;
  double delta_r_mhz = 15.0;
  double delta_mhz = 0.0;
  PulseEnvelope pulse = sin2_pi_pulse(units::mhz_to_angular(0.2));  // rad/us, us
  ChirpFrame frame = ChirpFrame::DetuningSweep;

  bool lossless = false;  // zero both decay rates
};

/// Ancilla-conditioned measuring-atom transfer: five atoms at 2.5 um, 46s/48s
/// states, 6/15 MHz dressing, sin^2 pi pulse of 0.2 MHz peak.
TransferSetup measurement_mapping_setup(double temperature_k,
                                        LifetimeSource lifetimes = LifetimeSource::Rounded);

/// CNOT_k / GHZ preparation: k atoms at 4 um, 60s/64s states at 4 K,
/// 10/25 MHz dressing, chirped sech pulse (0.6 MHz, beta 0.18 MHz, mu 3, 7 us).
TransferSetup cnot_setup(int k, LifetimeSource lifetimes = LifetimeSource::Rounded);

/// Resolved layout (ring or explicit, with jitter applied).
Layout build_layout(const TransferSetup& setup);

/// Rb and Cs Rydberg lifetimes in us after applying overrides.
std::pair<double, double> resolve_lifetimes(const TransferSetup& setup, const AtomicTables& tables);

SystemSpec build_system(const TransferSetup& setup, const AtomicTables& tables = AtomicTables::builtin());

}  // namespace rydmeas
