#include "rydmeas/setup.hpp"

#include "rydmeas/errors.hpp"

namespace rydmeas {

TransferSetup measurement_mapping_setup(double temperature_k, LifetimeSource lifetimes) {
  TransferSetup s;
  s.temperature_k = temperature_k;
  s.lifetimes = lifetimes;
  return s;
}

TransferSetup cnot_setup(int k, LifetimeSource lifetimes) {
  TransferSetup s;
  s.k = k;
  s.r_am_um = 4.0;
  s.pair_state = "Rb60s-Cs64s";
  s.rb_state = "60s";
  s.cs_state = "64s";
  s.temperature_k = 4.0;
  s.lifetimes = lifetimes;
  s.omega_r_mhz = 10.0;
  s.delta_r_mhz = 25.0;
  s.pulse = chirped_sech(units::mhz_to_angular(0.6), units::mhz_to_angular(0.18), 3.0, 0.0, 7.0);
  return s;
}

Layout build_layout(const TransferSetup& setup) {
  Layout layout = setup.positions_um.empty() ? ring_layout(setup.k, setup.r_am_um)
                                             : explicit_layout(setup.positions_um);
  if (layout.k != setup.k) {
    throw DomainError("explicit positions list " + std::to_string(layout.k) + " atoms but k = " +
                      std::to_string(setup.k));
  }
  if (setup.jitter_sigma_um > 0.0) layout = jitter(layout, setup.jitter_sigma_um, setup.jitter_seed);
  return layout;
}

std::pair<double, double> resolve_lifetimes(const TransferSetup& setup, const AtomicTables& tables) {
  const double rb = setup.rb_lifetime_us
                        ? *setup.rb_lifetime_us
                        : tables.lifetime(Species::Rb, setup.rb_state, setup.temperature_k, setup.lifetimes);
  const double cs = setup.cs_lifetime_us
                        ? *setup.cs_lifetime_us
                        : tables.lifetime(Species::Cs, setup.cs_state, setup.temperature_k, setup.lifetimes);
  return {rb, cs};
}

SystemSpec build_system(const TransferSetup& setup, const AtomicTables& tables) {
  const Layout layout = build_layout(setup);
  SystemSpec spec;
  spec.k = setup.k;
  spec.interaction = interaction_matrix(layout, tables.pair(setup.pair_state, "RbCs"),
                                        tables.pair(setup.pair_state, "RbRb"));
  spec.omega_r = units::mhz_to_angular(setup.omega_r_mhz);
  spec.delta_r = units::mhz_to_angular(setup.delta_r_mhz);
  spec.delta = units::mhz_to_angular(setup.delta_mhz);
  spec.microwave = setup.pulse;
  spec.frame = setup.frame;
  if (!setup.lossless) {
    const auto [rb, cs] = resolve_lifetimes(setup, tables);
    spec.gamma_rm = units::rate_from_lifetime(rb);
    spec.gamma_ra = units::rate_from_lifetime(cs);
  }
  validate(spec);
  return spec;
}

}  // namespace rydmeas
