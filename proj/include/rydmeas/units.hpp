#pragma once

#include <numbers>

// Internal convention: angular frequencies in rad/us, times in us, lengths in
// um, hbar = 1. The helpers below are the only place 2*pi factors appear.
namespace rydmeas::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Cyclic MHz (value = Omega / 2pi) to angular rad/us.
constexpr double mhz_to_angular(double mhz) { return kTwoPi * mhz; }
constexpr double angular_to_mhz(double rad_per_us) { return rad_per_us / kTwoPi; }

/// GHz (cyclic) to angular rad/us.
constexpr double ghz_to_angular(double ghz) { return kTwoPi * 1e3 * ghz; }
constexpr double angular_to_ghz(double rad_per_us) { return rad_per_us / (kTwoPi * 1e3); }

/// rad/us <-> rad/s.
constexpr double per_us_to_per_s(double x) { return x * 1e6; }
constexpr double per_s_to_per_us(double x) { return x * 1e-6; }

/// Decay rate in 1/us from a lifetime in us.
constexpr double rate_from_lifetime(double lifetime_us) { return 1.0 / lifetime_us; }

constexpr double us_to_s(double t_us) { return t_us * 1e-6; }
constexpr double s_to_us(double t_s) { return t_s * 1e6; }

}  // namespace rydmeas::units
