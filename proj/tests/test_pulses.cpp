#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rydmeas/errors.hpp"
#include "rydmeas/pulses.hpp"
#include "rydmeas/units.hpp"

using namespace rydmeas;
using units::mhz_to_angular;

namespace {

const double kOmega = mhz_to_angular(0.2);

ChirpedSechPulse gate_chirp() {
  return chirped_sech(mhz_to_angular(0.6), mhz_to_angular(0.18), 3.0, 0.0, 7.0);
}

std::vector<double> mhz_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = mhz_to_angular(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

TEST(Envelope, Sin2PeakAndSupport) {
  const auto p = sin2_pi_pulse(kOmega);
  EXPECT_NEAR(envelope_at(p, p.tau / 2).amplitude, kOmega, 1e-12);
  EXPECT_EQ(envelope_at(p, -0.1).amplitude, 0.0);
  EXPECT_EQ(envelope_at(p, p.tau + 0.1).amplitude, 0.0);
  EXPECT_NEAR(p.tau, 2 * std::numbers::pi / kOmega, 1e-12);
}

TEST(Envelope, ChirpCentreAndEnd) {
  const double beta = mhz_to_angular(0.18);
  const auto p = chirped_sech(mhz_to_angular(0.6), beta, 3.0, mhz_to_angular(0.1));
  EXPECT_NEAR(p.tau, 10.0 / beta, 1e-12);
  const auto mid = envelope_at(p, p.tau / 2);
  EXPECT_NEAR(mid.amplitude, p.omega_max, 1e-12);
  EXPECT_NEAR(mid.detuning, p.delta0, 1e-12);
  const auto end = envelope_at(p, p.tau);
  EXPECT_NEAR((end.detuning - p.delta0) / (p.mu * beta), std::tanh(5.0), 1e-12);
  EXPECT_NEAR((end.detuning - p.delta0) / (p.mu * beta), 0.9999, 1e-4);
}

TEST(Envelope, ChirpPhaseIsIntegratedSweep) {
  const auto p = gate_chirp();
  // chi(t) = int_0^t mu beta tanh(beta (s - tau/2)) ds, checked by trapezoid.
  const int n = 200000;
  double chi = 0.0;
  const double h = p.tau / n;
  for (int i = 0; i < n; ++i) {
    const double a = p.mu * p.beta * std::tanh(p.beta * (i * h - p.tau / 2));
    const double b = p.mu * p.beta * std::tanh(p.beta * ((i + 1) * h - p.tau / 2));
    chi += 0.5 * (a + b) * h;
    if (i + 1 == n / 4 || i + 1 == n) {
      const auto s = envelope_at(p, (i + 1) * h);
      EXPECT_NEAR(std::arg(s.drive), std::remainder(chi, 2 * std::numbers::pi), 1e-8);
      EXPECT_NEAR(std::abs(s.drive), s.amplitude, 1e-12);
    }
  }
}

TEST(Envelope, RejectsInvalidPulses) {
  EXPECT_THROW(validate(PulseEnvelope{SquarePulse{0.0, 1.0}}), DomainError);
  EXPECT_THROW(validate(PulseEnvelope{SinSquaredPulse{1.0, -1.0}}), DomainError);
  EXPECT_THROW(validate(PulseEnvelope{ChirpedSechPulse{1.0, 0.0, 3.0, 7.0, 0.0}}), DomainError);
}

TEST(Area, PiPulses) {
  EXPECT_NEAR(pulse_area(square_pi_pulse(kOmega)), std::numbers::pi, 1e-8 * std::numbers::pi);
  EXPECT_NEAR(pulse_area(sin2_pi_pulse(kOmega)), std::numbers::pi, 1e-8 * std::numbers::pi);
}

TEST(Area, TruncatedSechClosedForm) {
  const auto p = gate_chirp();
  // int_0^tau sech(beta (t - tau/2)) dt = (2 / beta) gd(beta tau / 2), gd(x) = 2 atan(tanh(x / 2)).
  const double x = p.beta * p.tau / 2;
  const double exact = p.omega_max * 2.0 / p.beta * 2.0 * std::atan(std::tanh(x / 2));
  EXPECT_NEAR(pulse_area(p), exact, 1e-10);
  EXPECT_NEAR(exact, 10.217, 1e-3);
  EXPECT_LT(exact, std::numbers::pi * p.omega_max / p.beta);
}

TEST(SquareAnalytic, Examples) {
  EXPECT_NEAR(square_spectrum_analytic(0.0, kOmega), 1.0, 1e-15);
  EXPECT_NEAR(square_spectrum_analytic(std::sqrt(3.0) * kOmega, kOmega), 0.0, 1e-15);
  EXPECT_NEAR(square_spectrum_analytic(kOmega, kOmega), 0.5 * std::pow(std::sin(std::numbers::pi / std::sqrt(2.0)), 2),
              1e-15);
  EXPECT_NEAR(square_spectrum_analytic(kOmega, kOmega), 0.3166, 1e-4);
}

TEST(SquareAnalytic, MatchesRabiOracle) {
  for (double d : mhz_grid(-2, 2, 81)) {
    EXPECT_NEAR(square_spectrum_analytic(d, kOmega), oracle::rabi_probability(d, kOmega, std::numbers::pi / kOmega),
                1e-14);
  }
}

TEST(Spectrum, SquareNumericMatchesAnalytic) {
  const auto grid = mhz_grid(-2, 2, 401);
  SpectrumOptions o;
  o.threads = 4;
  const auto p = two_level_spectrum(square_pi_pulse(kOmega), grid, o);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(p[i], square_spectrum_analytic(grid[i], kOmega), 1e-6) << units::angular_to_mhz(grid[i]);
  }
}

TEST(Spectrum, Sin2TailsBelowSquareTails) {
  const auto grid = mhz_grid(-2, 2, 401);
  const auto sq = two_level_spectrum(square_pi_pulse(kOmega), grid);
  const auto s2 = two_level_spectrum(sin2_pi_pulse(kOmega), grid);
  int checked = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i]) > 3 * kOmega) {
      // compare against the square-pulse envelope 1 / (1 + (d/W)^2), which bounds its oscillating tail
      EXPECT_LE(s2[i], 1.0 / (1.0 + std::pow(grid[i] / kOmega, 2))) << units::angular_to_mhz(grid[i]);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
  // the tails as a whole: integrated sin^2 tail far below the square one
  double tail_sq = 0.0, tail_s2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i]) > 3 * kOmega) {
      tail_sq += sq[i];
      tail_s2 += s2[i];
    }
  }
  EXPECT_LT(tail_s2, 0.1 * tail_sq);
}

TEST(Spectrum, PiPulsesPeakAtOne) {
  const std::vector<double> zero{0.0};
  EXPECT_NEAR(two_level_spectrum(square_pi_pulse(kOmega), zero)[0], 1.0, 1e-6);
  EXPECT_NEAR(two_level_spectrum(sin2_pi_pulse(kOmega), zero)[0], 1.0, 1e-6);
}

TEST(Spectrum, BoundedAndSymmetric) {
  const auto grid = mhz_grid(-2, 2, 201);
  for (const PulseEnvelope& pulse : {PulseEnvelope{square_pi_pulse(kOmega)}, PulseEnvelope{sin2_pi_pulse(kOmega)},
                                     PulseEnvelope{gate_chirp()}}) {
    const auto p = two_level_spectrum(pulse, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(p[i], 0.0);
      EXPECT_LE(p[i], 1.0);
      EXPECT_NEAR(p[i], p[grid.size() - 1 - i], 1e-9);
    }
  }
}

TEST(Spectrum, ChirpBowlerHat) {
  const auto p = gate_chirp();
  const double mu_beta = units::angular_to_mhz(p.mu * p.beta);  // 0.54 MHz
  const auto grid = mhz_grid(-2, 2, 401);
  SpectrumOptions o;
  o.threads = 4;
  const auto s = two_level_spectrum(p, grid, o);
  double half_width = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = std::abs(units::angular_to_mhz(grid[i]));
    if (d <= 0.3) {
      EXPECT_GE(s[i], 0.99) << d;
    }
    if (d >= 0.8) {
      EXPECT_LE(s[i], 1e-2) << d;
    }
    if (s[i] >= 0.5) half_width = std::max(half_width, d);
  }
  EXPECT_NEAR(half_width, mu_beta, 0.1 * mu_beta);
}

TEST(Spectrum, ChirpFramesAgree) {
  const auto p = gate_chirp();
  const auto grid = mhz_grid(-1.5, 1.5, 31);
  SpectrumOptions sweep, phase;
  sweep.max_phase_per_step = phase.max_phase_per_step = 0.002;
  phase.frame = ChirpFrame::PhaseModulated;
  for (double d : grid) {
    const auto a = two_level_final_state(p, d, sweep);
    const auto b = two_level_final_state(p, d, phase);
    EXPECT_NEAR(std::abs(a[0] - b[0]), 0.0, 1e-7);
    EXPECT_NEAR(std::abs(a[1] - b[1]), 0.0, 1e-7);
  }
}

TEST(Spectrum, Errors) {
  const std::vector<double> empty;
  EXPECT_THROW(two_level_spectrum(square_pi_pulse(kOmega), empty), DomainError);
}

TEST(LandauZener, GateParameters) {
  const auto lz = landau_zener(mhz_to_angular(0.6), mhz_to_angular(0.18), 3.0);
  EXPECT_NEAR(lz.exponent, 5.8, 0.1);
  EXPECT_LT(lz.probability, 3e-3);
  const auto weak = landau_zener(mhz_to_angular(0.36), mhz_to_angular(0.18), 3.0);
  EXPECT_NEAR(weak.exponent, 2.09, 0.01);
  EXPECT_NEAR(weak.probability, 0.123, 0.002);
  const auto dbl = landau_zener(mhz_to_angular(1.2), mhz_to_angular(0.18), 3.0);
  EXPECT_NEAR(dbl.exponent / lz.exponent, 4.0, 1e-12);
}
