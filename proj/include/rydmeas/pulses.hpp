#pragma once

#include <array>
#include <complex>
#include <span>
#include <variant>
#include <vector>

namespace rydmeas {

// All frequencies rad/us, times us.

/// Omega(t) = omega_max on [0, tau].
struct SquarePulse {
  double omega_max = 0.0;
  double tau = 0.0;
};

/// Omega(t) = omega_max sin^2(pi t / tau) on [0, tau]. Area pi when tau = 2 pi / omega_max.
struct SinSquaredPulse {
  double omega_max = 0.0;
  double tau = 0.0;
};

/// |Omega(t)| = omega_max sech(beta (t - tau/2)) with detuning sweep
/// delta0 + mu beta tanh(beta (t - tau/2)), truncated to [0, tau].
struct ChirpedSechPulse {
  double omega_max = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double tau = 0.0;
  double delta0 = 0.0;
};

using PulseEnvelope = std::variant<SquarePulse, SinSquaredPulse, ChirpedSechPulse>;

/// Square pi pulse: tau = pi / omega_max.
SquarePulse square_pi_pulse(double omega_max);
/// sin^2 pi pulse: tau = 2 pi / omega_max.
SinSquaredPulse sin2_pi_pulse(double omega_max);
/// Chirped sech pulse; tau defaults to 10 / beta when not given.
ChirpedSechPulse chirped_sech(double omega_max, double beta, double mu, double delta0 = 0.0,
                              double tau = 0.0);

/// Throws DomainError unless omega_max, tau (and beta) are positive.
void validate(const PulseEnvelope& pulse);

double duration(const PulseEnvelope& pulse);
double peak_amplitude(const PulseEnvelope& pulse);
/// Carrier detuning built into the pulse (delta0 for the chirp, 0 otherwise).
double carrier_detuning(const PulseEnvelope& pulse);
/// Upper bound of |detuning(t)| over the pulse.
double max_detuning(const PulseEnvelope& pulse);

struct DriveSample {
  double amplitude = 0.0;  // |Omega(t)|
  double detuning = 0.0;   // pulse detuning: delta0 + nu(t) for the chirp, 0 otherwise
  /// |Omega(t)| exp(i chi(t)), chi(t) = int_0^t nu. Driving with this at the
  /// constant detuning delta0 is the same dynamics as driving with the real
  /// amplitude at the swept detuning, in a frame that coincides with the lab
  /// frame at t = 0 and t = tau.
  std::complex<double> drive;
};

/// Envelope value at any real t (zero outside [0, tau]).
DriveSample envelope_at(const PulseEnvelope& pulse, double t);

/// Integral of |Omega(t)| over [0, tau] by adaptive Gauss-Kronrod quadrature.
double pulse_area(const PulseEnvelope& pulse);

/// Closed-form final |1> population of a square pi pulse at detuning delta.
double square_spectrum_analytic(double delta, double omega_max);

/// How the two-level integrator represents a chirp.
enum class ChirpFrame {
  DetuningSweep,   // real amplitude, time-dependent detuning
  PhaseModulated,  // complex drive at constant carrier detuning
};

struct SpectrumOptions {
  double max_phase_per_step = 0.01;  // rad; step size criterion
  ChirpFrame frame = ChirpFrame::DetuningSweep;
  int threads = 1;
};

/// Final |1> population of a two-level atom started in |0>, for each carrier
/// detuning in the grid (for the chirp the grid value replaces delta0).
/// Throws NumericalError if the integrator loses unitarity.
std::vector<double> two_level_spectrum(const PulseEnvelope& pulse, std::span<const double> delta_grid,
                                       const SpectrumOptions& options = {});

/// Final two-level amplitudes (c0, c1) at one carrier detuning.
std::array<std::complex<double>, 2> two_level_final_state(const PulseEnvelope& pulse, double delta0,
                                                          const SpectrumOptions& options = {});

struct LandauZener {
  double exponent = 0.0;
  double probability = 0.0;
};

/// Exponent 2 pi omega_max^2 / (4 mu beta^2) and exp(-exponent).
LandauZener landau_zener(double omega_max, double beta, double mu);

}  // namespace rydmeas
