#pragma once

#include <span>
#include <vector>

#include "rydmeas/atomic_data.hpp"

namespace rydmeas {

// Readout quantities use SI: seconds, s^-1, K, m, kg.

/// Readout light. gamma is the excited-state decay rate of the cycling
/// transition in s^-1 (2 pi x 6.06 MHz for Rb D2).
struct ReadoutParams {
  double intensity_ratio = 5.0;   // I / I_s, lumped over all beams
  double detuning_ratio = -0.5;   // Delta / gamma
  double gamma = units::kTwoPi * 6.06e6;
};

/// Photon collection, detector noise and digitisation. Defaults are the
/// qCMOS camera in standard readout mode.
struct CameraModel {
  double solid_angle_fraction = 0.14;  // Omega_d / 4 pi
  double eta_d = 0.54;
  double eta_loss = 0.9;
  double dark_rate = 0.016;            // s^-1 per pixel
  double read_noise = 4.0;             // camera counts per pixel (rms)
  double gain = 1.0 / 0.107;           // camera counts per photoelectron
  int n_pixels = 9;
  double p_dark = 0.5;
  double p_bright = 0.5;

  double collection_efficiency() const { return eta_d * eta_loss * solid_angle_fraction; }
};

void validate(const ReadoutParams& params);
void validate(const CameraModel& camera);

struct MeasurementModel {
  ReadoutParams light;
  CameraModel camera;
};

/// (gamma/2) s / (1 + 4 (Delta/gamma)^2 + s), s = I/I_s, in s^-1.
double scattering_rate(const ReadoutParams& params);

/// q / t_m: photoelectrons per second per bright atom.
double photoelectron_rate(double scattering_rate_per_s, const CameraModel& camera);

/// q(t_m) = r_s eta (Omega_d / 4 pi) t_m.
double photoelectron_count(double scattering_rate_per_s, const CameraModel& camera, double t_m_s);

/// Mean dark counts over the whole N_p-pixel region: b0 N_p t_m.
double background_mean(const CameraModel& camera, double t_m_s);

/// Thresholding error for k bright atoms after integrating t_m seconds with a
/// cut at n_t camera counts (Poisson photoelectrons, Gaussian read noise of
/// sqrt(N_p) sigma). Poisson sums run to ceil(mean + 12 sqrt(mean) + 30)
/// plus `extra_terms`.
double error_probability(const MeasurementModel& model, int k, double t_m_s, double n_t, int extra_terms = 0);

struct Threshold {
  int n_t = 0;
  double error = 1.0;
};

/// Integer scan of n_t over [0, ceil(kappa s + 10 sigma sqrt(N_p) + 50)];
/// lowest n_t wins ties.
Threshold optimal_threshold(const MeasurementModel& model, int k, double t_m_s);

struct ErrorCurveRow {
  int k = 0;
  double t_m = 0.0;  // s
  int n_t = 0;
  double error = 0.0;
};

/// Optimised error for every (k, t_m) pair, k-major order.
std::vector<ErrorCurveRow> error_curve(const MeasurementModel& model, std::span<const int> k_list,
                                       std::span<const double> t_grid_s, int threads = 1);

/// One-dimensional rms Doppler shift (2 pi / lambda) sqrt(k_B T / m), rad/s.
double doppler_shift(double wavelength_m, double temperature_k, double mass_kg, const PhysicalConstants& pc = {});

/// One-dimensional Doppler-cooling equilibrium temperature
/// (hbar gamma / 4 k_B) (1 + s + (2 Delta/gamma)^2) / (2 |Delta| / gamma).
/// Throws DomainError at Delta = 0 (divergent) or s <= 0.
double doppler_equilibrium_temperature(const ReadoutParams& params, const PhysicalConstants& pc = {});

/// Temperature rise per axis from N = r_s t_m scattering events, each adding
/// two recoil energies shared over three axes: N hbar^2 k^2 / (3 m k_B).
double recoil_heating_1d(double scattering_rate_per_s, double t_m_s, double wavelength_m, double mass_kg,
                         const PhysicalConstants& pc = {});

}  // namespace rydmeas
