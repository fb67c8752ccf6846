#include "rydmeas/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rydmeas/errors.hpp"
#include "rydmeas/parallel.hpp"

namespace rydmeas {

void validate(const ReadoutParams& p) {
  if (!(p.intensity_ratio >= 0.0)) throw DomainError("ReadoutParams: I/I_s must be non-negative");
  if (!(p.gamma > 0.0)) throw DomainError("ReadoutParams: gamma must be positive");
  if (!std::isfinite(p.detuning_ratio)) throw DomainError("ReadoutParams: detuning must be finite");
}

void validate(const CameraModel& c) {
  std::ostringstream err;
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(c.solid_angle_fraction)) err << "solid_angle_fraction outside [0,1]; ";
  if (!unit(c.eta_d)) err << "eta_d outside [0,1]; ";
  if (!unit(c.eta_loss)) err << "eta_loss outside [0,1]; ";
  if (!(c.dark_rate >= 0.0)) err << "dark_rate negative; ";
  if (!(c.read_noise >= 0.0)) err << "read_noise negative; ";
  if (!(c.gain > 0.0)) err << "gain must be positive; ";
  if (c.n_pixels < 1) err << "n_pixels must be >= 1; ";
  if (!unit(c.p_dark) || !unit(c.p_bright) || std::abs(c.p_dark + c.p_bright - 1.0) > 1e-12) {
    err << "p_dark and p_bright must be probabilities summing to 1; ";
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw DomainError("CameraModel: " + msg.substr(0, msg.size() - 2));
}

double scattering_rate(const ReadoutParams& p) {
  validate(p);
  const double s = p.intensity_ratio;
  if (std::isinf(s)) return 0.5 * p.gamma;
  return 0.5 * p.gamma * s / (1.0 + 4.0 * p.detuning_ratio * p.detuning_ratio + s);
}

double photoelectron_rate(double scattering_rate_per_s, const CameraModel& camera) {
  return scattering_rate_per_s * camera.collection_efficiency();
}

double photoelectron_count(double scattering_rate_per_s, const CameraModel& camera, double t_m_s) {
  if (t_m_s < 0.0) throw DomainError("photoelectron_count: t_m must be non-negative");
  return photoelectron_rate(scattering_rate_per_s, camera) * t_m_s;
}

double background_mean(const CameraModel& camera, double t_m_s) {
  return camera.dark_rate * camera.n_pixels * t_m_s;
}

namespace {

int poisson_cutoff(double mean) {
  return static_cast<int>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0));
}

// sum_n P_n(mean) tail(n), where tail(n) = (1 -/+ erf) term for the dark/bright branch.
template <typename Tail>
double poisson_weighted(double mean, int n_max, Tail&& tail) {
  double total = 0.0;
  const double log_mean = mean > 0.0 ? std::log(mean) : 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double pn;
    if (mean == 0.0) {
      pn = n == 0 ? 1.0 : 0.0;
    } else {
      pn = std::exp(-mean + n * log_mean - std::lgamma(n + 1.0));
    }
    if (pn == 0.0 && n > mean) break;
    total += pn * tail(n);
  }
  return total;
}

}  // namespace

double error_probability(const MeasurementModel& model, int k, double t_m_s, double n_t, int extra_terms) {
  const CameraModel& cam = model.camera;
  validate(cam);
  if (k < 1) throw DomainError("error_probability: k must be >= 1");
  if (!(t_m_s > 0.0)) throw DomainError("error_probability: t_m must be positive");

  const double q = photoelectron_count(scattering_rate(model.light), cam, t_m_s);
  const double b = background_mean(cam, t_m_s);
  const double s = k * q + b;
  const double width = std::sqrt(2.0 * cam.n_pixels) * cam.read_noise;

  // erfc(x) = 1 - erf(x); erfc(-x) = 1 + erf(x). With zero read noise the
  // count is exactly n kappa and counts >= n_t read as bright.
  auto one_minus_erf = [&](int n) {
    const double d = n_t - n * cam.gain;
    if (width == 0.0) return d > 0.0 ? 0.0 : 2.0;
    return std::erfc(d / width);
  };
  auto one_plus_erf = [&](int n) {
    const double d = n_t - n * cam.gain;
    if (width == 0.0) return d > 0.0 ? 2.0 : 0.0;
    return std::erfc(-d / width);
  };
  const double dark = poisson_weighted(b, poisson_cutoff(b) + extra_terms, one_minus_erf);
  const double bright = poisson_weighted(s, poisson_cutoff(s) + extra_terms, one_plus_erf);
  const double e = 0.5 * cam.p_dark * dark + 0.5 * cam.p_bright * bright;
  return std::clamp(e, 0.0, 1.0);
}

Threshold optimal_threshold(const MeasurementModel& model, int k, double t_m_s) {
  const CameraModel& cam = model.camera;
  validate(cam);
  const double q = photoelectron_count(scattering_rate(model.light), cam, t_m_s);
  const double s = k * q + background_mean(cam, t_m_s);
  const int top = static_cast<int>(std::ceil(cam.gain * s + 10.0 * cam.read_noise * std::sqrt(cam.n_pixels) + 50.0));
  Threshold best{0, error_probability(model, k, t_m_s, 0.0)};
  for (int n = 1; n <= top; ++n) {
    const double e = error_probability(model, k, t_m_s, n);
    if (e < best.error) best = {n, e};
  }
  return best;
}

std::vector<ErrorCurveRow> error_curve(const MeasurementModel& model, std::span<const int> k_list,
                                       std::span<const double> t_grid_s, int threads) {
  if (k_list.empty() || t_grid_s.empty()) throw DomainError("error_curve: empty k list or time grid");
  for (int k : k_list) {
    if (k < 1) throw DomainError("error_curve: k must be >= 1");
  }
  std::vector<ErrorCurveRow> rows(k_list.size() * t_grid_s.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const int k = k_list[i / t_grid_s.size()];
    const double t = t_grid_s[i % t_grid_s.size()];
    const Threshold th = optimal_threshold(model, k, t);
    rows[i] = {k, t, th.n_t, th.error};
  });
  return rows;
}

double doppler_shift(double wavelength_m, double temperature_k, double mass_kg, const PhysicalConstants& pc) {
  if (!(wavelength_m > 0.0) || !(mass_kg > 0.0) || temperature_k < 0.0) {
    throw DomainError("doppler_shift: wavelength and mass must be positive, temperature non-negative");
  }
  return units::kTwoPi / wavelength_m * std::sqrt(pc.k_boltzmann * temperature_k / mass_kg);
}

double doppler_equilibrium_temperature(const ReadoutParams& params, const PhysicalConstants& pc) {
  validate(params);
  if (params.detuning_ratio == 0.0) throw DomainError("doppler_equilibrium_temperature: diverges at zero detuning");
  if (!(params.intensity_ratio > 0.0)) throw DomainError("doppler_equilibrium_temperature: I/I_s must be positive");
  const double x = 2.0 * params.detuning_ratio;
  return pc.hbar * params.gamma / (4.0 * pc.k_boltzmann) * (1.0 + params.intensity_ratio + x * x) / std::abs(x);
}

double recoil_heating_1d(double scattering_rate_per_s, double t_m_s, double wavelength_m, double mass_kg,
                         const PhysicalConstants& pc) {
  if (scattering_rate_per_s < 0.0 || t_m_s < 0.0 || !(wavelength_m > 0.0) || !(mass_kg > 0.0)) {
    throw DomainError("recoil_heating_1d: invalid input");
  }
  const double k = units::kTwoPi / wavelength_m;
  const double scatters = scattering_rate_per_s * t_m_s;
  return scatters * pc.hbar * pc.hbar * k * k / (3.0 * mass_kg * pc.k_boltzmann);
}

}  // namespace rydmeas
