#include "rydmeas/pulses.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rydmeas/errors.hpp"
#include "rydmeas/parallel.hpp"

namespace rydmeas {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// log(cosh(x)) without overflow.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

SquarePulse square_pi_pulse(double omega_max) { return {omega_max, kPi / omega_max}; }

SinSquaredPulse sin2_pi_pulse(double omega_max) { return {omega_max, 2.0 * kPi / omega_max}; }

ChirpedSechPulse chirped_sech(double omega_max, double beta, double mu, double delta0, double tau) {
  return {omega_max, beta, mu, tau > 0.0 ? tau : 10.0 / beta, delta0};
}

void validate(const PulseEnvelope& pulse) {
  std::visit(overloaded{
                 [](const auto& p) {
                   if (!(p.omega_max > 0.0)) throw DomainError("pulse: omega_max must be positive");
                   if (!(p.tau > 0.0)) throw DomainError("pulse: tau must be positive");
                 },
                 [](const ChirpedSechPulse& p) {
                   if (!(p.omega_max > 0.0)) throw DomainError("pulse: omega_max must be positive");
                   if (!(p.tau > 0.0)) throw DomainError("pulse: tau must be positive");
                   if (!(p.beta > 0.0)) throw DomainError("pulse: beta must be positive");
                 },
             },
             pulse);
}

double duration(const PulseEnvelope& pulse) {
  return std::visit([](const auto& p) { return p.tau; }, pulse);
}

double peak_amplitude(const PulseEnvelope& pulse) {
  return std::visit([](const auto& p) { return p.omega_max; }, pulse);
}

double carrier_detuning(const PulseEnvelope& pulse) {
  if (const auto* c = std::get_if<ChirpedSechPulse>(&pulse)) return c->delta0;
  return 0.0;
}

double max_detuning(const PulseEnvelope& pulse) {
  if (const auto* c = std::get_if<ChirpedSechPulse>(&pulse)) return std::abs(c->delta0) + std::abs(c->mu * c->beta);
  return 0.0;
}

DriveSample envelope_at(const PulseEnvelope& pulse, double t) {
  return std::visit(
      overloaded{
          [t](const SquarePulse& p) {
            const double a = (t >= 0.0 && t <= p.tau) ? p.omega_max : 0.0;
            return DriveSample{a, 0.0, cplx(a, 0.0)};
          },
          [t](const SinSquaredPulse& p) {
            double a = 0.0;
            if (t >= 0.0 && t <= p.tau) {
              const double s = std::sin(kPi * t / p.tau);
              a = p.omega_max * s * s;
            }
            return DriveSample{a, 0.0, cplx(a, 0.0)};
          },
          [t](const ChirpedSechPulse& p) {
            const double x = p.beta * (t - 0.5 * p.tau);
            const double detuning = p.delta0 + p.mu * p.beta * std::tanh(x);
            if (t < 0.0 || t > p.tau) return DriveSample{0.0, detuning, cplx(0.0, 0.0)};
            const double a = p.omega_max / std::cosh(x);
            const double chi = p.mu * (log_cosh(x) - log_cosh(0.5 * p.beta * p.tau));
            return DriveSample{a, detuning, std::polar(a, chi)};
          },
      },
      pulse);
}

double pulse_area(const PulseEnvelope& pulse) {
  validate(pulse);
  if (const auto* s = std::get_if<SquarePulse>(&pulse)) return s->omega_max * s->tau;
  const double tau = duration(pulse);
  auto f = [&pulse](double t) { return envelope_at(pulse, t).amplitude; };
  double err = 0.0;
  const double area =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, tau, 20, 1e-14, &err);
  if (err > 1e-10) throw NumericalError("pulse_area: quadrature error estimate " + std::to_string(err) + " rad");
  return area;
}

double square_spectrum_analytic(double delta, double omega_max) {
  if (!(omega_max > 0.0)) throw DomainError("square_spectrum_analytic: omega_max must be positive");
  const double x = delta / omega_max;
  const double w = 1.0 + x * x;
  const double s = std::sin(0.5 * kPi * std::sqrt(w));
  return s * s / w;
}

std::array<cplx, 2> two_level_final_state(const PulseEnvelope& pulse, double delta0,
                                          const SpectrumOptions& options) {
  validate(pulse);
  const double tau = duration(pulse);
  const double sweep_offset = carrier_detuning(pulse);
  const bool phase_frame = options.frame == ChirpFrame::PhaseModulated;
  const double scale = peak_amplitude(pulse) + std::abs(delta0) + max_detuning(pulse) + std::abs(sweep_offset);
  const auto steps = static_cast<long>(std::ceil(tau * scale / options.max_phase_per_step));
  const long n = std::max(1L, steps);
  const double dt = tau / static_cast<double>(n);

  // c' = -i H c,  H = [[0, -conj(W)/2], [-W/2, D]].
  auto rhs = [&](double t, const std::array<cplx, 2>& c) {
    const DriveSample d = envelope_at(pulse, t);
    cplx w;
    double det;
    if (phase_frame) {
      w = d.drive;
      det = delta0;
    } else {
      w = cplx(d.amplitude, 0.0);
      det = delta0 + (d.detuning - sweep_offset);
    }
    const cplx i(0.0, 1.0);
    return std::array<cplx, 2>{-i * (-0.5 * std::conj(w) * c[1]), -i * (-0.5 * w * c[0] + det * c[1])};
  };
  auto axpy = [](const std::array<cplx, 2>& y, double h, const std::array<cplx, 2>& k) {
    return std::array<cplx, 2>{y[0] + h * k[0], y[1] + h * k[1]};
  };

  std::array<cplx, 2> c{cplx(1.0, 0.0), cplx(0.0, 0.0)};
  for (long s = 0; s < n; ++s) {
    // exact end point on the last step so the final stage sees the pulse edge
    const double t = dt * static_cast<double>(s);
    const double t_end = s + 1 == n ? tau : dt * static_cast<double>(s + 1);
    const double h = t_end - t;
    const double mid = 0.5 * (t + t_end);
    const auto k1 = rhs(t, c);
    const auto k2 = rhs(mid, axpy(c, 0.5 * h, k1));
    const auto k3 = rhs(mid, axpy(c, 0.5 * h, k2));
    const auto k4 = rhs(t_end, axpy(c, h, k3));
    for (int j = 0; j < 2; ++j) c[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  const double norm = std::norm(c[0]) + std::norm(c[1]);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
    throw NumericalError("two_level_spectrum: norm drifted to " + std::to_string(norm) + " at delta0 = " +
                         std::to_string(delta0) + " rad/us after " + std::to_string(n) + " steps of " +
                         std::to_string(dt) + " us");
  }
  return c;
}

std::vector<double> two_level_spectrum(const PulseEnvelope& pulse, std::span<const double> delta_grid,
                                       const SpectrumOptions& options) {
  if (delta_grid.empty()) throw DomainError("two_level_spectrum: empty detuning grid");
  std::vector<double> out(delta_grid.size());
  parallel_for(delta_grid.size(), options.threads, [&](std::size_t i) {
    out[i] = std::norm(two_level_final_state(pulse, delta_grid[i], options)[1]);
  });
  return out;
}

LandauZener landau_zener(double omega_max, double beta, double mu) {
  if (!(omega_max > 0.0) || !(beta > 0.0) || !(mu > 0.0)) {
    throw DomainError("landau_zener: all parameters must be positive");
  }
  LandauZener lz;
  lz.exponent = 2.0 * kPi * omega_max * omega_max / (4.0 * mu * beta * beta);
  lz.probability = std::exp(-lz.exponent);
  return lz;
}

}  // namespace rydmeas
