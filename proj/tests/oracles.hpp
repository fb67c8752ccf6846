#pragma once

// Reference implementations written independently of the library, used only
// by the tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Rabi formula for a constant drive of strength w and detuning d over time t.
inline double rabi_probability(double d, double w, double t) {
  const double g = std::sqrt(w * w + d * d);
  const double s = std::sin(0.5 * g * t);
  return w * w / (g * g) * s * s;
}

// Chord between ring sites i and j of a k-atom ring of radius r.
inline double chord(int i, int j, int k, double r) {
  return 2.0 * r * std::abs(std::sin(kPi * (i - j) / k));
}

// Weighted least squares via QR on the sqrt(w)-scaled design matrix.
inline std::pair<double, double> weighted_fit(const std::vector<double>& r, const std::vector<double>& e,
                                              const std::vector<double>& w) {
  Eigen::MatrixXd a(r.size(), 2);
  Eigen::VectorXd b(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double s = std::sqrt(w[i]);
    a(i, 0) = s / std::pow(r[i], 3);
    a(i, 1) = s / std::pow(r[i], 6);
    b(i) = s * e[i];
  }
  const Eigen::Vector2d x = a.colPivHouseholderQr().solve(b);
  return {x(0), x(1)};
}

// Dense Hamiltonian for one Cs atom and one Rb atom (basis index cs + 3 rb),
// time independent: constant real microwave drive w, carrier detuning d.
inline Eigen::MatrixXcd pair_hamiltonian(double w, double d, double omega_r, double delta_r, double b0,
                                         double gamma_rm, double gamma_ra) {
  using C = std::complex<double>;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(9, 9);
  auto idx = [](int cs, int rb) { return cs + 3 * rb; };
  for (int cs = 0; cs < 3; ++cs) {
    h(idx(cs, 1), idx(cs, 1)) += d;
    h(idx(cs, 2), idx(cs, 2)) += C(d + delta_r, -0.5 * gamma_rm);
    if (cs == 2) {
      for (int rb = 0; rb < 3; ++rb) h(idx(2, rb), idx(2, rb)) += C(0.0, -0.5 * gamma_ra);
      h(idx(2, 2), idx(2, 2)) += b0;
    }
    h(idx(cs, 1), idx(cs, 0)) += -0.5 * w;
    h(idx(cs, 0), idx(cs, 1)) += -0.5 * w;
    h(idx(cs, 2), idx(cs, 1)) += -0.5 * omega_r;
    h(idx(cs, 1), idx(cs, 2)) += -0.5 * omega_r;
  }
  return h;
}

inline Eigen::VectorXcd propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  const Eigen::MatrixXcd u = (std::complex<double>(0.0, -t) * h).exp();
  return u * psi;
}

struct McResult {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Direct sampling of the thresholded camera readout: a dark or bright atom
// set is drawn with the given priors, photoelectrons are Poisson, camera
// counts add Gaussian read noise over n_pixels, counts >= n_t read bright.
inline McResult readout_error_mc(double q_per_atom, int k, double background, double gain, double read_noise,
                                 int n_pixels, double p_dark, double n_t, std::int64_t samples,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution dark(p_dark);
  std::poisson_distribution<long> pd(background);
  std::poisson_distribution<long> pb(k * q_per_atom + background);
  std::normal_distribution<double> noise(0.0, read_noise * std::sqrt(static_cast<double>(n_pixels)));
  std::int64_t errors = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const bool is_dark = dark(rng);
    const long n = is_dark ? pd(rng) : pb(rng);
    const double counts = gain * n + noise(rng);
    const bool bright = counts >= n_t;
    if (bright == is_dark) ++errors;
  }
  const double p = static_cast<double>(errors) / samples;
  return {p, std::sqrt(std::max(p * (1.0 - p), 1.0 / samples) / samples)};
}

}  // namespace oracle
