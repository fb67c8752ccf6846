#include "rydmeas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rydmeas/errors.hpp"
#include "rydmeas/parallel.hpp"

namespace rydmeas {

namespace {

std::size_t pow3(int n) {
  std::size_t p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

int rb_digit(std::size_t m, std::size_t stride) { return static_cast<int>((m / stride) % 3); }

}  // namespace

void validate(const SystemSpec& spec) {
  std::ostringstream err;
  if (spec.k < 1) err << "k must be >= 1; ";
  if (spec.interaction.k() != spec.k) err << "interaction matrix has " << spec.interaction.k() << " atoms, spec k = " << spec.k << "; ";
  if (static_cast<int>(spec.interaction.b.size()) != spec.interaction.k()) err << "interaction matrix b is not k x k; ";
  if (spec.gamma_rm < 0.0 || spec.gamma_ra < 0.0) err << "decay rates must be non-negative; ";
  if (spec.omega_r < 0.0) err << "omega_r must be non-negative; ";
  if (spec.omega_r > 0.0 && !(spec.delta_r > spec.omega_r)) err << "dressing requires delta_r > omega_r; ";
  const std::string msg = err.str();
  if (!msg.empty()) throw DomainError("SystemSpec: " + msg.substr(0, msg.size() - 2));
  validate(spec.microwave);
}

// ---------------------------------------------------------------------------
// Basis

Basis::Basis(int k) : k_(k) {
  if (k < 1 || k > kMaxMeasuring) {
    throw CapacityError("Basis: k = " + std::to_string(k) + " outside supported range 1.." +
                        std::to_string(kMaxMeasuring));
  }
  dim_ = pow3(k + 1);
  strides_.resize(k + 1);
  for (int a = 0; a <= k; ++a) strides_[a] = pow3(a);
}

Level Basis::level(std::size_t index, int atom) const {
  return static_cast<Level>((index / strides_[atom]) % 3);
}

std::size_t Basis::index(std::span<const Level> levels) const {
  if (static_cast<int>(levels.size()) != k_ + 1) throw DomainError("Basis::index: expected k+1 levels");
  std::size_t idx = 0;
  for (int a = 0; a <= k_; ++a) idx += static_cast<std::size_t>(levels[a]) * strides_[a];
  return idx;
}

std::size_t Basis::with_level(std::size_t index, int atom, Level to) const {
  const auto from = static_cast<std::size_t>(level(index, atom));
  return index - from * strides_[atom] + static_cast<std::size_t>(to) * strides_[atom];
}

// ---------------------------------------------------------------------------
// States

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

StateVector zero_state(int k) {
  Basis b(k);
  return {k, std::vector<cplx>(b.dim(), cplx{})};
}

StateVector product_state(int k, Level cs, Level rb) {
  Basis b(k);
  StateVector s{k, std::vector<cplx>(b.dim(), cplx{})};
  std::vector<Level> levels(k + 1, rb);
  levels[0] = cs;
  s.amplitudes[b.index(levels)] = 1.0;
  return s;
}

double population(const StateVector& psi, int atom, Level level) {
  Basis b(psi.k);
  if (psi.dim() != b.dim()) throw DomainError("population: state dimension does not match k");
  if (atom < 0 || atom > psi.k) throw DomainError("population: atom index out of range");
  double p = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if (b.level(i, atom) == level) p += std::norm(psi.amplitudes[i]);
  }
  return p;
}

StateVector apply_cs_pi(const StateVector& psi) {
  if (psi.dim() != pow3(psi.k + 1)) throw DomainError("apply_cs_pi: state dimension does not match k");
  StateVector out = psi;
  for (std::size_t i = 0; i < psi.dim(); i += 3) std::swap(out.amplitudes[i + 1], out.amplitudes[i + 2]);
  return out;
}

// ---------------------------------------------------------------------------
// Hamiltonian

HamiltonianTerms::HamiltonianTerms(const SystemSpec& spec) : spec_(spec), basis_(spec.k) {
  validate(spec_);
  const int k = spec_.k;
  const std::size_t rb_dim = basis_.rb_dim();
  rb_static_.assign(rb_dim, cplx{});
  rb_b0_.assign(rb_dim, 0.0);
  excitation_.assign(rb_dim, 0.0);

  const cplx rydberg_energy(spec_.delta_r, -0.5 * spec_.gamma_rm);
  for (std::size_t m = 0; m < rb_dim; ++m) {
    for (int j = 0; j < k; ++j) {
      const std::size_t sj = pow3(j);
      const int dj = rb_digit(m, sj);
      if (dj != 0) excitation_[m] += 1.0;
      if (dj == 2) {
        rb_static_[m] += rydberg_energy;
        rb_b0_[m] += spec_.interaction.b0[j];
        for (int i = j + 1; i < k; ++i) {
          if (rb_digit(m, pow3(i)) == 2) rb_static_[m] += spec_.interaction.b[j][i];
        }
      }
      if (dj == 0) microwave_.push_back({static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m + sj)});
      if (dj == 1) dressing_.push_back({static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m + sj)});
    }
  }
}

HamiltonianTerms::Coefficients HamiltonianTerms::coefficients(double t) const {
  const DriveSample d = envelope_at(spec_.microwave, t);
  if (spec_.frame == ChirpFrame::PhaseModulated) {
    return {d.drive, spec_.delta + carrier_detuning(spec_.microwave)};
  }
  return {cplx(d.amplitude, 0.0), spec_.delta + d.detuning};
}

void HamiltonianTerms::sector_diagonal(Level cs, double detuning, std::vector<cplx>& diag) const {
  const std::size_t n = rb_static_.size();
  diag.resize(n);
  const bool ancilla_excited = cs == Level::Rydberg;
  const cplx ancilla_decay(0.0, -0.5 * spec_.gamma_ra);
  for (std::size_t m = 0; m < n; ++m) {
    cplx d = rb_static_[m] + detuning * excitation_[m];
    if (ancilla_excited) d += rb_b0_[m] + ancilla_decay;
    diag[m] = d;
  }
}

void HamiltonianTerms::apply_sector(std::span<const cplx> diag, cplx drive, std::span<const cplx> x,
                                    std::span<cplx> out) const {
  const std::size_t n = diag.size();
  for (std::size_t m = 0; m < n; ++m) out[m] = diag[m] * x[m];
  const cplx up = -0.5 * drive;             // <1|H|0>
  const cplx down = -0.5 * std::conj(drive);  // <0|H|1>
  for (const auto& tr : microwave_) {
    out[tr.upper] += up * x[tr.lower];
    out[tr.lower] += down * x[tr.upper];
  }
  const double dress = -0.5 * spec_.omega_r;
  for (const auto& tr : dressing_) {
    out[tr.upper] += dress * x[tr.lower];
    out[tr.lower] += dress * x[tr.upper];
  }
}

void HamiltonianTerms::apply(double t, std::span<const cplx> x, std::span<cplx> out) const {
  if (x.size() != basis_.dim() || out.size() != basis_.dim()) throw DomainError("HamiltonianTerms::apply: dimension mismatch");
  const Coefficients c = coefficients(t);
  const std::size_t rb_dim = basis_.rb_dim();
  std::vector<cplx> diag, xs(rb_dim), ys(rb_dim);
  for (int cs = 0; cs < 3; ++cs) {
    sector_diagonal(static_cast<Level>(cs), c.detuning, diag);
    for (std::size_t m = 0; m < rb_dim; ++m) xs[m] = x[cs + 3 * m];
    apply_sector(diag, c.drive, xs, ys);
    for (std::size_t m = 0; m < rb_dim; ++m) out[cs + 3 * m] = ys[m];
  }
}

std::vector<cplx> HamiltonianTerms::dense(double t) const {
  const std::size_t n = basis_.dim();
  std::vector<cplx> h(n * n), e(n), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx{});
    e[j] = 1.0;
    apply(t, e, col);
    for (std::size_t i = 0; i < n; ++i) h[i * n + j] = col[i];
  }
  return h;
}

double HamiltonianTerms::sector_scale(Level cs) const {
  const double detuning = std::abs(spec_.delta) + max_detuning(spec_.microwave);
  const double half_drive = 0.5 * peak_amplitude(spec_.microwave);
  const double half_dress = 0.5 * spec_.omega_r;
  const int k = spec_.k;
  double scale = 0.0;
  for (std::size_t m = 0; m < rb_static_.size(); ++m) {
    double row = std::abs(rb_static_[m]) + detuning * excitation_[m];
    if (cs == Level::Rydberg) row += rb_b0_[m] + 0.5 * spec_.gamma_ra;
    for (int j = 0; j < k; ++j) {
      const int d = rb_digit(m, pow3(j));
      if (d != 2) row += half_drive;  // |0> <-> |1>
      if (d != 0) row += half_dress;  // |1> <-> |r>
    }
    scale = std::max(scale, row);
  }
  return scale;
}

double effective_stark_shift(double omega_r, double delta_r, double b0j, bool cs_in_rydberg) {
  const double denom = 4.0 * (delta_r + (cs_in_rydberg ? b0j : 0.0));
  if (denom == 0.0 || !std::isfinite(denom)) {
    if (std::isinf(denom)) return 0.0;
    throw NumericalError("effective_stark_shift: vanishing denominator delta_r + B");
  }
  return omega_r * omega_r / denom;
}

// ---------------------------------------------------------------------------
// Evolution

double Trajectory::population(std::size_t sample, int atom, Level level) const {
  return rydmeas::population(states.at(sample), atom, level);
}

namespace {

// RK4 in the interaction picture of the static diagonal (Rydberg detuning,
// interactions, decay). That part is applied exactly through phase factors, so
// the RK4 stages only see the drive, the dressing and the swept detuning.
struct SectorIntegrator {
  const HamiltonianTerms& h;
  Level cs;
  std::vector<cplx> static_diag, diag, half, k1, k2, k3, k4, xi, tmp;
  double cached_detuning = std::numeric_limits<double>::quiet_NaN();
  double cached_dt = std::numeric_limits<double>::quiet_NaN();

  SectorIntegrator(const HamiltonianTerms& terms, Level level) : h(terms), cs(level) {
    const std::size_t n = terms.basis().rb_dim();
    for (auto* v : {&half, &k1, &k2, &k3, &k4, &xi, &tmp}) v->resize(n);
    h.sector_diagonal(cs, 0.0, static_diag);
  }

  // out = -i V(t) x, V = H(t) minus the static diagonal
  void derivative(double t, std::span<const cplx> x, std::vector<cplx>& out) {
    const auto c = h.coefficients(t);
    if (!(c.detuning == cached_detuning)) {
      h.sector_diagonal(cs, c.detuning, diag);
      for (std::size_t m = 0; m < diag.size(); ++m) diag[m] -= static_diag[m];
      cached_detuning = c.detuning;
    }
    h.apply_sector(diag, c.drive, x, out);
    for (auto& v : out) v = cplx(v.imag(), -v.real());
  }

  void set_step(double dt) {
    if (dt == cached_dt) return;
    for (std::size_t m = 0; m < half.size(); ++m) half[m] = std::exp(cplx(0.0, -0.5 * dt) * static_diag[m]);
    cached_dt = dt;
  }

  void rotate(std::vector<cplx>& v) const {
    for (std::size_t m = 0; m < v.size(); ++m) v[m] *= half[m];
  }

  // One step from t to t_end; endpoints are passed exactly so the last
  // stage lands on the pulse edge rather than an ulp past it.
  void step(double t, double t_end, std::vector<cplx>& x) {
    const std::size_t n = x.size();
    const double dt = t_end - t;
    const double mid = 0.5 * (t + t_end);
    set_step(dt);
    for (std::size_t i = 0; i < n; ++i) xi[i] = x[i] * half[i];
    derivative(t, x, k1);
    rotate(k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = xi[i] + 0.5 * dt * k1[i];
    derivative(mid, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = xi[i] + 0.5 * dt * k2[i];
    derivative(mid, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = xi[i] + dt * k3[i];
    rotate(tmp);
    derivative(t_end, tmp, k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = xi[i] + w * (k1[i] + 2.0 * (k2[i] + k3[i]));
    rotate(x);
    for (std::size_t i = 0; i < n; ++i) x[i] += w * k4[i];
  }
};

double sector_norm(const std::vector<cplx>& x) {
  double s = 0.0;
  for (const auto& a : x) s += std::norm(a);
  return s;
}

}  // namespace

Trajectory evolve(const SystemSpec& spec, const StateVector& psi0, double t_final, int sample_count,
                  const EvolveOptions& options) {
  const HamiltonianTerms h(spec);
  const Basis& basis = h.basis();
  if (psi0.k != spec.k || psi0.dim() != basis.dim()) throw DomainError("evolve: initial state does not match spec");
  const double n0 = psi0.norm();
  if (!(n0 <= 1.0 + 1e-9)) throw DomainError("evolve: initial state norm exceeds 1");
  if (!(t_final >= 0.0)) throw DomainError("evolve: t_final must be non-negative");
  if (sample_count < 2) throw DomainError("evolve: sample_count must be >= 2");
  if (!(options.max_phase_per_step > 0.0) || options.step_refinement < 1) {
    throw DomainError("evolve: invalid step options");
  }

  const auto samples = static_cast<std::size_t>(sample_count);
  const double interval = t_final / static_cast<double>(samples - 1);
  Trajectory traj;
  traj.times.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) traj.times[i] = interval * static_cast<double>(i);
  traj.times.back() = t_final;
  traj.states.assign(samples, StateVector{spec.k, std::vector<cplx>(basis.dim(), cplx{})});
  traj.steps_per_sample.assign(3, 0);
  traj.step_size.assign(3, 0.0);

  const std::size_t rb_dim = basis.rb_dim();
  std::vector<std::string> failures(3);

  parallel_for(3, options.threads, [&](std::size_t cs_index) {
    const auto cs = static_cast<Level>(cs_index);
    std::vector<cplx> x(rb_dim);
    for (std::size_t m = 0; m < rb_dim; ++m) x[m] = psi0.amplitudes[cs_index + 3 * m];
    for (std::size_t m = 0; m < rb_dim; ++m) traj.states[0].amplitudes[cs_index + 3 * m] = x[m];
    if (sector_norm(x) == 0.0 || t_final == 0.0) {
      for (std::size_t i = 1; i < samples; ++i) {
        for (std::size_t m = 0; m < rb_dim; ++m) traj.states[i].amplitudes[cs_index + 3 * m] = x[m];
      }
      return;
    }

    const double scale = h.sector_scale(cs);
    const auto base_steps = static_cast<std::size_t>(std::ceil(scale * interval / options.max_phase_per_step));
    const std::size_t steps = std::max<std::size_t>(1, base_steps) * static_cast<std::size_t>(options.step_refinement);
    const double dt = interval / static_cast<double>(steps);
    traj.steps_per_sample[cs_index] = steps;
    traj.step_size[cs_index] = dt;

    SectorIntegrator integrator(h, cs);
    double previous = sector_norm(x);
    for (std::size_t i = 1; i < samples; ++i) {
      const double t0 = traj.times[i - 1];
      const double t1 = traj.times[i];
      for (std::size_t s = 0; s < steps; ++s) {
        const double ta = t0 + dt * static_cast<double>(s);
        const double tb = s + 1 == steps ? t1 : t0 + dt * static_cast<double>(s + 1);
        integrator.step(ta, tb, x);
      }
      const double current = sector_norm(x);
      if (!std::isfinite(current)) {
        std::ostringstream os;
        os << "evolve: non-finite amplitude in Cs sector " << cs_index << " at t = " << traj.times[i] << " us (dt = " << dt << ")";
        throw NumericalError(os.str());
      }
      if (current > previous + 1e-9) {
        std::ostringstream os;
        os << "evolve: integrator instability, norm grew from " << previous << " to " << current
           << " in Cs sector " << cs_index << " at t = " << traj.times[i] << " us (dt = " << dt << ")";
        throw NumericalError(os.str());
      }
      previous = current;
      for (std::size_t m = 0; m < rb_dim; ++m) traj.states[i].amplitudes[cs_index + 3 * m] = x[m];
    }
  });
  return traj;
}

TransferReport transfer_report(const Trajectory& traj, const SystemSpec& spec) {
  if (traj.states.empty()) throw DomainError("transfer_report: empty trajectory");
  TransferReport r;
  const auto& last = traj.states.back();
  for (int j = 1; j <= spec.k; ++j) r.final_one.push_back(population(last, j, Level::One));
  for (const auto& s : traj.states) {
    for (int j = 1; j <= spec.k; ++j) r.max_rb_rydberg = std::max(r.max_rb_rydberg, population(s, j, Level::Rydberg));
  }
  r.rydberg_bound = spec.delta_r != 0.0 ? spec.omega_r * spec.omega_r / (4.0 * spec.delta_r * spec.delta_r) : 0.0;
  r.within_rydberg_bound = r.max_rb_rydberg <= r.rydberg_bound + 1e-3;
  r.norm_loss = traj.states.front().norm() - last.norm();
  return r;
}

// ---------------------------------------------------------------------------
// GHZ / CNOT_k

StateVector run_ghz_sequence(const SystemSpec& spec, const EvolveOptions& options) {
  StateVector psi = zero_state(spec.k);
  const Basis basis(spec.k);
  std::vector<Level> levels(spec.k + 1, Level::Zero);
  psi.amplitudes[basis.index(levels)] = 1.0 / std::numbers::sqrt2;
  levels[0] = Level::One;
  psi.amplitudes[basis.index(levels)] = 1.0 / std::numbers::sqrt2;

  psi = apply_cs_pi(psi);
  const Trajectory traj = evolve(spec, psi, duration(spec.microwave), 2, options);
  return apply_cs_pi(traj.states.back());
}

double relative_ghz_phase(const StateVector& psi) {
  const Basis basis(psi.k);
  if (psi.dim() != basis.dim()) throw DomainError("relative_ghz_phase: state dimension does not match k");
  std::vector<Level> levels(psi.k + 1, Level::Zero);
  const cplx a00 = psi.amplitudes[basis.index(levels)];
  std::fill(levels.begin(), levels.end(), Level::One);
  const cplx a11 = psi.amplitudes[basis.index(levels)];
  if (std::abs(a00) < 1e-3 || std::abs(a11) < 1e-3) {
    std::ostringstream os;
    os << "relative phase undefined: |a_00| = " << std::abs(a00) << ", |a_11| = " << std::abs(a11);
    throw NumericalError(os.str());
  }
  double phi = std::arg(a11 * std::conj(a00));
  if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  return phi;
}

double extract_dynamical_phase(const SystemSpec& spec_k1, const EvolveOptions& options) {
  if (spec_k1.k != 1) throw DomainError("extract_dynamical_phase: requires k = 1");
  SystemSpec lossless = spec_k1;
  lossless.gamma_ra = 0.0;
  lossless.gamma_rm = 0.0;
  return relative_ghz_phase(run_ghz_sequence(lossless, options));
}

double ghz_fidelity(const StateVector& psi, int k, double phi0) {
  if (k < 1 || psi.k != k || psi.dim() != pow3(k + 1)) {
    throw DomainError("ghz_fidelity: state of dimension " + std::to_string(psi.dim()) +
                      " does not match k = " + std::to_string(k));
  }
  const Basis basis(k);
  std::vector<Level> levels(k + 1, Level::Zero);
  const cplx a00 = psi.amplitudes[basis.index(levels)];
  std::fill(levels.begin(), levels.end(), Level::One);
  const cplx a11 = psi.amplitudes[basis.index(levels)];
  const cplx overlap = (a00 + std::polar(1.0, -k * phi0) * a11) / std::numbers::sqrt2;
  return std::min(1.0, std::norm(overlap));
}

}  // namespace rydmeas
