#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rydmeas/geometry.hpp"
#include "rydmeas/pulses.hpp"

namespace rydmeas {

using cplx = std::complex<double>;

/// Per-atom level. Digit value in the product-basis index.
enum class Level : int { Zero = 0, One = 1, Rydberg = 2 };

/// One Cs ancilla (atom 0) plus k Rb measuring atoms (1..k), three levels
/// each. Rates and frequencies in rad/us.
struct SystemSpec {
  int k = 1;
  InteractionMatrix interaction;
  double omega_r = 0.0;   // Rb |1> - |r> dressing Rabi frequency
  double delta_r = 0.0;   // dressing detuning
  double gamma_rm = 0.0;  // Rb Rydberg decay rate
  double gamma_ra = 0.0;  // Cs Rydberg decay rate
  PulseEnvelope microwave = SquarePulse{1.0, 1.0};
  double delta = 0.0;     // extra carrier detuning added to the pulse's own
  ChirpFrame frame = ChirpFrame::DetuningSweep;
};

/// Throws DomainError on an inconsistent spec (k mismatch, negative rates,
/// delta_r <= omega_r, invalid pulse).
void validate(const SystemSpec& spec);

/// Product basis over k+1 atoms: index = sum_i digit_i 3^i, atom 0 (Cs) least
/// significant. Supports 1 <= k <= 6.
class Basis {
 public:
  static constexpr int kMaxMeasuring = 6;

  explicit Basis(int k);

  int k() const { return k_; }
  std::size_t dim() const { return dim_; }
  /// Size of the Rb-only subspace, 3^k.
  std::size_t rb_dim() const { return dim_ / 3; }

  Level level(std::size_t index, int atom) const;
  std::size_t index(std::span<const Level> levels) const;
  std::size_t stride(int atom) const { return strides_[atom]; }
  /// Index with `atom` moved to `to` (caller guarantees the current digit).
  std::size_t with_level(std::size_t index, int atom, Level to) const;

 private:
  int k_;
  std::size_t dim_;
  std::vector<std::size_t> strides_;
};

/// Complex amplitudes over the (k+1)-atom product basis.
struct StateVector {
  int k = 1;
  std::vector<cplx> amplitudes;

  double norm() const;  // sum of |a|^2
  std::size_t dim() const { return amplitudes.size(); }
};

/// Zero state of the given size.
StateVector zero_state(int k);
/// Product state with the given Cs level and every Rb atom in `rb`.
StateVector product_state(int k, Level cs, Level rb = Level::Zero);

/// Population of `level` on `atom` (0 = Cs).
double population(const StateVector& psi, int atom, Level level);

/// Exact swap of Cs amplitudes |1>_a <-> |r>_a on every basis string (no phase).
StateVector apply_cs_pi(const StateVector& psi);

/// H(t) = diag(static + [Cs in r] (B0 - i gamma_ra / 2) + delta(t) n_exc)
///        - 1/2 (W(t) sum_j s10_j + h.c.) - omega_r / 2 sum_j (s_r1_j + h.c.).
/// The Cs level is conserved, so H is block diagonal in three Cs sectors.
class HamiltonianTerms {
 public:
  struct Transition {
    std::uint32_t lower;  // Rb-subspace index
    std::uint32_t upper;
  };
  struct Coefficients {
    cplx drive;             // W(t)
    double detuning = 0.0;  // delta(t)
  };

  explicit HamiltonianTerms(const SystemSpec& spec);

  const Basis& basis() const { return basis_; }
  const SystemSpec& spec() const { return spec_; }

  Coefficients coefficients(double t) const;

  /// Diagonal of the Cs-sector block at detuning `detuning` (Rb-subspace indexing).
  void sector_diagonal(Level cs, double detuning, std::vector<cplx>& diag) const;

  /// out = H_sector x on the 3^k Rb subspace.
  void apply_sector(std::span<const cplx> diag, cplx drive, std::span<const cplx> x, std::span<cplx> out) const;

  /// out = H(t) x on the full space.
  void apply(double t, std::span<const cplx> x, std::span<cplx> out) const;

  /// Dense row-major H(t); intended for small k in tests and oracles.
  std::vector<cplx> dense(double t) const;

  /// Upper bound on the spectral radius of the sector block over the pulse
  /// (max row sum of |H_ij| with peak drive and peak detuning).
  double sector_scale(Level cs) const;

  const std::vector<Transition>& microwave_transitions() const { return microwave_; }
  const std::vector<Transition>& dressing_transitions() const { return dressing_; }

 private:
  SystemSpec spec_;
  Basis basis_;
  std::vector<cplx> rb_static_;      // dressing detuning, Rb decay, Rb-Rb interactions
  std::vector<double> rb_b0_;        // sum_j B0j n_r(j)
  std::vector<double> excitation_;   // sum_j n_1(j) + n_r(j), multiplies delta(t)
  std::vector<Transition> microwave_;
  std::vector<Transition> dressing_;
};

/// Same object under the operation name used in the docs.
inline HamiltonianTerms assemble_hamiltonian_terms(const SystemSpec& spec) { return HamiltonianTerms(spec); }

/// |omega_r|^2 / (4 (delta_r + B)) with B = b0j when the ancilla is in |r>.
/// Throws NumericalError if the denominator vanishes.
double effective_stark_shift(double omega_r, double delta_r, double b0j, bool cs_in_rydberg);

struct EvolveOptions {
  double max_phase_per_step = 0.02;  // rad; sector_scale * dt bound (<= 0.05)
  int step_refinement = 1;           // extra integer subdivision of each step
  int threads = 1;                   // Cs sectors evolve in parallel
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<std::size_t> steps_per_sample;  // per Cs sector, 0 when unpopulated
  std::vector<double> step_size;              // per Cs sector, us

  /// Population of `level` on `atom` at sample i.
  double population(std::size_t sample, int atom, Level level) const;
  double norm(std::size_t sample) const { return states[sample].norm(); }
};

/// Fixed-step RK4 of i d/dt psi = H(t) psi over [0, t_final], sampled at
/// `sample_count` equally spaced times (including both ends). Throws
/// DomainError for an unnormalised psi0, NumericalError when the norm grows
/// by more than 1e-9 between samples or becomes NaN.
Trajectory evolve(const SystemSpec& spec, const StateVector& psi0, double t_final, int sample_count,
                  const EvolveOptions& options = {});

struct TransferReport {
  std::vector<double> final_one;   // <s11^(j)> at the final time, j = 1..k
  double max_rb_rydberg = 0.0;     // max over samples and Rb atoms of <s_rr^(j)>
  double rydberg_bound = 0.0;      // |omega_r|^2 / (4 delta_r^2)
  bool within_rydberg_bound = true;
  double norm_loss = 0.0;          // initial minus final norm
};

/// Summary of a trajectory. `within_rydberg_bound` checks max_rb_rydberg
/// against rydberg_bound + 1e-3.
TransferReport transfer_report(const Trajectory& traj, const SystemSpec& spec);

/// (|0>_a + |1>_a)/sqrt2 (x) |0>^k, Cs pi, evolve over the pulse, Cs pi.
StateVector run_ghz_sequence(const SystemSpec& spec, const EvolveOptions& options = {});

/// arg<1_a 1_m | psi> - arg<0_a 0_m | psi> after the GHZ sequence for k = 1
/// with all decay switched off, reduced to (-pi, pi]. Throws NumericalError
/// if either amplitude is below 1e-3 in magnitude.
double extract_dynamical_phase(const SystemSpec& spec_k1, const EvolveOptions& options = {});

/// Relative phase of |1>_a|1..1> against |0>_a|0..0> in psi, (-pi, pi].
double relative_ghz_phase(const StateVector& psi);

/// |<GHZ|psi>|^2 with <GHZ| = (<0|<0..0| + exp(-i k phi0) <1|<1..1|) / sqrt2.
/// Throws DomainError if psi does not have dimension 3^(k+1).
double ghz_fidelity(const StateVector& psi, int k, double phi0);

}  // namespace rydmeas
