#include "rydmeas/budget.hpp"

#include <algorithm>

#include "rydmeas/errors.hpp"

namespace rydmeas {

void validate(const CycleBudget& b) {
  for (double v : {b.hadamard_time, b.cz_time, b.cs_rydberg_pulses_time, b.transfer_time, b.camera_integration_time,
                   b.camera_min_exposure, b.camera_readout_time, b.ancilla_reset_avg, b.measurement_reset_avg}) {
    if (!(v >= 0.0)) throw DomainError("CycleBudget: times must be non-negative");
  }
  if (b.n_hadamard_layers < 0 || b.n_cz < 0) throw DomainError("CycleBudget: gate counts must be non-negative");
}

CycleTime cycle_time(const CycleBudget& b, bool include_camera_readout, ExposureRule rule) {
  validate(b);
  CycleTime t;
  t.gates = b.n_hadamard_layers * b.hadamard_time + b.n_cz * b.cz_time;
  const double exposure = rule == ExposureRule::MinExposureFloor
                              ? std::max(b.camera_integration_time, b.camera_min_exposure)
                              : b.camera_integration_time;
  t.measurement = b.cs_rydberg_pulses_time + b.transfer_time + exposure;
  if (include_camera_readout) t.measurement += b.camera_readout_time;
  t.reset = std::max(b.ancilla_reset_avg, b.measurement_reset_avg);
  t.total = t.gates + t.measurement + t.reset;
  return t;
}

}  // namespace rydmeas
