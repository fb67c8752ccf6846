#pragma once

namespace rydmeas {

/// Error-correction cycle components, all in us. Defaults: 0.5 us gates,
/// 1 us of ancilla Rydberg pulses plus 5 us transfer, 5 us camera integration
/// against a 7.2 us minimum exposure, 500 us frame readout, and 0.5 / 5 us
/// average ancilla / measuring-atom resets.
struct CycleBudget {
  double hadamard_time = 0.5;
  double cz_time = 0.5;
  int n_hadamard_layers = 2;
  int n_cz = 8;
  double cs_rydberg_pulses_time = 1.0;
  double transfer_time = 5.0;
  double camera_integration_time = 5.0;
  double camera_min_exposure = 7.2;
  double camera_readout_time = 500.0;
  double ancilla_reset_avg = 0.5;
  double measurement_reset_avg = 5.0;
};

/// How the camera contributes to the measurement step.
enum class ExposureRule {
  MinExposureFloor,  // max(integration, minimum exposure)
  IntegrationOnly,   // integration time alone
};

struct CycleTime {
  double gates = 0.0;        // t_a
  double measurement = 0.0;  // t_b (with readout) or t_b' (without)
  double reset = 0.0;        // t_c, both species reset in parallel
  double total = 0.0;
};

/// Throws DomainError for a negative field.
void validate(const CycleBudget& budget);

CycleTime cycle_time(const CycleBudget& budget, bool include_camera_readout,
                     ExposureRule rule = ExposureRule::MinExposureFloor);

}  // namespace rydmeas
