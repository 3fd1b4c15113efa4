#pragma once

#include <vector>

#include "specsense/acquisition.hpp"
#include "specsense/config.hpp"
#include "specsense/detection.hpp"
#include "specsense/recovery.hpp"
#include "specsense/signal_model.hpp"
#include "specsense/validation.hpp"

namespace specsense {

struct SensingOutcome {
  int terminated_slot = 0;       // l*, L when the criterion never held
  bool halted = false;           // the criterion held at l*
  SpectralEstimate estimate;     // X_hat at l*
  std::vector<VerificationRecord> trace; // one entry per slot 1..l*
  DetectionResult detection;
  SubchannelSet occupied;        // Omega, for evaluation
  double throughput_adaptive = 0.0; // C*
  double throughput_baseline = 0.0; // C
  double noise_variance = 0.0;   // delta^2
  double accuracy = 0.0;         // epsilon
  double signal_norm = 0.0;      // ||X||_2

  std::vector<double> oracle_error_trace() const;
  double relative_error() const; // ||X - X_hat|| / ||X|| at l*
};

/// epsilon for a given delta^2: the configured absolute value, or
/// accuracy_factor * 2 delta^2.
double halting_accuracy(const ScenarioConfig &config, double noise_variance);

/// Synthesises the scenario, calibrates delta^2 and runs the loop.
SensingOutcome adaptive_sense(const ScenarioConfig &config);

/// The loop on a given signal and ensemble (noise variance already set).
/// Per slot: acquire, split, recover, validate; stop at the first slot
/// whose halting check passes with a converged solver. The oracle error
/// is recorded for evaluation and never consulted.
SensingOutcome adaptive_sense(const ScenarioConfig &config, const NyquistSignal &signal,
                              const MeasurementEnsemble &ensemble);

/// Every slot 1..L with halting ignored, for plotting how rho/v tracks
/// 2 delta^2. first_halt is the slot adaptive_sense would stop at (0 if none).
struct SlotTrace {
  std::vector<VerificationRecord> records;
  int first_halt = 0;
  double noise_variance = 0.0;
  double accuracy = 0.0;
  double signal_norm = 0.0;
};

SlotTrace trace_all_slots(const ScenarioConfig &config);

} // namespace specsense
