#include "specsense/orchestrator.hpp"

#include <cmath>

#include "specsense/throughput.hpp"

namespace specsense {

std::vector<double> SensingOutcome::oracle_error_trace() const {
  std::vector<double> errors;
  errors.reserve(trace.size());
  for (const auto &r : trace) errors.push_back(r.oracle_error);
  return errors;
}

double SensingOutcome::relative_error() const {
  if (trace.empty() || signal_norm == 0.0) return 0.0;
  return trace.back().oracle_error / signal_norm;
}

double halting_accuracy(const ScenarioConfig &config, double noise_variance) {
  if (config.accuracy) return *config.accuracy;
  return config.accuracy_factor * 2.0 * noise_variance;
}

namespace {

struct SlotResult {
  VerificationRecord record;
  SpectralEstimate estimate;
};

// One pass of the loop body at the slot `state` has just acquired.
SlotResult run_slot(const ScenarioConfig &config, const AcquisitionState &state,
                    const MeasurementEnsemble &ensemble, const NyquistSignal &signal,
                    double accuracy) {
  const auto domain =
      config.real_signal_recovery ? SpectrumDomain::Hermitian : SpectrumDomain::General;
  const SplitView view = split(state, ensemble);
  const SensingOperator op(view.training_rows_single, view.row_kind, domain);
  const auto r = static_cast<int>(view.training.size());
  const double target = config.recovery_threshold
                            ? *config.recovery_threshold
                            : default_recovery_threshold(ensemble.noise_variance, r);
  SlotResult out;
  out.estimate = recover(view.training, op, target, config.solver);

  VerificationRecord &rec = out.record;
  rec.slot = state.slot;
  rec.measurements = ensemble.measurements_through(state.slot);
  rec.testing_size = static_cast<int>(view.testing.size());
  rec.rho = verification_parameter(view.testing, view.testing_rows, view.row_kind,
                                   out.estimate.spectrum);
  rec.normalized = rec.rho / rec.testing_size;
  rec.predicted = 2.0 * ensemble.noise_variance;
  rec.solver_converged = out.estimate.converged;
  // A solver that did not converge leaves the criterion false.
  rec.halted = out.estimate.converged &&
               halting_check(rec.rho, rec.testing_size, ensemble.noise_variance, accuracy);
  if (accuracy > 0 && ensemble.noise_variance > 0) {
    rec.failure_bound =
        bernstein_bound(rec.testing_size, accuracy, ensemble.noise_variance, ensemble.noise_bound);
  }
  rec.oracle_error = oracle_recovery_error(signal.spectrum, out.estimate.spectrum);
  return out;
}

void calibrate(const ScenarioConfig &config, const NyquistSignal &signal,
               MeasurementEnsemble &ensemble) {
  if (!config.noise_variance) {
    ensemble.set_noise_variance(smnr_noise_variance(ensemble, signal, config.smnr_db));
  }
}

} // namespace

SensingOutcome adaptive_sense(const ScenarioConfig &config, const NyquistSignal &signal,
                              const MeasurementEnsemble &ensemble) {
  SensingOutcome out;
  out.noise_variance = ensemble.noise_variance;
  out.accuracy = halting_accuracy(config, ensemble.noise_variance);
  out.occupied = signal.occupied;
  out.signal_norm = signal.spectrum.norm();

  AcquisitionState state = begin_acquisition(config.noise_seed);
  for (int l = 1; l <= ensemble.slots; ++l) {
    state = acquire_slot(std::move(state), ensemble, signal);
    SlotResult slot = run_slot(config, state, ensemble, signal, out.accuracy);
    out.trace.push_back(slot.record);
    out.estimate = std::move(slot.estimate);
    if (slot.record.halted) break;
  }

  out.terminated_slot = out.trace.back().slot;
  out.halted = out.trace.back().halted;
  out.detection = energy_detect(out.estimate.spectrum, config);
  const LinkModel link = LinkModel::from_config(config);
  out.throughput_adaptive =
      adaptive_throughput(out.terminated_slot, out.detection.decisions, out.occupied, link, config);
  out.throughput_baseline = baseline_throughput(out.detection.decisions, out.occupied, link, config);
  return out;
}

SensingOutcome adaptive_sense(const ScenarioConfig &config) {
  validate(config);
  const NyquistSignal signal = synthesize(config);
  MeasurementEnsemble ensemble = build_ensemble(config);
  calibrate(config, signal, ensemble);
  return adaptive_sense(config, signal, ensemble);
}

SlotTrace trace_all_slots(const ScenarioConfig &config) {
  validate(config);
  const NyquistSignal signal = synthesize(config);
  MeasurementEnsemble ensemble = build_ensemble(config);
  calibrate(config, signal, ensemble);

  SlotTrace out;
  out.noise_variance = ensemble.noise_variance;
  out.accuracy = halting_accuracy(config, ensemble.noise_variance);
  out.signal_norm = signal.spectrum.norm();
  AcquisitionState state = begin_acquisition(config.noise_seed);
  for (int l = 1; l <= ensemble.slots; ++l) {
    state = acquire_slot(std::move(state), ensemble, signal);
    const SlotResult slot = run_slot(config, state, ensemble, signal, out.accuracy);
    out.records.push_back(slot.record);
    if (slot.record.halted && out.first_halt == 0) out.first_halt = l;
  }
  return out;
}

} // namespace specsense
