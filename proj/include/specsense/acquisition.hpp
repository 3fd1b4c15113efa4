#pragma once

#include <vector>

#include "specsense/config.hpp"
#include "specsense/rng.hpp"
#include "specsense/sensing_operator.hpp"
#include "specsense/signal_model.hpp"
#include "specsense/types.hpp"

namespace specsense {

/// Gaussian measurement rows for every mini slot, pre-assigned to the
/// training or testing subset before any data is seen. Immutable once
/// built, apart from the noise parameters which are calibrated per signal.
struct MeasurementEnsemble {
  int signal_length = 0;    // N
  int rows_per_slot = 0;    // M_L / L
  int slots = 0;            // L
  RowKind row_kind = RowKind::Complex;
  RMatrix training;         // all training rows, stacked, in arrival order
  RMatrix testing;          // all testing rows, stacked, in arrival order
  FMatrix training_single;  // float copy of `training` for the solver
  std::vector<bool> is_test;        // per global measurement index
  std::vector<int> training_count;  // r_l, cumulative, indexed by l-1
  std::vector<int> testing_count;   // v_l, cumulative, indexed by l-1
  double noise_variance = 0.0;      // delta^2 per real component
  double noise_bound = 0.0;         // U, only used by the Bernstein bound

  int measurements_through(int slot) const { return slot * rows_per_slot; } // M_l
  /// Stacked real rows per measurement.
  int stride() const { return row_kind == RowKind::Complex ? 2 : 1; }
  void set_noise_variance(double variance);
};

/// Throws std::invalid_argument for a test fraction outside (0, 1) or a
/// split that leaves some slot without testing or training samples.
MeasurementEnsemble build_ensemble(const ScenarioConfig &config);

/// delta^2 = P / (2 * 10^(SMNR/10)), P the mean |phi x|^2 over the
/// training rows of the first slot.
double smnr_noise_variance(const MeasurementEnsemble &ensemble, const NyquistSignal &signal,
                           double smnr_db);

struct AcquisitionState {
  int slot = 0; // number of completed mini slots
  CVector samples;  // y_l, arrival order
  CVector noise;    // the noise realisation inside y_l
  CVector training; // R_l
  CVector testing;  // V_l
  std::vector<int> training_index; // positions in y_l
  std::vector<int> testing_index;
  Rng noise_rng{0};
};

AcquisitionState begin_acquisition(std::uint64_t noise_seed);

/// Acquire the next block of rows. Throws std::out_of_range past slot L.
AcquisitionState acquire_slot(AcquisitionState state, const MeasurementEnsemble &ensemble,
                              const NyquistSignal &signal);

/// Training/testing data with their aligned matrix prefixes.
struct SplitView {
  const CVector &training;
  Eigen::Ref<const RMatrix> training_rows; // Phi_l, stacked
  Eigen::Ref<const FMatrix> training_rows_single;
  const CVector &testing;
  Eigen::Ref<const RMatrix> testing_rows;  // Psi_l, stacked
  RowKind row_kind;
};

SplitView split(const AcquisitionState &state, const MeasurementEnsemble &ensemble);

} // namespace specsense
