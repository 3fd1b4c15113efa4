#pragma once

#include <vector>

#include "specsense/config.hpp"
#include "specsense/sensing_operator.hpp"
#include "specsense/types.hpp"

namespace specsense {

struct SpectralEstimate {
  CVector spectrum;           // X_hat, length N
  double residual_norm = 0.0; // ||R - A X_hat||_2
  double target_residual = 0.0;
  int iterations = 0;         // summed over all stages
  int stages = 0;
  bool converged = false;
};

/// Per-stage solver diagnostics, filled only when requested.
struct StageRecord {
  double lambda = 0.0;
  int iterations = 0;
  double residual_norm = 0.0;
  bool inner_converged = false;
  std::vector<double> objective; // penalized objective after every iteration
};

struct SolverTrace {
  double lipschitz = 0.0;
  std::vector<StageRecord> stages;
};

/// Approximately solves  min ||X||_1  s.t.  ||R - A X||_2 <= target
/// with monotone accelerated proximal gradient on the penalised form
/// 0.5 ||R - A X||^2 + lambda ||X||_1, lowering lambda geometrically until
/// the residual enters [target (1 - slack), target (1 + slack)]. A band
/// overshoot is corrected by bisecting log(lambda).
///
/// Stages that only locate lambda stop at settings.stage_tolerance and may
/// run on `search_op`, a cheaper approximation of `op` (same shape); the
/// chosen lambda is then re-solved on `op` to settings.stop_tolerance.
///
/// With target == 0 lambda is driven to its floor. converged is false if
/// the residual ends above target (1 + slack), or for target == 0 if the
/// final stage hits max_iterations.
SpectralEstimate recover(const CVector &training, const SensingOperator &op, double target,
                         const SolverSettings &settings, SolverTrace *trace = nullptr,
                         const SensingOperator *search_op = nullptr);

/// Default residual target: delta sqrt(2 r) (1 + 2 / sqrt(r)).
double default_recovery_threshold(double noise_variance, int training_size);

/// Largest eigenvalue of A^H A by power iteration from a fixed start vector.
double estimate_operator_norm_sq(const SensingOperator &op, int iterations);

void soft_threshold(CVector &v, double threshold);

/// ||X - X_hat||_2; for evaluation only.
double oracle_recovery_error(const CVector &truth, const CVector &estimate);

} // namespace specsense
