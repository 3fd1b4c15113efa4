#pragma once

#include "specsense/sensing_operator.hpp"
#include "specsense/types.hpp"

namespace specsense {

/// One slot's outcome of the validation step.
struct VerificationRecord {
  int slot = 0;
  int measurements = 0;          // M_l
  double rho = 0.0;              // ||V_l - Psi_l F^{-1} X_hat_l||^2
  int testing_size = 0;          // v_l
  double normalized = 0.0;       // rho / v_l
  double predicted = 0.0;        // 2 delta^2
  bool halted = false;
  double failure_bound = 1.0;    // Bernstein bound on the halting test
  double oracle_error = 0.0;     // ||X - X_hat_l||, evaluation only
  bool solver_converged = false;
};

/// Squared norm of the testing residual.
double verification_parameter(const CVector &testing, Eigen::Ref<const RMatrix> testing_rows,
                              RowKind kind, const CVector &estimate);

/// |rho / v - 2 delta^2| <= accuracy. Throws for v <= 0 or accuracy < 0.
bool halting_check(double rho, int testing_size, double noise_variance, double accuracy);

/// min(1, 2 exp(-3 v eps^2 / (24 delta^4 + 2 (U^2 + delta^2) eps))): the
/// probability that rho/v misses 2 delta^2 by more than eps when the
/// estimate is exact and every noise component is bounded by U.
double bernstein_bound(int testing_size, double accuracy, double noise_variance, double noise_bound);

} // namespace specsense
