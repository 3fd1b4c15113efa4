#include "specsense/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specsense/sensing_operator.hpp"

namespace specsense {

double verification_parameter(const CVector &testing, Eigen::Ref<const RMatrix> testing_rows,
                              RowKind kind, const CVector &estimate) {
  const SensingOperator op(testing_rows, kind);
  if (testing.size() != op.rows()) {
    throw std::invalid_argument("testing subset length does not match the testing matrix");
  }
  return (testing - op.apply(estimate)).squaredNorm();
}

bool halting_check(double rho, int testing_size, double noise_variance, double accuracy) {
  if (testing_size <= 0) throw std::invalid_argument("halting check needs v_l > 0");
  if (accuracy < 0) throw std::invalid_argument("halting accuracy must be nonnegative");
  return std::abs(rho / testing_size - 2.0 * noise_variance) <= accuracy;
}

double bernstein_bound(int testing_size, double accuracy, double noise_variance, double noise_bound) {
  if (testing_size <= 0) throw std::invalid_argument("Bernstein bound needs v_l > 0");
  if (!(accuracy > 0)) throw std::invalid_argument("Bernstein bound needs accuracy > 0");
  if (!(noise_variance > 0)) throw std::invalid_argument("Bernstein bound needs delta^2 > 0");
  if (noise_bound < 0) throw std::invalid_argument("noise bound must be nonnegative");
  const double d2 = noise_variance;
  const double denom = 24.0 * d2 * d2 + 2.0 * (noise_bound * noise_bound + d2) * accuracy;
  const double bound = 2.0 * std::exp(-3.0 * testing_size * accuracy * accuracy / denom);
  return std::min(1.0, bound);
}

} // namespace specsense
