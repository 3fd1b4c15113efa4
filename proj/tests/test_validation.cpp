#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "specsense/validation.hpp"

using namespace specsense;

namespace {

RMatrix gaussian_rows(int rows, int cols, std::mt19937_64 &gen) {
  std::normal_distribution<double> d(0.0, std::sqrt(0.5));
  RMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(gen);
  return m;
}

CVector real_signal(int n, std::mt19937_64 &gen) {
  std::normal_distribution<double> d;
  CVector x(n);
  for (auto &z : x) z = d(gen);
  return x;
}

} // namespace

TEST(Verification, ExactEstimateWithoutNoiseIsZero) {
  std::mt19937_64 gen(1);
  const RMatrix psi = gaussian_rows(2 * 12, 64, gen);
  const CVector x = real_signal(64, gen);
  const CVector V = measure(psi, RowKind::Complex, x);
  const double rho = verification_parameter(V, psi, RowKind::Complex, specsense::testing::dense_dft(x));
  EXPECT_LE(rho, 1e-24 * V.squaredNorm());
}

TEST(Verification, SmallInstanceMatchesDirectSum) {
  std::mt19937_64 gen(2);
  const int v = 4, n = 8;
  const RMatrix psi = gaussian_rows(2 * v, n, gen);
  CVector V(v), X(n);
  std::normal_distribution<double> d;
  for (auto &z : V) z = {d(gen), d(gen)};
  for (auto &z : X) z = {d(gen), d(gen)};
  const CVector x = specsense::testing::dense_idft(X);
  double expected = 0.0;
  for (int i = 0; i < v; ++i) {
    Complex acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) acc += Complex{psi(2 * i, k), psi(2 * i + 1, k)} * x[k];
    const Complex r = V[i] - acc;
    expected += r.real() * r.real() + r.imag() * r.imag();
  }
  EXPECT_NEAR(verification_parameter(V, psi, RowKind::Complex, X), expected, 1e-12 * expected);
}

TEST(Verification, PureNoiseMeanIsTwiceDeltaSquared) {
  std::mt19937_64 gen(3);
  const int v = 10, n = 32;
  const double d2 = 0.3;
  const RMatrix psi = gaussian_rows(2 * v, n, gen);
  std::normal_distribution<double> noise(0.0, std::sqrt(d2));
  double sum = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const CVector x = real_signal(n, gen);
    CVector V = measure(psi, RowKind::Complex, x);
    for (auto &z : V) z += Complex{noise(gen), noise(gen)};
    sum += verification_parameter(V, psi, RowKind::Complex, specsense::testing::dense_dft(x)) / v;
  }
  EXPECT_NEAR(sum / trials, 2 * d2, 0.02 * 2 * d2);
}

TEST(Verification, InvariantUnderCommonReordering) {
  std::mt19937_64 gen(4);
  const int v = 9, n = 16;
  const RMatrix psi = gaussian_rows(2 * v, n, gen);
  CVector V(v), X(n);
  std::normal_distribution<double> d;
  for (auto &z : V) z = {d(gen), d(gen)};
  for (auto &z : X) z = {d(gen), d(gen)};
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  RMatrix psi2(2 * v, n);
  CVector V2(v);
  for (int i = 0; i < v; ++i) {
    psi2.row(2 * i) = psi.row(2 * perm[i]);
    psi2.row(2 * i + 1) = psi.row(2 * perm[i] + 1);
    V2[i] = V[perm[i]];
  }
  const double a = verification_parameter(V, psi, RowKind::Complex, X);
  const double b = verification_parameter(V2, psi2, RowKind::Complex, X);
  EXPECT_GE(a, 0.0);
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(Verification, LengthMismatchThrows) {
  std::mt19937_64 gen(5);
  const RMatrix psi = gaussian_rows(8, 16, gen);
  EXPECT_THROW(verification_parameter(CVector::Zero(3), psi, RowKind::Complex, CVector::Zero(16)),
               std::invalid_argument);
  EXPECT_THROW(verification_parameter(CVector::Zero(4), psi, RowKind::Complex, CVector::Zero(15)),
               std::invalid_argument);
}

TEST(Halting, ExactMatchHalts) {
  EXPECT_TRUE(halting_check(2.0 * 0.5 * 40, 40, 0.5, 0.01));
}

TEST(Halting, ZeroResidualRejectedUnderNoise) {
  EXPECT_FALSE(halting_check(0.0, 25, 1.0, 0.5));
}

TEST(Halting, TenPercentBand) {
  const double d2 = 1.0;
  const double eps = 0.1 * 2 * d2;
  EXPECT_TRUE(halting_check(2.05 * d2 * 100, 100, d2, eps));
  EXPECT_FALSE(halting_check(2.25 * d2 * 100, 100, d2, eps));
}

TEST(Halting, MonotoneInAccuracy) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double rho = u(gen) * 50, e1 = u(gen), e2 = e1 + u(gen);
    if (halting_check(rho, 50, 1.0, e1)) EXPECT_TRUE(halting_check(rho, 50, 1.0, e2));
  }
}

TEST(Halting, RejectsBadArguments) {
  EXPECT_THROW(halting_check(1.0, 0, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(halting_check(1.0, 5, 1.0, -0.1), std::invalid_argument);
}

TEST(Bernstein, MatchesFormula) {
  const int v = 100;
  const double d2 = 0.7, eps = 0.9, U = 4 * std::sqrt(d2);
  const double expected = 2 * std::exp(-3 * v * eps * eps / (24 * d2 * d2 + 2 * (U * U + d2) * eps));
  EXPECT_NEAR(bernstein_bound(v, eps, d2, U), std::min(1.0, expected), 1e-15);
}

TEST(Bernstein, VanishesForLargeAccuracy) {
  EXPECT_LT(bernstein_bound(50, 1e6, 1.0, 4.0), 1e-100);
}

TEST(Bernstein, ClampedToOne) {
  EXPECT_EQ(bernstein_bound(1, 1e-6, 1.0, 4.0), 1.0);
}

TEST(Bernstein, DoublingTestingSizeDoublesExponent) {
  const double d2 = 1.0, eps = 1.0, U = 4.0;
  const double a = bernstein_bound(200, eps, d2, U);
  const double b = bernstein_bound(400, eps, d2, U);
  ASSERT_LT(a, 1.0);
  EXPECT_NEAR(std::log(b / 2), 2 * std::log(a / 2), 1e-12 * std::abs(std::log(b / 2)));
}

TEST(Bernstein, DecreasingInSizeAndAccuracy) {
  double previous = 2.0;
  for (int v = 50; v <= 2000; v += 50) {
    const double b = bernstein_bound(v, 0.5, 1.0, 4.0);
    EXPECT_LE(b, previous);
    previous = b;
  }
  previous = 2.0;
  for (double eps = 0.05; eps < 5; eps += 0.05) {
    const double b = bernstein_bound(200, eps, 1.0, 4.0);
    EXPECT_LE(b, previous);
    EXPECT_GE(b, 0.0);
    previous = b;
  }
}

TEST(Bernstein, RejectsNonPositiveArguments) {
  EXPECT_THROW(bernstein_bound(0, 1.0, 1.0, 4.0), std::invalid_argument);
  EXPECT_THROW(bernstein_bound(10, 0.0, 1.0, 4.0), std::invalid_argument);
  EXPECT_THROW(bernstein_bound(10, 1.0, 0.0, 4.0), std::invalid_argument);
}
