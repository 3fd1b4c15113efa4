#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "specsense/acquisition.hpp"
#include "specsense/harness.hpp"
#include "specsense/signal_model.hpp"

using namespace specsense;
using specsense::testing::toy_config;

namespace {

// Dense complex matrix from the stacked real rows.
Eigen::MatrixXcd dense_phi(Eigen::Ref<const RMatrix> stacked, RowKind kind) {
  if (kind == RowKind::Real) return stacked.cast<Complex>();
  Eigen::MatrixXcd phi(stacked.rows() / 2, stacked.cols());
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    for (Eigen::Index k = 0; k < phi.cols(); ++k) phi(i, k) = {stacked(2 * i, k), stacked(2 * i + 1, k)};
  }
  return phi;
}

NyquistSignal toy_signal(const ScenarioConfig &c) {
  ScenarioConfig s = c;
  s.subbands = {SubbandSpec::from_snr_db(3e5, 1e5, 20, 1e-6)};
  return synthesize(s);
}

} // namespace

TEST(Ensemble, PaperScaleBlocks) {
  // Row assignment only; the matrix itself is built for the desk preset.
  ScenarioConfig c = paper_scale_preset();
  EXPECT_EQ(c.mini_slots, 20);
  EXPECT_EQ(c.rows_per_slot(), 250);
}

TEST(Ensemble, BlockSizesAndCounts) {
  const ScenarioConfig c = desk_preset();
  const MeasurementEnsemble e = build_ensemble(c);
  EXPECT_EQ(e.slots, 20);
  EXPECT_EQ(e.rows_per_slot, 50);
  ASSERT_EQ(e.training_count.size(), 20u);
  for (int l = 1; l <= 20; ++l) {
    const int m = 50 * l;
    EXPECT_EQ(e.measurements_through(l), m);
    EXPECT_EQ(e.testing_count[l - 1], static_cast<int>(std::lround(0.1 * m)));
    EXPECT_EQ(e.training_count[l - 1] + e.testing_count[l - 1], m);
    const int tests = static_cast<int>(std::count(e.is_test.begin(), e.is_test.begin() + m, true));
    EXPECT_EQ(tests, e.testing_count[l - 1]);
  }
  EXPECT_EQ(e.training.rows(), 2 * e.training_count.back());
  EXPECT_EQ(e.testing.rows(), 2 * e.testing_count.back());
  EXPECT_EQ(e.training.cols(), 4000);
}

TEST(Ensemble, TwoHundredFiftyRowSplit) {
  // One block of 250 rows at test_fraction 0.1: 225 training, 25 testing.
  ScenarioConfig c = desk_preset();
  c.mini_slots = 4;
  const MeasurementEnsemble e = build_ensemble(c);
  EXPECT_EQ(e.rows_per_slot, 250);
  EXPECT_EQ(e.training_count[0], 225);
  EXPECT_EQ(e.testing_count[0], 25);
  EXPECT_EQ(std::count(e.is_test.begin(), e.is_test.begin() + 250, true), 25);
}

TEST(Ensemble, RejectsDegenerateSplit) {
  ScenarioConfig c = toy_config();
  c.test_fraction = 0.001;
  EXPECT_THROW(build_ensemble(c), std::invalid_argument);
  c.test_fraction = 0.0;
  EXPECT_THROW(build_ensemble(c), std::invalid_argument);
  c.test_fraction = 1.0;
  EXPECT_THROW(build_ensemble(c), std::invalid_argument);
}

TEST(Ensemble, EntriesAreStandardNormal) {
  const MeasurementEnsemble complex_rows = build_ensemble(desk_preset());
  // CN(0, 1): each real component has variance 1/2, |phi|^2 has mean 1.
  const double var = complex_rows.training.squaredNorm() / complex_rows.training.size();
  EXPECT_NEAR(var, 0.5, 0.005);
  EXPECT_NEAR(complex_rows.training.mean(), 0.0, 0.002);

  ScenarioConfig real = desk_preset();
  real.complex_measurements = false;
  const MeasurementEnsemble real_rows = build_ensemble(real);
  EXPECT_EQ(real_rows.row_kind, RowKind::Real);
  EXPECT_NEAR(real_rows.training.squaredNorm() / real_rows.training.size(), 1.0, 0.01);
}

TEST(Ensemble, DeterministicForMatrixSeed) {
  const ScenarioConfig c = toy_config();
  EXPECT_TRUE(build_ensemble(c).training == build_ensemble(c).training);
  EXPECT_FALSE(build_ensemble(c.for_trial(1)).training == build_ensemble(c).training);
}

TEST(Ensemble, PrefixAcrossLongerRuns) {
  ScenarioConfig shorter = toy_config();
  ScenarioConfig longer = toy_config();
  shorter.mini_slots = 2;
  shorter.subnyquist_rate = longer.subnyquist_rate / 2;
  const MeasurementEnsemble a = build_ensemble(shorter);
  const MeasurementEnsemble b = build_ensemble(longer);
  EXPECT_TRUE(b.training.topRows(a.training.rows()) == a.training);
  EXPECT_TRUE(b.testing.topRows(a.testing.rows()) == a.testing);
  EXPECT_TRUE(std::equal(a.is_test.begin(), a.is_test.end(), b.is_test.begin()));
}

TEST(Acquisition, NoiselessMatchesDenseProduct) {
  ScenarioConfig c = toy_config();
  c.noise_variance = 0.0;
  const NyquistSignal s = toy_signal(c);
  const MeasurementEnsemble e = build_ensemble(c);
  AcquisitionState st = acquire_slot(begin_acquisition(c.noise_seed), e, s);
  ASSERT_EQ(st.samples.size(), 8);
  const SplitView v = split(st, e);
  const CVector r = dense_phi(v.training_rows, e.row_kind) * s.samples;
  const CVector t = dense_phi(v.testing_rows, e.row_kind) * s.samples;
  EXPECT_LE((v.training - r).norm(), 1e-12 * r.norm());
  EXPECT_LE((v.testing - t).norm(), 1e-12 * t.norm());
}

TEST(Acquisition, SixteenRowSlotMatchesDenseProduct) {
  ScenarioConfig c = toy_config();
  c.subnyquist_rate = 1e6; // M_L = 64, 16 rows per slot
  c.noise_variance = 0.0;
  c.complex_measurements = false;
  const NyquistSignal s = toy_signal(c);
  const MeasurementEnsemble e = build_ensemble(c);
  ASSERT_EQ(e.rows_per_slot, 16);
  const AcquisitionState st = acquire_slot(begin_acquisition(1), e, s);
  // Reassemble the 16 rows in arrival order.
  Eigen::MatrixXcd phi(16, 128);
  int tr = 0, te = 0;
  for (int i = 0; i < 16; ++i) {
    phi.row(i) = e.is_test[i] ? e.testing.row(te++).cast<Complex>() : e.training.row(tr++).cast<Complex>();
  }
  const CVector y = phi * s.samples;
  EXPECT_LE((st.samples - y).norm(), 1e-12 * y.norm());
}

TEST(Acquisition, ZeroSignalGivesNoiseWithTwiceDeltaSquared) {
  ScenarioConfig c = desk_preset();
  c.random_subbands.reset();
  c.background_noise_variance = 0.0;
  c.noise_variance = 0.7;
  const NyquistSignal s = synthesize(c);
  const MeasurementEnsemble e = build_ensemble(c);
  double sum = 0.0;
  long count = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    AcquisitionState st = begin_acquisition(seed);
    for (int l = 0; l < e.slots; ++l) st = acquire_slot(std::move(st), e, s);
    EXPECT_TRUE(st.samples == st.noise);
    sum += st.samples.squaredNorm();
    count += st.samples.size();
  }
  ASSERT_GE(count, 10000);
  EXPECT_NEAR(sum / count, 2 * 0.7, 0.03 * 2 * 0.7);
}

TEST(Acquisition, PartitionAndGrowth) {
  const ScenarioConfig c = desk_preset();
  const NyquistSignal s = synthesize(c);
  MeasurementEnsemble e = build_ensemble(c);
  e.set_noise_variance(smnr_noise_variance(e, s, c.smnr_db));
  AcquisitionState st = begin_acquisition(c.noise_seed);
  int previous = 0;
  for (int l = 1; l <= c.mini_slots; ++l) {
    st = acquire_slot(std::move(st), e, s);
    const int m = e.measurements_through(l);
    EXPECT_EQ(m - previous, 50);
    previous = m;
    ASSERT_EQ(st.samples.size(), m);
    std::vector<int> all = st.training_index;
    all.insert(all.end(), st.testing_index.begin(), st.testing_index.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expected(m);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
    const SplitView v = split(st, e);
    EXPECT_EQ(v.training.size() + v.testing.size(), m);
    EXPECT_EQ(v.training_rows.rows(), 2 * v.training.size());
    EXPECT_EQ(v.testing_rows.rows(), 2 * v.testing.size());
  }
  EXPECT_THROW(acquire_slot(st, e, s), std::out_of_range);
}

TEST(Acquisition, FirstSlotTrainingRowCount) {
  ScenarioConfig c = desk_preset();
  c.mini_slots = 4;
  const NyquistSignal s = synthesize(c);
  MeasurementEnsemble e = build_ensemble(c);
  e.set_noise_variance(1.0);
  const AcquisitionState st = acquire_slot(begin_acquisition(1), e, s);
  const SplitView v = split(st, e);
  EXPECT_EQ(v.training.size(), 225);
  EXPECT_EQ(v.training_rows.rows(), 2 * 225);
}

TEST(Acquisition, ReplayWithRecordedNoise) {
  const ScenarioConfig c = desk_preset();
  const NyquistSignal s = synthesize(c);
  MeasurementEnsemble e = build_ensemble(c);
  e.set_noise_variance(smnr_noise_variance(e, s, c.smnr_db));
  AcquisitionState st = begin_acquisition(c.noise_seed);
  for (int l = 0; l < 5; ++l) st = acquire_slot(std::move(st), e, s);
  const SplitView v = split(st, e);
  const CVector clean = dense_phi(v.training_rows, e.row_kind) * s.samples;
  CVector noise(v.training.size());
  for (std::size_t i = 0; i < st.training_index.size(); ++i) noise[i] = st.noise[st.training_index[i]];
  EXPECT_LE((clean + noise - v.training).norm(), 1e-12 * v.training.norm());
}

TEST(Acquisition, SmnrCalibration) {
  const ScenarioConfig c = desk_preset();
  const NyquistSignal s = synthesize(c);
  const MeasurementEnsemble e = build_ensemble(c);
  const double d2 = smnr_noise_variance(e, s, 50.0);
  const Eigen::MatrixXcd phi = dense_phi(e.training.topRows(2 * e.training_count[0]), e.row_kind);
  const double power = (phi * s.samples).squaredNorm() / e.training_count[0];
  EXPECT_NEAR(d2, power / (2 * 1e5), 1e-9 * d2);
}

TEST(Acquisition, SplitBeforeAnySlotThrows) {
  const MeasurementEnsemble e = build_ensemble(toy_config());
  EXPECT_THROW(split(begin_acquisition(1), e), std::logic_error);
}
