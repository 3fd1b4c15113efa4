#include <gtest/gtest.h>

#include "specsense/acquisition.hpp"
#include "specsense/orchestrator.hpp"
#include "specsense/throughput.hpp"

using namespace specsense;

namespace {

// N = 512, M_L = 128, L = 4, J = 8, two random subbands.
ScenarioConfig small_config() {
  ScenarioConfig c;
  c.total_bandwidth = 1e6;
  c.num_subchannels = 8;
  c.nyquist_rate = 2e6;
  c.subnyquist_rate = 0.5e6;
  c.sensing_interval = 256e-6;
  c.frame_length = 512e-6;
  c.mini_slots = 4;
  c.random_subbands = SubbandDraw{2, 2e4, 6e4, 7, 27, 0.25};
  return c;
}

void expect_structure(const ScenarioConfig &c, const SensingOutcome &o) {
  ASSERT_GE(o.terminated_slot, 1);
  ASSERT_LE(o.terminated_slot, c.mini_slots);
  ASSERT_EQ(static_cast<int>(o.trace.size()), o.terminated_slot);
  for (int i = 0; i < o.terminated_slot; ++i) EXPECT_EQ(o.trace[i].slot, i + 1);
  for (int i = 0; i + 1 < o.terminated_slot; ++i) EXPECT_FALSE(o.trace[i].halted);
  const auto &last = o.trace.back();
  EXPECT_EQ(o.halted, last.halted);
  if (o.terminated_slot < c.mini_slots) EXPECT_TRUE(o.halted);
  EXPECT_EQ(last.halted, last.solver_converged && halting_check(last.rho, last.testing_size,
                                                                 o.noise_variance, o.accuracy));
  EXPECT_EQ(o.estimate.spectrum.size(), c.nyquist_samples());
  EXPECT_EQ(o.detection.decisions.size(), static_cast<std::size_t>(c.num_subchannels));
  EXPECT_GE(o.throughput_adaptive, o.throughput_baseline);
}

} // namespace

TEST(Orchestrator, StructuralInvariants) {
  for (std::uint64_t t = 0; t < 3; ++t) {
    const ScenarioConfig c = small_config().for_trial(t);
    expect_structure(c, adaptive_sense(c));
  }
}

TEST(Orchestrator, ZeroAccuracyNeverHalts) {
  ScenarioConfig c = small_config();
  c.accuracy = 0.0;
  const SensingOutcome o = adaptive_sense(c);
  EXPECT_EQ(o.terminated_slot, c.mini_slots);
  EXPECT_FALSE(o.halted);
  EXPECT_EQ(o.throughput_adaptive, o.throughput_baseline);
  expect_structure(c, o);
}

TEST(Orchestrator, EngineeredEarlyHalt) {
  // Noise-free signal, one narrow subband (six nonzero bins), measurement
  // noise 80 dB below the signal: slot 1 suffices.
  ScenarioConfig c;
  c.total_bandwidth = 7.8125e6;
  c.num_subchannels = 20;
  c.nyquist_rate = 15.625e6;
  c.subnyquist_rate = 3.90625e6;
  c.sensing_interval = 64e-6;
  c.frame_length = 128e-6;
  c.mini_slots = 5;
  c.background_noise_variance = 0.0;
  c.smnr_db = 80;
  c.subbands = {SubbandSpec::from_snr_db(2.0e6, 2.0 / 64e-6, 20, 1e-6)};
  const SensingOutcome o = adaptive_sense(c);
  EXPECT_EQ(o.terminated_slot, 1);
  EXPECT_TRUE(o.halted);
  EXPECT_LT(o.relative_error(), 1e-3);
  expect_structure(c, o);
}

TEST(Orchestrator, PrefixConsistencyAcrossLongerRuns) {
  ScenarioConfig longer = small_config();
  ScenarioConfig shorter = longer;
  shorter.mini_slots = 2;
  shorter.subnyquist_rate = longer.subnyquist_rate / 2;
  const SlotTrace a = trace_all_slots(shorter);
  const SlotTrace b = trace_all_slots(longer);
  ASSERT_EQ(a.records.size(), 2u);
  ASSERT_EQ(b.records.size(), 4u);
  EXPECT_EQ(a.noise_variance, b.noise_variance);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].rho, b.records[i].rho);
    EXPECT_EQ(a.records[i].oracle_error, b.records[i].oracle_error);
    EXPECT_EQ(a.records[i].halted, b.records[i].halted);
  }
}

TEST(Orchestrator, TraceAgreesWithAdaptiveRun) {
  const ScenarioConfig c = small_config();
  const SlotTrace all = trace_all_slots(c);
  const SensingOutcome o = adaptive_sense(c);
  ASSERT_EQ(all.records.size(), 4u);
  for (std::size_t i = 0; i < o.trace.size(); ++i) EXPECT_EQ(all.records[i].rho, o.trace[i].rho);
  const int expected = all.first_halt > 0 ? all.first_halt : c.mini_slots;
  EXPECT_EQ(o.terminated_slot, expected);
}

TEST(Orchestrator, NeverReadsTheTruth) {
  const ScenarioConfig c = small_config();
  NyquistSignal s = synthesize(c);
  MeasurementEnsemble e = build_ensemble(c);
  e.set_noise_variance(smnr_noise_variance(e, s, c.smnr_db));
  const SensingOutcome a = adaptive_sense(c, s, e);
  // Corrupt the reference spectrum only; measurements come from the samples.
  s.spectrum.setConstant(Complex{3.0, -1.0});
  const SensingOutcome b = adaptive_sense(c, s, e);
  EXPECT_EQ(a.terminated_slot, b.terminated_slot);
  EXPECT_TRUE(a.estimate.spectrum == b.estimate.spectrum);
  EXPECT_EQ(a.detection.decisions, b.detection.decisions);
  EXPECT_NE(a.trace.back().oracle_error, b.trace.back().oracle_error);
}

TEST(Orchestrator, Deterministic) {
  const ScenarioConfig c = small_config().for_trial(4);
  const SensingOutcome a = adaptive_sense(c);
  const SensingOutcome b = adaptive_sense(c);
  EXPECT_EQ(a.terminated_slot, b.terminated_slot);
  EXPECT_TRUE(a.estimate.spectrum == b.estimate.spectrum);
  EXPECT_EQ(a.throughput_adaptive, b.throughput_adaptive);
}

TEST(Orchestrator, ThroughputUsesTerminationSlot) {
  const ScenarioConfig c = small_config();
  const SensingOutcome o = adaptive_sense(c);
  const LinkModel link = LinkModel::from_config(c);
  EXPECT_DOUBLE_EQ(o.throughput_adaptive,
                   adaptive_throughput(o.terminated_slot, o.detection.decisions, o.occupied, link, c));
  EXPECT_DOUBLE_EQ(o.throughput_baseline,
                   baseline_throughput(o.detection.decisions, o.occupied, link, c));
}

TEST(Orchestrator, AccuracyDefaults) {
  ScenarioConfig c = small_config();
  EXPECT_DOUBLE_EQ(halting_accuracy(c, 0.5), 10.0);
  c.accuracy_factor = 0.2;
  EXPECT_DOUBLE_EQ(halting_accuracy(c, 0.5), 0.2);
  c.accuracy = 0.3;
  EXPECT_DOUBLE_EQ(halting_accuracy(c, 0.5), 0.3);
}

TEST(Orchestrator, RejectsInvalidConfig) {
  ScenarioConfig c = small_config();
  c.mini_slots = 3;
  EXPECT_THROW(adaptive_sense(c), std::invalid_argument);
}
