#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "specsense/throughput.hpp"

using namespace specsense;
using specsense::testing::toy_config;

TEST(PathLoss, ReferenceDistances) {
  EXPECT_DOUBLE_EQ(path_loss_db(1.0), 127.0);
  EXPECT_NEAR(path_loss_db(10.0), 157.0, 1e-12);
  EXPECT_NEAR(path_loss_db(0.05), 127.0 + 30.0 * std::log10(0.05), 1e-12);
  EXPECT_NEAR(path_loss_db(0.05), 87.9691, 1e-4);
}

TEST(PathLoss, RejectsNonPositiveDistance) {
  EXPECT_THROW(path_loss_db(0.0), std::invalid_argument);
  EXPECT_THROW(path_loss_db(-1.0), std::invalid_argument);
}

TEST(Link, UnitConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(40.0), 10.0, 1e-12);
  EXPECT_NEAR(dbm_to_watts(-174.0), 3.981071705534972e-21, 1e-33);
  const LinkModel link{40.0, 1.0, -174.0};
  EXPECT_NEAR(link.channel_gain(), std::pow(10.0, -12.7), 1e-25);
  const double b = 1e6;
  EXPECT_NEAR(link.snr(b), 10.0 * std::pow(10.0, -12.7) / (3.981071705534972e-21 * b),
              1e-9 * link.snr(b));
}

TEST(Rate, FourSubchannelToy) {
  const std::vector<SubchannelLink> links = {
      {1e6, 0.01, 3.0}, {2e6, 0.05, 15.0}, {0.5e6, 0.0, 1.0}, {1e6, 0.1, 7.0}};
  const std::vector<bool> counted = {true, false, true, true};
  // 0.99 * 1e6 * 2 + 1.0 * 0.5e6 * 1 + 0.9 * 1e6 * 3
  EXPECT_NEAR(opportunistic_rate(links, counted), 1.98e6 + 0.5e6 + 2.7e6, 1e-6);
}

TEST(Rate, DoublingBandwidthAtFixedSnrDoubles) {
  std::vector<SubchannelLink> links = {{1e6, 0.01, 3.3}, {2e6, 0.02, 9.1}};
  const std::vector<bool> all = {true, true};
  const double c = opportunistic_rate(links, all);
  for (auto &l : links) l.bandwidth *= 2;
  EXPECT_NEAR(opportunistic_rate(links, all), 2 * c, 1e-9 * c);
}

TEST(TimeFactor, Boundaries) {
  EXPECT_DOUBLE_EQ(time_factor(10e-6, 0.0, 20, 20), 1.0);
  EXPECT_DOUBLE_EQ(time_factor(10e-6, 10e-6, 20, 20), 0.0);
  EXPECT_DOUBLE_EQ(time_factor(10e-6, 5e-6, 10, 20), 0.75);
  EXPECT_THROW(time_factor(10e-6, 5e-6, 21, 20), std::invalid_argument);
  EXPECT_THROW(time_factor(10e-6, 5e-6, -1, 20), std::invalid_argument);
}

class ToyThroughput : public ::testing::Test {
protected:
  ScenarioConfig c = toy_config();
  LinkModel link = LinkModel::from_config(c);
  std::vector<bool> decisions = std::vector<bool>(8, false);
  SubchannelSet occupied = {1, 5};
};

TEST_F(ToyThroughput, BaselineMatchesHandSum) {
  const double b = c.subchannel_bandwidth();
  const double per = (1 - c.target_pfa) * b * std::log2(1 + link.snr(b));
  const double factor = (c.frame_length - c.sensing_interval) / c.frame_length;
  EXPECT_NEAR(baseline_throughput(decisions, occupied, link, c), factor * 6 * per, 1e-9 * per);
}

TEST_F(ToyThroughput, FullIntervalEqualsBaseline) {
  EXPECT_DOUBLE_EQ(adaptive_throughput(c.mini_slots, decisions, occupied, link, c),
                   baseline_throughput(decisions, occupied, link, c));
}

TEST_F(ToyThroughput, AllOccupiedGivesZero) {
  const SubchannelSet all = {0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(adaptive_throughput(2, decisions, all, link, c), 0.0);
  EXPECT_EQ(baseline_throughput(decisions, all, link, c), 0.0);
}

TEST_F(ToyThroughput, DominanceAndStrictDecrease) {
  const double base = baseline_throughput(decisions, occupied, link, c);
  double previous = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= c.mini_slots; ++l) {
    const double cs = adaptive_throughput(l, decisions, occupied, link, c);
    EXPECT_GE(cs, base);
    if (l < c.mini_slots) EXPECT_GT(cs, base);
    EXPECT_LT(cs, previous);
    previous = cs;
  }
}

TEST_F(ToyThroughput, AffineInTerminationSlot) {
  const double c1 = adaptive_throughput(1, decisions, occupied, link, c);
  const double c2 = adaptive_throughput(2, decisions, occupied, link, c);
  const double c3 = adaptive_throughput(3, decisions, occupied, link, c);
  EXPECT_NEAR(c1 - c2, c2 - c3, 1e-9 * c1);
}

TEST_F(ToyThroughput, RatioIsTimeFactorRatio) {
  const double base = baseline_throughput(decisions, occupied, link, c);
  for (int l = 1; l <= c.mini_slots; ++l) {
    const double expected = (c.frame_length - c.sensing_interval / c.mini_slots * l) /
                            (c.frame_length - c.sensing_interval);
    EXPECT_NEAR(adaptive_throughput(l, decisions, occupied, link, c) / base, expected, 1e-12);
  }
}

TEST_F(ToyThroughput, SumsOverTrueIdleByDefault) {
  decisions = {true, true, true, true, true, true, true, true};
  EXPECT_GT(baseline_throughput(decisions, occupied, link, c), 0.0);
  c.throughput_over_decisions = true;
  EXPECT_EQ(baseline_throughput(decisions, occupied, link, c), 0.0);
}

TEST_F(ToyThroughput, RejectsOutOfRangeSlot) {
  EXPECT_THROW(adaptive_throughput(0, decisions, occupied, link, c), std::invalid_argument);
  EXPECT_THROW(adaptive_throughput(5, decisions, occupied, link, c), std::invalid_argument);
  EXPECT_THROW(adaptive_throughput(1, decisions, {8}, link, c), std::invalid_argument);
}
