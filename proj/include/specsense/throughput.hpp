#pragma once

#include <vector>

#include "specsense/config.hpp"
#include "specsense/types.hpp"

namespace specsense {

/// 127 + 30 log10(D), D in km. Throws std::invalid_argument for D <= 0.
double path_loss_db(double distance_km);

double dbm_to_watts(double dbm);

/// Flat block-fading link shared by every subchannel.
struct LinkModel {
  double transmit_power_dbm = 40.0; // P_j
  double distance_km = 0.05;        // D
  double noise_density_dbm_hz = -174.0;

  double channel_gain() const;  // |H|^2 = 10^(-PL/10)
  double noise_density() const; // N_0 in W/Hz
  /// P |H|^2 / (N_0 B)
  double snr(double bandwidth) const;

  static LinkModel from_config(const ScenarioConfig &config);
};

struct SubchannelLink {
  double bandwidth = 0.0;   // B_j, Hz
  double pfa = 0.0;         // P_f,j
  double snr = 0.0;         // P_j |H_j|^2 / (N_0 B_j), linear
};

/// sum over counted j of (1 - P_f,j) B_j log2(1 + snr_j), bits/s.
double opportunistic_rate(const std::vector<SubchannelLink> &links, const std::vector<bool> &counted);

/// Identical links for all J subchannels of the scenario.
std::vector<SubchannelLink> scenario_links(const ScenarioConfig &config, const LinkModel &link);

/// Subchannels entering the sum: truly idle (j not in Omega), or decided
/// idle when config.throughput_over_decisions is set.
std::vector<bool> counted_subchannels(const ScenarioConfig &config, const std::vector<bool> &decisions,
                                      const SubchannelSet &occupied);

/// (T - (tau / L) l) / T. Throws std::invalid_argument unless 0 <= l <= L.
double time_factor(double frame_length, double sensing_interval, int slot, int slots);

/// C* with the sensing cost of l* mini slots. Throws for l* outside [1, L].
double adaptive_throughput(int terminated_slot, const std::vector<bool> &decisions,
                           const SubchannelSet &occupied, const LinkModel &link,
                           const ScenarioConfig &config);

/// C with the full sensing interval tau.
double baseline_throughput(const std::vector<bool> &decisions, const SubchannelSet &occupied,
                           const LinkModel &link, const ScenarioConfig &config);

} // namespace specsense
