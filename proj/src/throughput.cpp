#include "specsense/throughput.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specsense {

double path_loss_db(double distance_km) {
  if (!(distance_km > 0)) throw std::invalid_argument("distance must be positive");
  return 127.0 + 30.0 * std::log10(distance_km);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double LinkModel::channel_gain() const { return std::pow(10.0, -path_loss_db(distance_km) / 10.0); }

double LinkModel::noise_density() const { return dbm_to_watts(noise_density_dbm_hz); }

double LinkModel::snr(double bandwidth) const {
  if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be positive");
  return dbm_to_watts(transmit_power_dbm) * channel_gain() / (noise_density() * bandwidth);
}

LinkModel LinkModel::from_config(const ScenarioConfig &config) {
  return {config.transmit_power_dbm, config.distance_km, config.noise_density_dbm_hz};
}

double opportunistic_rate(const std::vector<SubchannelLink> &links, const std::vector<bool> &counted) {
  if (links.size() != counted.size()) {
    throw std::invalid_argument("link list and subchannel mask differ in length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < links.size(); ++j) {
    if (!counted[j]) continue;
    const auto &s = links[j];
    total += (1.0 - s.pfa) * s.bandwidth * std::log2(1.0 + s.snr);
  }
  return total;
}

std::vector<SubchannelLink> scenario_links(const ScenarioConfig &config, const LinkModel &link) {
  const double b = config.subchannel_bandwidth();
  const SubchannelLink one{b, config.target_pfa, link.snr(b)};
  return std::vector<SubchannelLink>(static_cast<std::size_t>(config.num_subchannels), one);
}

std::vector<bool> counted_subchannels(const ScenarioConfig &config, const std::vector<bool> &decisions,
                                      const SubchannelSet &occupied) {
  const auto j_count = static_cast<std::size_t>(config.num_subchannels);
  if (config.throughput_over_decisions) {
    if (decisions.size() != j_count) throw std::invalid_argument("decision vector has the wrong length");
    std::vector<bool> idle(j_count);
    for (std::size_t j = 0; j < j_count; ++j) idle[j] = !decisions[j];
    return idle;
  }
  std::vector<bool> idle(j_count, true);
  for (int j : occupied) {
    if (j < 0 || static_cast<std::size_t>(j) >= j_count) {
      throw std::invalid_argument("occupied subchannel " + std::to_string(j) + " out of range");
    }
    idle[static_cast<std::size_t>(j)] = false;
  }
  return idle;
}

double time_factor(double frame_length, double sensing_interval, int slot, int slots) {
  if (slots < 1 || slot < 0 || slot > slots) {
    throw std::invalid_argument("slot " + std::to_string(slot) + " outside [0, " +
                                std::to_string(slots) + "]");
  }
  if (!(frame_length > 0)) throw std::invalid_argument("frame length must be positive");
  return (frame_length - sensing_interval * (static_cast<double>(slot) / slots)) / frame_length;
}

double adaptive_throughput(int terminated_slot, const std::vector<bool> &decisions,
                           const SubchannelSet &occupied, const LinkModel &link,
                           const ScenarioConfig &config) {
  if (terminated_slot < 1 || terminated_slot > config.mini_slots) {
    throw std::invalid_argument("terminated slot " + std::to_string(terminated_slot) +
                                " outside [1, L]");
  }
  const double rate = opportunistic_rate(scenario_links(config, link),
                                         counted_subchannels(config, decisions, occupied));
  return time_factor(config.frame_length, config.sensing_interval, terminated_slot, config.mini_slots) *
         rate;
}

double baseline_throughput(const std::vector<bool> &decisions, const SubchannelSet &occupied,
                           const LinkModel &link, const ScenarioConfig &config) {
  const double rate = opportunistic_rate(scenario_links(config, link),
                                         counted_subchannels(config, decisions, occupied));
  return time_factor(config.frame_length, config.sensing_interval, config.mini_slots,
                     config.mini_slots) *
         rate;
}

} // namespace specsense
