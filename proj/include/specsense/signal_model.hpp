#pragma once

#include <vector>

#include "specsense/config.hpp"
#include "specsense/types.hpp"

namespace specsense {

/// Nyquist-rate record of the received wideband signal.
struct NyquistSignal {
  CVector samples;   // x, length N
  CVector spectrum;  // X = unitary DFT of x
  SubchannelSet occupied; // Omega, sorted, 0-based
  std::vector<SubbandSpec> subbands; // the realised layout
};

/// Explicit subbands followed by any randomly drawn ones (from signal_seed).
/// Throws std::invalid_argument if the layout overlaps or leaves [0, W].
std::vector<SubbandSpec> realize_subbands(const ScenarioConfig &config);

/// Noiseless multiband component sampled at n / f_N, per the configured pulse model.
CVector multiband_samples(const ScenarioConfig &config, const std::vector<SubbandSpec> &subbands);

NyquistSignal synthesize(const ScenarioConfig &config);

/// Subchannel j is occupied iff [jW/J, (j+1)W/J) meets a subband with nonzero power.
SubchannelSet ground_truth_occupancy(const ScenarioConfig &config);
SubchannelSet occupancy_of(const ScenarioConfig &config, const std::vector<SubbandSpec> &subbands);

/// DFT bins owned by each subchannel: the positive-frequency bins in
/// [jW/J, (j+1)W/J) together with their negative-frequency mirrors.
std::vector<std::vector<int>> subchannel_bins(const ScenarioConfig &config);

} // namespace specsense
