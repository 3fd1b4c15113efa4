#pragma once

#include <utility>
#include <vector>

#include "specsense/config.hpp"
#include "specsense/types.hpp"

namespace specsense {

enum class FloorMode {
  Estimated, // max(quartile estimate, known floor, (64 eps)^2 ||X||^2 / N)
  Known,     // the known floor alone
};

struct DetectionSettings {
  double target_pfa = 0.01;
  // Per-bin noise energy known a priori; 0 when unknown.
  double known_floor = 0.0;
  FloorMode floor_mode = FloorMode::Estimated;
  // Hermitian spectra (real signals) carry one real degree of freedom per
  // bin; general complex spectra carry two.
  bool hermitian = true;
};

DetectionSettings detection_settings(const ScenarioConfig &config);

struct DetectionResult {
  std::vector<bool> decisions;     // true = primary user present
  std::vector<double> statistics;  // sum of |X_hat|^2 over each subchannel's bins
  std::vector<double> thresholds;  // gamma_j
  std::vector<double> degrees_of_freedom;
  double floor = 0.0;              // per-bin noise energy eta used for gamma
  double target_pfa = 0.0;
};

/// Per-subchannel energy detector. Noise-only bins make the statistic
/// eta * chi2_{|bins|} (Hermitian) or (eta / 2) * chi2_{2 |bins|}; gamma_j
/// is its (1 - target_pfa) quantile. Throws std::invalid_argument for
/// fewer than 4 subchannels, an empty subchannel, a bin outside the
/// spectrum, or target_pfa outside (0, 1).
DetectionResult energy_detect(const CVector &spectrum, const std::vector<std::vector<int>> &bins,
                              const DetectionSettings &settings);

DetectionResult energy_detect(const CVector &spectrum, const ScenarioConfig &config);

/// Mean of the lowest-quartile per-bin energies, corrected for the bias of
/// taking the smallest order statistics of chi2_dof variables.
double quartile_floor(const std::vector<double> &per_bin_energy, double dof);

struct ConfusionRates {
  double false_alarm = 0.0; // over idle subchannels; NaN when none are idle
  double detection = 0.0;   // over occupied subchannels; NaN when none are
};

/// Throws std::invalid_argument if an index in `occupied` is out of range.
ConfusionRates confusion(const std::vector<bool> &decisions, const SubchannelSet &occupied);

} // namespace specsense
