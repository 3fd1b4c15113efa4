#include "specsense/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "specsense/signal_model.hpp"

namespace specsense {

namespace {

double chi2_quantile(double dof, double p) {
  return boost::math::quantile(boost::math::chi_squared(dof), p);
}

double chi2_cdf(double dof, double x) {
  return boost::math::cdf(boost::math::chi_squared(dof), x);
}

} // namespace

DetectionSettings detection_settings(const ScenarioConfig &config) {
  DetectionSettings s;
  s.target_pfa = config.target_pfa;
  s.known_floor = config.background_noise_variance;
  s.hermitian = config.real_signal_recovery;
  return s;
}

double quartile_floor(const std::vector<double> &per_bin_energy, double dof) {
  const std::size_t count = per_bin_energy.size() / 4;
  if (count == 0) throw std::invalid_argument("quartile floor needs at least 4 subchannels");
  std::vector<double> sorted = per_bin_energy;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count) - 1,
                   sorted.end());
  std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count));
  double mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) mean += sorted[i];
  mean /= static_cast<double>(count);
  // E[Y | Y <= F_k^{-1}(q)] = k F_{k+2}(F_k^{-1}(q)) / q for Y ~ chi2_k.
  const double q = static_cast<double>(count) / static_cast<double>(per_bin_energy.size());
  const double shrink = chi2_cdf(dof + 2.0, chi2_quantile(dof, q)) / q;
  return mean / shrink;
}

DetectionResult energy_detect(const CVector &spectrum, const std::vector<std::vector<int>> &bins,
                              const DetectionSettings &settings) {
  if (bins.size() < 4) {
    throw std::invalid_argument("energy detection needs at least 4 subchannels, got " +
                                std::to_string(bins.size()));
  }
  if (!(settings.target_pfa > 0 && settings.target_pfa < 1)) {
    throw std::invalid_argument("target_pfa must lie in (0, 1)");
  }
  if (settings.known_floor < 0) throw std::invalid_argument("known noise floor must be nonnegative");

  DetectionResult out;
  out.target_pfa = settings.target_pfa;
  const std::size_t j_count = bins.size();
  out.statistics.resize(j_count);
  out.degrees_of_freedom.resize(j_count);
  std::vector<double> per_bin(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    if (bins[j].empty()) throw std::invalid_argument("subchannel " + std::to_string(j) + " owns no bins");
    double energy = 0.0;
    for (int k : bins[j]) {
      if (k < 0 || k >= spectrum.size()) throw std::invalid_argument("bin index outside the spectrum");
      energy += std::norm(spectrum[k]);
    }
    const double size = static_cast<double>(bins[j].size());
    out.statistics[j] = energy;
    out.degrees_of_freedom[j] = settings.hermitian ? size : 2.0 * size;
    per_bin[j] = energy / size;
  }

  if (settings.floor_mode == FloorMode::Known) {
    out.floor = settings.known_floor;
  } else {
    std::vector<double> dofs = out.degrees_of_freedom;
    std::nth_element(dofs.begin(), dofs.begin() + static_cast<std::ptrdiff_t>(j_count / 2), dofs.end());
    const double dof = dofs[j_count / 2];
    // per_bin * size / eta ~ chi2_dof scaled by size / dof, so rescale.
    std::vector<double> scaled(j_count);
    const double bins_per_dof = settings.hermitian ? 1.0 : 0.5;
    for (std::size_t j = 0; j < j_count; ++j) scaled[j] = per_bin[j] * dof * bins_per_dof;
    const double estimate = quartile_floor(scaled, dof) / (dof * bins_per_dof);
    // Below this an idle subchannel holds only FFT roundoff.
    const double resolution = std::pow(64 * std::numeric_limits<double>::epsilon(), 2) *
                              spectrum.squaredNorm() / static_cast<double>(spectrum.size());
    out.floor = std::max({estimate, settings.known_floor, resolution});
  }

  out.thresholds.resize(j_count);
  out.decisions.resize(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    const double dof = out.degrees_of_freedom[j];
    const double scale = settings.hermitian ? out.floor : out.floor / 2.0;
    out.thresholds[j] = scale * chi2_quantile(dof, 1.0 - settings.target_pfa);
    out.decisions[j] = out.statistics[j] > out.thresholds[j];
  }
  return out;
}

DetectionResult energy_detect(const CVector &spectrum, const ScenarioConfig &config) {
  return energy_detect(spectrum, subchannel_bins(config), detection_settings(config));
}

ConfusionRates confusion(const std::vector<bool> &decisions, const SubchannelSet &occupied) {
  std::vector<bool> truth(decisions.size(), false);
  for (int j : occupied) {
    if (j < 0 || static_cast<std::size_t>(j) >= decisions.size()) {
      throw std::invalid_argument("occupied subchannel " + std::to_string(j) + " out of range");
    }
    truth[static_cast<std::size_t>(j)] = true;
  }
  int idle = 0, busy = 0, false_alarms = 0, detections = 0;
  for (std::size_t j = 0; j < decisions.size(); ++j) {
    if (truth[j]) {
      ++busy;
      detections += decisions[j];
    } else {
      ++idle;
      false_alarms += decisions[j];
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {idle ? static_cast<double>(false_alarms) / idle : nan,
          busy ? static_cast<double>(detections) / busy : nan};
}

} // namespace specsense
