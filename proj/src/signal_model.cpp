#include "specsense/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specsense/dft.hpp"
#include "specsense/rng.hpp"

namespace specsense {

namespace {

constexpr std::uint64_t kLayoutStream = 0x21;
constexpr std::uint64_t kBackgroundStream = 0x22;
constexpr int kMaxPlacementAttempts = 10000;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

bool overlaps(const SubbandSpec &a, const SubbandSpec &b) {
  return !(a.upper_edge() <= b.lower_edge() || b.upper_edge() <= a.lower_edge());
}

void check_layout(const ScenarioConfig &config, const std::vector<SubbandSpec> &bands) {
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto &b = bands[i];
    if (!(b.bandwidth > 0) || b.power < 0) {
      throw std::invalid_argument("subband " + std::to_string(i) + " has invalid bandwidth or power");
    }
    if (b.lower_edge() < 0 || b.upper_edge() > config.total_bandwidth) {
      throw std::invalid_argument("subband " + std::to_string(i) + " extends outside [0, W]");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (overlaps(b, bands[k])) {
        throw std::invalid_argument("subbands " + std::to_string(k) + " and " +
                                    std::to_string(i) + " overlap");
      }
    }
  }
}

// Fourier-series value of one subband pulse at frequency nu, i.e. the
// continuous-time transform of the pulse divided by the period.
Complex pulse_coefficient(const SubbandSpec &b, double nu, double period) {
  auto rect = [&](double offset) {
    const double d = std::abs(offset) - b.bandwidth / 2;
    if (d < 0) return 1.0;
    if (d == 0) return 0.5;
    return 0.0;
  };
  const double weight = 0.5 * (rect(nu - b.center_freq) + rect(nu + b.center_freq));
  if (weight == 0.0) return {0.0, 0.0};
  const double amplitude = std::sqrt(b.power / b.bandwidth) * weight / period;
  return amplitude * std::polar(1.0, -2.0 * std::numbers::pi * nu * b.time_offset);
}

} // namespace

std::vector<SubbandSpec> realize_subbands(const ScenarioConfig &config) {
  std::vector<SubbandSpec> bands = config.subbands;
  if (config.random_subbands) {
    const auto &draw = *config.random_subbands;
    Rng rng(mix_seed(config.signal_seed, kLayoutStream));
    const double alpha = rng.uniform(0.0, draw.max_offset_fraction * config.sensing_interval);
    const std::size_t target = bands.size() + static_cast<std::size_t>(draw.count);
    int attempts = 0;
    while (bands.size() < target) {
      if (++attempts > kMaxPlacementAttempts) {
        throw std::invalid_argument("cannot place the requested number of non-overlapping subbands");
      }
      const double bw = rng.uniform(draw.min_bandwidth, draw.max_bandwidth);
      const double fc = rng.uniform(bw / 2, config.total_bandwidth - bw / 2);
      SubbandSpec candidate{fc, bw, 0.0, alpha};
      if (std::any_of(bands.begin(), bands.end(),
                      [&](const SubbandSpec &b) { return overlaps(b, candidate); })) {
        continue;
      }
      candidate.power = std::pow(10.0, rng.uniform_int(draw.min_snr_db, draw.max_snr_db) / 10.0);
      bands.push_back(candidate);
    }
  }
  check_layout(config, bands);
  return bands;
}

CVector multiband_samples(const ScenarioConfig &config, const std::vector<SubbandSpec> &bands) {
  const int n = config.nyquist_samples();
  const double fs = config.nyquist_rate;
  CVector x = CVector::Zero(n);
  if (bands.empty()) return x;

  if (config.pulse_model == PulseModel::Direct) {
    for (int i = 0; i < n; ++i) {
      const double t = i / fs;
      double acc = 0.0;
      for (const auto &b : bands) {
        const double s = t - b.time_offset;
        acc += std::sqrt(b.power * b.bandwidth) * sinc(b.bandwidth * s) *
               std::cos(2.0 * std::numbers::pi * b.center_freq * s);
      }
      x[i] = acc;
    }
    return x;
  }

  // Periodic: sampling the tau-periodic extension on N points per period
  // leaves Fourier-series coefficient c_k in DFT bin k mod N, scaled by sqrt(N).
  // For even N, k = -N/2 and k = N/2 alias onto the same bin.
  const double period = config.sensing_interval;
  CVector spectrum = CVector::Zero(n);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int k = -n / 2; k <= n / 2; ++k) {
    const double nu = k / period;
    Complex c{0.0, 0.0};
    for (const auto &b : bands) c += pulse_coefficient(b, nu, period);
    spectrum[((k % n) + n) % n] += root_n * c;
  }
  x = inverse_unitary_dft(spectrum);
  for (int i = 0; i < n; ++i) x[i] = x[i].real();
  return x;
}

NyquistSignal synthesize(const ScenarioConfig &config) {
  NyquistSignal out;
  out.subbands = realize_subbands(config);
  out.samples = multiband_samples(config, out.subbands);
  if (config.background_noise_variance > 0) {
    Rng rng(mix_seed(config.signal_seed, kBackgroundStream));
    const double sd = std::sqrt(config.background_noise_variance);
    for (Eigen::Index i = 0; i < out.samples.size(); ++i) out.samples[i] += sd * rng.normal();
  }
  out.spectrum = unitary_dft(out.samples);
  out.occupied = occupancy_of(config, out.subbands);
  return out;
}

SubchannelSet occupancy_of(const ScenarioConfig &config, const std::vector<SubbandSpec> &bands) {
  SubchannelSet occupied;
  const double width = config.subchannel_bandwidth();
  for (int j = 0; j < config.num_subchannels; ++j) {
    const double lo = j * width;
    const double hi = (j + 1) * width;
    const bool hit = std::any_of(bands.begin(), bands.end(), [&](const SubbandSpec &b) {
      return b.power > 0 && b.lower_edge() < hi && b.upper_edge() > lo;
    });
    if (hit) occupied.push_back(j);
  }
  return occupied;
}

SubchannelSet ground_truth_occupancy(const ScenarioConfig &config) {
  return occupancy_of(config, realize_subbands(config));
}

std::vector<std::vector<int>> subchannel_bins(const ScenarioConfig &config) {
  const int n = config.nyquist_samples();
  const int j_count = config.num_subchannels;
  const double positive = config.total_bandwidth * n / (config.nyquist_rate * j_count);
  const int per = static_cast<int>(std::lround(positive));
  std::vector<std::vector<int>> bins(static_cast<std::size_t>(j_count));
  for (int k = 0; k < n; ++k) {
    const int folded = std::min(k, n - k);
    if (folded >= per * j_count) continue;
    bins[static_cast<std::size_t>(folded / per)].push_back(k);
  }
  return bins;
}

} // namespace specsense
