#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace specsense {

inline constexpr const char *kScenarioSchema = "specsense.scenario/1";

/// One primary-user subband of the multiband test signal.
struct SubbandSpec {
  double center_freq = 0.0; // Hz
  double bandwidth = 0.0;   // Hz
  double power = 0.0;       // linear, relative to the unit background noise
  double time_offset = 0.0; // seconds

  static SubbandSpec from_snr_db(double center_freq, double bandwidth,
                                 double snr_db, double time_offset);
  double lower_edge() const { return center_freq - bandwidth / 2; }
  double upper_edge() const { return center_freq + bandwidth / 2; }
};

/// Parameters for drawing a random subband layout from the signal seed.
struct SubbandDraw {
  int count = 8;
  double min_bandwidth = 0.0;
  double max_bandwidth = 0.0;
  int min_snr_db = 7;
  int max_snr_db = 27;
  // The shared time offset is drawn from [0, max_offset_fraction * tau].
  double max_offset_fraction = 0.25;
};

/// Proximal-gradient solver knobs.
struct SolverSettings {
  int max_iterations = 2000;      // per continuation stage
  double stop_tolerance = 1e-6;   // relative iterate change, final stage
  double stage_tolerance = 1e-4;  // same, for stages that only warm-start the next
  int continuation_steps = 8;     // geometric lambda stages down to the floor
  double tol_slack = 0.05;        // residual band half-width, relative to target
  double lambda_floor_ratio = 1e-6;
  int refine_steps = 6;           // log-bisection stages when the band is overshot
  int power_iterations = 20;
  double step_safety = 0.99;
};

/// How the continuous-time pulses are evaluated on the Nyquist grid.
enum class PulseModel {
  Direct,   // x[n] = x_c(n / f_N), the pulse truncated to the sensing window
  Periodic, // x_c periodised with period tau before sampling
};

struct ScenarioConfig {
  double total_bandwidth = 0.0;   // W, Hz
  int num_subchannels = 0;        // J
  double frame_length = 0.0;      // T, s
  double sensing_interval = 0.0;  // tau, s
  int mini_slots = 0;             // L
  double nyquist_rate = 0.0;      // f_N, Hz
  double subnyquist_rate = 0.0;   // f_S, Hz

  std::vector<SubbandSpec> subbands;
  std::optional<SubbandDraw> random_subbands;
  PulseModel pulse_model = PulseModel::Periodic;
  double background_noise_variance = 1.0;

  // Measurement rows drawn from CN(0, 1) (true) or N(0, 1) (false).
  bool complex_measurements = true;
  // Restrict recovered spectra to those of real-valued signals.
  bool real_signal_recovery = true;

  double smnr_db = 50.0;
  // Explicit measurement-noise variance per real component; overrides SMNR.
  std::optional<double> noise_variance;

  std::uint64_t noise_seed = 1;
  std::uint64_t matrix_seed = 2;
  std::uint64_t signal_seed = 3;

  double test_fraction = 0.1;
  // Halting accuracy as a fraction of 2*delta^2, unless given absolutely.
  double accuracy_factor = 10.0;
  std::optional<double> accuracy;
  // Recovery residual threshold; default derived from delta and r_l.
  std::optional<double> recovery_threshold;

  SolverSettings solver;

  // Detection and link model.
  double target_pfa = 0.01;
  double transmit_power_dbm = 40.0;
  double distance_km = 0.05;
  double noise_density_dbm_hz = -174.0;
  bool throughput_over_decisions = false;

  int nyquist_samples() const;      // N
  int compressed_samples() const;   // M_L
  int rows_per_slot() const;        // M_L / L
  int bins_per_subchannel() const;  // N / J
  double subchannel_bandwidth() const { return total_bandwidth / num_subchannels; }

  /// Copy with every seed advanced by `trial`.
  ScenarioConfig for_trial(std::uint64_t trial) const;
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const ScenarioConfig &config);

void to_json(nlohmann::json &j, const ScenarioConfig &config);
void from_json(const nlohmann::json &j, ScenarioConfig &config);

ScenarioConfig load_config(const std::filesystem::path &path);
void save_config(const ScenarioConfig &config, const std::filesystem::path &path);

} // namespace specsense
