#include "specsense/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace specsense {

namespace {

int checked_integer(double value, const char *what) {
  const double rounded = std::round(value);
  if (rounded < 1.0 || std::abs(value - rounded) > 1e-6 * std::max(1.0, rounded)) {
    throw std::invalid_argument(std::string(what) + " must be a positive integer, got " +
                                std::to_string(value));
  }
  return static_cast<int>(rounded);
}

void require(bool ok, const std::string &message) {
  if (!ok) throw std::invalid_argument(message);
}

} // namespace

SubbandSpec SubbandSpec::from_snr_db(double center_freq, double bandwidth, double snr_db,
                                     double time_offset) {
  return {center_freq, bandwidth, std::pow(10.0, snr_db / 10.0), time_offset};
}

int ScenarioConfig::nyquist_samples() const {
  return checked_integer(sensing_interval * nyquist_rate, "N = tau * f_N");
}

int ScenarioConfig::compressed_samples() const {
  return checked_integer(sensing_interval * subnyquist_rate, "M_L = tau * f_S");
}

int ScenarioConfig::rows_per_slot() const {
  const int m = compressed_samples();
  if (mini_slots < 1 || m % mini_slots != 0) {
    throw std::invalid_argument("M_L must be divisible by the number of mini slots");
  }
  return m / mini_slots;
}

int ScenarioConfig::bins_per_subchannel() const {
  const int n = nyquist_samples();
  if (num_subchannels < 1 || n % num_subchannels != 0) {
    throw std::invalid_argument("J must divide N");
  }
  return n / num_subchannels;
}

ScenarioConfig ScenarioConfig::for_trial(std::uint64_t trial) const {
  ScenarioConfig c = *this;
  c.noise_seed += trial;
  c.matrix_seed += trial;
  c.signal_seed += trial;
  return c;
}

void validate(const ScenarioConfig &c) {
  require(c.total_bandwidth > 0, "total bandwidth W must be positive");
  require(c.nyquist_rate >= 2 * c.total_bandwidth, "Nyquist rate must satisfy f_N >= 2W");
  require(c.subnyquist_rate > 0 && c.subnyquist_rate < 2 * c.total_bandwidth,
          "sub-Nyquist rate must satisfy 0 < f_S < 2W");
  require(c.sensing_interval > 0 && c.sensing_interval < c.frame_length,
          "sensing interval must satisfy 0 < tau < T");
  require(c.mini_slots >= 1, "need at least one mini slot");
  const int n = c.nyquist_samples();
  const int m = c.compressed_samples();
  require(m < n, "M_L must be smaller than N");
  c.rows_per_slot();
  c.bins_per_subchannel();
  const double positive_bins =
      c.total_bandwidth * n / (c.nyquist_rate * c.num_subchannels);
  checked_integer(positive_bins, "positive-frequency bins per subchannel");
  require(c.test_fraction > 0 && c.test_fraction < 1, "test_fraction must lie in (0, 1)");
  require(c.accuracy_factor > 0, "accuracy factor must be positive");
  require(!c.accuracy || *c.accuracy >= 0, "accuracy must be nonnegative");
  require(!c.recovery_threshold || *c.recovery_threshold >= 0,
          "recovery threshold must be nonnegative");
  require(!c.noise_variance || *c.noise_variance >= 0, "noise variance must be nonnegative");
  require(c.background_noise_variance >= 0, "background noise variance must be nonnegative");
  require(c.target_pfa > 0 && c.target_pfa < 1, "target false-alarm probability must lie in (0, 1)");
  require(c.distance_km > 0, "link distance must be positive");

  const auto &s = c.solver;
  require(s.max_iterations > 0 && s.continuation_steps > 0 && s.power_iterations > 0 &&
              s.refine_steps >= 0,
          "solver iteration counts must be positive");
  require(s.stop_tolerance > 0 && s.stop_tolerance < 1, "solver stop tolerance must lie in (0, 1)");
  require(s.stage_tolerance >= s.stop_tolerance && s.stage_tolerance < 1,
          "solver stage tolerance must lie in [stop_tolerance, 1)");
  require(s.tol_slack > 0 && s.tol_slack < 1, "solver slack must lie in (0, 1)");
  require(s.lambda_floor_ratio > 0 && s.lambda_floor_ratio < 1, "lambda floor ratio must lie in (0, 1)");
  require(s.step_safety > 0 && s.step_safety <= 1, "step safety factor must lie in (0, 1]");

  if (c.random_subbands) {
    const auto &d = *c.random_subbands;
    require(d.count >= 0, "random subband count must be nonnegative");
    require(d.min_bandwidth > 0 && d.max_bandwidth >= d.min_bandwidth &&
                d.max_bandwidth <= c.total_bandwidth,
            "random subband bandwidth range is invalid");
    require(d.min_snr_db <= d.max_snr_db, "random subband SNR range is invalid");
    require(d.max_offset_fraction >= 0, "time offset fraction must be nonnegative");
  }
  for (std::size_t i = 0; i < c.subbands.size(); ++i) {
    const auto &b = c.subbands[i];
    const auto tag = "subband " + std::to_string(i) + ": ";
    require(b.bandwidth > 0, tag + "bandwidth must be positive");
    require(b.power >= 0, tag + "power must be nonnegative");
    require(b.lower_edge() >= 0 && b.upper_edge() <= c.total_bandwidth,
            tag + "extends outside [0, W]");
    for (std::size_t k = 0; k < i; ++k) {
      const auto &o = c.subbands[k];
      require(b.upper_edge() <= o.lower_edge() || o.upper_edge() <= b.lower_edge(),
              tag + "overlaps subband " + std::to_string(k));
    }
  }
}

namespace {

std::string pulse_model_name(PulseModel m) {
  return m == PulseModel::Direct ? "direct" : "periodic";
}

PulseModel parse_pulse_model(const std::string &s) {
  if (s == "direct") return PulseModel::Direct;
  if (s == "periodic") return PulseModel::Periodic;
  throw std::invalid_argument("unknown pulse model '" + s + "'");
}

template <class T>
void read_optional(const nlohmann::json &j, const char *key, T &out) {
  if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

template <class T>
void read_optional(const nlohmann::json &j, const char *key, std::optional<T> &out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

} // namespace

void to_json(nlohmann::json &j, const ScenarioConfig &c) {
  nlohmann::json bands = nlohmann::json::array();
  for (const auto &b : c.subbands) {
    bands.push_back({{"center_freq", b.center_freq},
                     {"bandwidth", b.bandwidth},
                     {"power", b.power},
                     {"time_offset", b.time_offset}});
  }
  const auto &s = c.solver;
  j = {{"schema", kScenarioSchema},
       {"total_bandwidth", c.total_bandwidth},
       {"num_subchannels", c.num_subchannels},
       {"frame_length", c.frame_length},
       {"sensing_interval", c.sensing_interval},
       {"mini_slots", c.mini_slots},
       {"nyquist_rate", c.nyquist_rate},
       {"subnyquist_rate", c.subnyquist_rate},
       {"subbands", bands},
       {"pulse_model", pulse_model_name(c.pulse_model)},
       {"background_noise_variance", c.background_noise_variance},
       {"complex_measurements", c.complex_measurements},
       {"real_signal_recovery", c.real_signal_recovery},
       {"smnr_db", c.smnr_db},
       {"noise_seed", c.noise_seed},
       {"matrix_seed", c.matrix_seed},
       {"signal_seed", c.signal_seed},
       {"test_fraction", c.test_fraction},
       {"accuracy_factor", c.accuracy_factor},
       {"target_pfa", c.target_pfa},
       {"transmit_power_dbm", c.transmit_power_dbm},
       {"distance_km", c.distance_km},
       {"noise_density_dbm_hz", c.noise_density_dbm_hz},
       {"throughput_over_decisions", c.throughput_over_decisions},
       {"solver",
        {{"max_iterations", s.max_iterations},
         {"stop_tolerance", s.stop_tolerance},
         {"stage_tolerance", s.stage_tolerance},
         {"continuation_steps", s.continuation_steps},
         {"tol_slack", s.tol_slack},
         {"lambda_floor_ratio", s.lambda_floor_ratio},
         {"refine_steps", s.refine_steps},
         {"power_iterations", s.power_iterations},
         {"step_safety", s.step_safety}}}};
  if (c.random_subbands) {
    const auto &d = *c.random_subbands;
    j["random_subbands"] = {{"count", d.count},
                            {"min_bandwidth", d.min_bandwidth},
                            {"max_bandwidth", d.max_bandwidth},
                            {"min_snr_db", d.min_snr_db},
                            {"max_snr_db", d.max_snr_db},
                            {"max_offset_fraction", d.max_offset_fraction}};
  }
  if (c.noise_variance) j["noise_variance"] = *c.noise_variance;
  if (c.accuracy) j["accuracy"] = *c.accuracy;
  if (c.recovery_threshold) j["recovery_threshold"] = *c.recovery_threshold;
}

void from_json(const nlohmann::json &j, ScenarioConfig &c) {
  if (auto it = j.find("schema"); it != j.end() && it->get<std::string>() != kScenarioSchema) {
    throw std::invalid_argument("unsupported scenario schema '" + it->get<std::string>() + "'");
  }
  j.at("total_bandwidth").get_to(c.total_bandwidth);
  j.at("num_subchannels").get_to(c.num_subchannels);
  j.at("frame_length").get_to(c.frame_length);
  j.at("sensing_interval").get_to(c.sensing_interval);
  j.at("mini_slots").get_to(c.mini_slots);
  j.at("nyquist_rate").get_to(c.nyquist_rate);
  j.at("subnyquist_rate").get_to(c.subnyquist_rate);

  c.subbands.clear();
  if (auto it = j.find("subbands"); it != j.end()) {
    for (const auto &b : *it) {
      SubbandSpec s;
      b.at("center_freq").get_to(s.center_freq);
      b.at("bandwidth").get_to(s.bandwidth);
      if (b.contains("snr_db")) {
        s.power = std::pow(10.0, b.at("snr_db").get<double>() / 10.0);
      } else {
        b.at("power").get_to(s.power);
      }
      read_optional(b, "time_offset", s.time_offset);
      c.subbands.push_back(s);
    }
  }
  c.random_subbands.reset();
  if (auto it = j.find("random_subbands"); it != j.end() && !it->is_null()) {
    SubbandDraw d;
    read_optional(*it, "count", d.count);
    it->at("min_bandwidth").get_to(d.min_bandwidth);
    it->at("max_bandwidth").get_to(d.max_bandwidth);
    read_optional(*it, "min_snr_db", d.min_snr_db);
    read_optional(*it, "max_snr_db", d.max_snr_db);
    read_optional(*it, "max_offset_fraction", d.max_offset_fraction);
    c.random_subbands = d;
  }
  if (auto it = j.find("pulse_model"); it != j.end()) {
    c.pulse_model = parse_pulse_model(it->get<std::string>());
  }
  read_optional(j, "background_noise_variance", c.background_noise_variance);
  read_optional(j, "complex_measurements", c.complex_measurements);
  read_optional(j, "real_signal_recovery", c.real_signal_recovery);
  read_optional(j, "smnr_db", c.smnr_db);
  read_optional(j, "noise_variance", c.noise_variance);
  read_optional(j, "noise_seed", c.noise_seed);
  read_optional(j, "matrix_seed", c.matrix_seed);
  read_optional(j, "signal_seed", c.signal_seed);
  read_optional(j, "test_fraction", c.test_fraction);
  read_optional(j, "accuracy_factor", c.accuracy_factor);
  read_optional(j, "accuracy", c.accuracy);
  read_optional(j, "recovery_threshold", c.recovery_threshold);
  read_optional(j, "target_pfa", c.target_pfa);
  read_optional(j, "transmit_power_dbm", c.transmit_power_dbm);
  read_optional(j, "distance_km", c.distance_km);
  read_optional(j, "noise_density_dbm_hz", c.noise_density_dbm_hz);
  read_optional(j, "throughput_over_decisions", c.throughput_over_decisions);
  if (auto it = j.find("solver"); it != j.end()) {
    auto &s = c.solver;
    read_optional(*it, "max_iterations", s.max_iterations);
    read_optional(*it, "stop_tolerance", s.stop_tolerance);
    read_optional(*it, "stage_tolerance", s.stage_tolerance);
    read_optional(*it, "continuation_steps", s.continuation_steps);
    read_optional(*it, "tol_slack", s.tol_slack);
    read_optional(*it, "lambda_floor_ratio", s.lambda_floor_ratio);
    read_optional(*it, "refine_steps", s.refine_steps);
    read_optional(*it, "power_iterations", s.power_iterations);
    read_optional(*it, "step_safety", s.step_safety);
  }
}

ScenarioConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument("malformed config " + path.string() + ": " + e.what());
  }
  ScenarioConfig c = j.get<ScenarioConfig>();
  validate(c);
  return c;
}

void save_config(const ScenarioConfig &config, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file " + path.string());
  out << nlohmann::json(config).dump(2) << '\n';
}

} // namespace specsense
