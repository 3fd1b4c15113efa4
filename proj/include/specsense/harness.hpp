#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specsense/config.hpp"
#include "specsense/csv.hpp"
#include "specsense/orchestrator.hpp"

namespace specsense {

inline constexpr const char *kPlanSchema = "specsense.plan/1";

/// Desk-sized scenario: every rate scaled by 1/64 from the 2 GHz setup,
/// N = 4000, M_L = 1000, L = 20, eight random subbands.
ScenarioConfig desk_preset();
/// The 2 GHz setup itself: N = 20000, M_L = 5000. Slow.
ScenarioConfig paper_scale_preset();

enum class SweepParameter { TransmitPower, Distance, TestFraction, AccuracyFactor };

std::string sweep_parameter_name(SweepParameter p);
/// Accepts transmit_power_dbm, distance_km, test_fraction, accuracy_factor.
SweepParameter parse_sweep_parameter(const std::string &name);
/// True when the parameter only enters the link model, so one set of
/// sensing runs serves every sweep value.
bool link_only(SweepParameter p);
ScenarioConfig with_parameter(ScenarioConfig config, SweepParameter p, double value);

struct Sweep {
  SweepParameter parameter = SweepParameter::TransmitPower;
  std::vector<double> values;
};

enum class Figure { None, Trace, Spectrum, Throughput };

struct ExperimentPlan {
  std::string name = "run";
  ScenarioConfig scenario;
  int trials = 1;
  std::uint64_t base_seed = 0; // trial t runs with every seed advanced by base_seed + t
  std::optional<Sweep> sweep;
  Figure figure = Figure::None;
  std::filesystem::path output_dir = "out";
  int threads = 0;             // 0: one per hardware thread
};

/// Throws std::invalid_argument for trials < 1, an invalid scenario, or a
/// sweep value that makes the scenario invalid.
void validate_plan(const ExperimentPlan &plan);

ExperimentPlan figure_plan(Figure figure, bool paper_scale);

/// Plan files may embed the scenario or name it via "scenario_file",
/// resolved against the plan file's directory.
ExperimentPlan load_plan(const std::filesystem::path &path);
nlohmann::json plan_to_json(const ExperimentPlan &plan);

struct TrialRow {
  int trial = 0;
  std::uint64_t noise_seed = 0, matrix_seed = 0, signal_seed = 0;
  int terminated_slot = 0;
  bool halted = false;
  int measurements = 0;       // M at l*
  double rho_over_v = 0.0;    // at l*
  double two_delta_sq = 0.0;
  double accuracy = 0.0;
  double relative_error = 0.0; // ||X - X_hat|| / ||X|| at l*
  int solver_iterations = 0;   // at l*
  int occupied = 0;            // |Omega|
  int detected = 0;            // subchannels decided busy
  double false_alarm = 0.0;
  double detection = 0.0;
  double throughput_adaptive = 0.0;
  double throughput_baseline = 0.0;
  double ratio = 0.0;          // C* / C
  int sparsity = 0;            // nonzero bins of the noiseless spectrum
  std::string decisions;       // one character per subchannel, '1' = decided busy
};

struct Aggregate {
  int trials = 0;
  double mean_terminated_slot = 0.0;
  double halted_fraction = 0.0;
  double mean_relative_error = 0.0;
  double mean_false_alarm = 0.0; // over trials where it is defined
  double mean_detection = 0.0;
  double mean_throughput_adaptive = 0.0;
  double mean_throughput_baseline = 0.0;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
};

Aggregate aggregate(const std::vector<TrialRow> &rows);

struct SweepPoint {
  double value = 0.0; // NaN without a sweep
  std::vector<TrialRow> rows;
  Aggregate summary;
};

struct ExperimentResult {
  std::vector<SweepPoint> points;
  std::vector<std::string> violations; // invariant breaches, empty when clean
  int max_sparsity = 0;
  double implied_c0 = 0.0; // M_L / (k_max ln(N / k_max)) with k_max = max_sparsity
};

/// Runs every trial (in parallel across trials) and checks per-trial
/// invariants. Output is independent of thread count and scheduling.
ExperimentResult run(const ExperimentPlan &plan);

TrialRow trial_row(int trial, const ScenarioConfig &trial_config, const SensingOutcome &outcome,
                   int sparsity);
/// Nonzero bins of the noiseless multiband spectrum.
int spectral_sparsity(const ScenarioConfig &config);

CsvTable trial_table(const ExperimentResult &result);
CsvTable summary_table(const ExperimentResult &result);
CsvTable trace_table(const SlotTrace &trace);
/// Per-subchannel statistic, threshold, decision and ground truth.
CsvTable detection_table(const DetectionResult &detection, const SubchannelSet &occupied);
CsvTable spectrum_table(const ScenarioConfig &config, const CVector &truth, const CVector &estimate);

nlohmann::json manifest(const ExperimentPlan &plan, const ExperimentResult &result);

/// Runs the plan and writes trials.csv, summary.csv, manifest.json and the
/// figure outputs into plan.output_dir. Returns the result.
ExperimentResult execute(const ExperimentPlan &plan);

/// Calls fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)> &fn);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Structural invariants: Parseval, training/testing partition, matrix
/// prefix property, byte-identical reruns.
std::vector<CheckResult> run_invariant_suite();

} // namespace specsense
