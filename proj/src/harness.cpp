#include "specsense/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "specsense/acquisition.hpp"
#include "specsense/dft.hpp"
#include "specsense/signal_model.hpp"
#include "specsense/svg.hpp"
#include "specsense/throughput.hpp"

namespace specsense {

namespace fs = std::filesystem;

ScenarioConfig desk_preset() {
  constexpr double scale = 1.0 / 64;
  ScenarioConfig c;
  c.total_bandwidth = 2e9 * scale;
  c.num_subchannels = 80;
  c.nyquist_rate = 4e9 * scale;
  c.subnyquist_rate = 1e9 * scale;
  c.sensing_interval = 64e-6;
  c.frame_length = 128e-6;
  c.mini_slots = 20;
  c.random_subbands = SubbandDraw{8, 10e6 * scale, 30e6 * scale, 7, 27, 0.25};
  return c;
}

ScenarioConfig paper_scale_preset() {
  ScenarioConfig c;
  c.total_bandwidth = 2e9;
  c.num_subchannels = 80;
  c.nyquist_rate = 4e9;
  c.subnyquist_rate = 1e9;
  c.sensing_interval = 5e-6;
  c.frame_length = 10e-6;
  c.mini_slots = 20;
  c.random_subbands = SubbandDraw{8, 10e6, 30e6, 7, 27, 0.25};
  return c;
}

std::string sweep_parameter_name(SweepParameter p) {
  switch (p) {
  case SweepParameter::TransmitPower: return "transmit_power_dbm";
  case SweepParameter::Distance: return "distance_km";
  case SweepParameter::TestFraction: return "test_fraction";
  case SweepParameter::AccuracyFactor: return "accuracy_factor";
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(const std::string &name) {
  for (auto p : {SweepParameter::TransmitPower, SweepParameter::Distance,
                 SweepParameter::TestFraction, SweepParameter::AccuracyFactor}) {
    if (sweep_parameter_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown sweep parameter '" + name + "'");
}

bool link_only(SweepParameter p) {
  return p == SweepParameter::TransmitPower || p == SweepParameter::Distance;
}

ScenarioConfig with_parameter(ScenarioConfig c, SweepParameter p, double value) {
  switch (p) {
  case SweepParameter::TransmitPower: c.transmit_power_dbm = value; break;
  case SweepParameter::Distance: c.distance_km = value; break;
  case SweepParameter::TestFraction: c.test_fraction = value; break;
  case SweepParameter::AccuracyFactor: c.accuracy_factor = value; break;
  }
  return c;
}

void validate_plan(const ExperimentPlan &plan) {
  if (plan.trials < 1) throw std::invalid_argument("a plan needs at least one trial");
  if (plan.threads < 0) throw std::invalid_argument("thread count must be nonnegative");
  validate(plan.scenario);
  if (plan.sweep) {
    if (plan.sweep->values.empty()) throw std::invalid_argument("sweep has no values");
    for (double v : plan.sweep->values) {
      if (!std::isfinite(v)) throw std::invalid_argument("sweep values must be finite");
      validate(with_parameter(plan.scenario, plan.sweep->parameter, v));
    }
  }
}

ExperimentPlan figure_plan(Figure figure, bool paper_scale) {
  ExperimentPlan plan;
  plan.scenario = paper_scale ? paper_scale_preset() : desk_preset();
  plan.figure = figure;
  switch (figure) {
  case Figure::Trace: plan.name = "fig2"; break;
  case Figure::Spectrum: plan.name = "fig3"; break;
  case Figure::Throughput: {
    plan.name = "fig4";
    plan.trials = 10;
    Sweep sweep;
    for (int p = 30; p <= 50; p += 2) sweep.values.push_back(p);
    plan.sweep = sweep;
    break;
  }
  case Figure::None: break;
  }
  plan.output_dir = fs::path("out") / plan.name;
  return plan;
}

namespace {

const char *figure_name(Figure f) {
  switch (f) {
  case Figure::Trace: return "trace";
  case Figure::Spectrum: return "spectrum";
  case Figure::Throughput: return "throughput";
  case Figure::None: return "none";
  }
  return "none";
}

Figure parse_figure(const std::string &name) {
  for (auto f : {Figure::None, Figure::Trace, Figure::Spectrum, Figure::Throughput}) {
    if (name == figure_name(f)) return f;
  }
  throw std::invalid_argument("unknown figure kind '" + name + "'");
}

} // namespace

ExperimentPlan load_plan(const fs::path &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  if (j.value("schema", std::string(kPlanSchema)) != kPlanSchema) {
    throw std::invalid_argument(path.string() + ": unsupported plan schema");
  }
  ExperimentPlan plan;
  plan.name = j.value("name", plan.name);
  if (auto it = j.find("scenario_file"); it != j.end()) {
    plan.scenario = load_config(path.parent_path() / it->get<std::string>());
  } else {
    plan.scenario = j.at("scenario").get<ScenarioConfig>();
  }
  plan.trials = j.value("trials", plan.trials);
  plan.base_seed = j.value("base_seed", plan.base_seed);
  plan.threads = j.value("threads", plan.threads);
  plan.figure = parse_figure(j.value("figure", std::string("none")));
  plan.output_dir = j.value("output_dir", plan.output_dir.string());
  if (auto it = j.find("sweep"); it != j.end()) {
    Sweep s;
    s.parameter = parse_sweep_parameter(it->at("parameter").get<std::string>());
    s.values = it->at("values").get<std::vector<double>>();
    plan.sweep = s;
  }
  validate_plan(plan);
  return plan;
}

nlohmann::json plan_to_json(const ExperimentPlan &plan) {
  nlohmann::json j = {{"schema", kPlanSchema},
                      {"name", plan.name},
                      {"scenario", plan.scenario},
                      {"trials", plan.trials},
                      {"base_seed", plan.base_seed},
                      {"figure", figure_name(plan.figure)},
                      {"output_dir", plan.output_dir.string()}};
  if (plan.sweep) {
    j["sweep"] = {{"parameter", sweep_parameter_name(plan.sweep->parameter)},
                  {"values", plan.sweep->values}};
  }
  return j;
}

void parallel_for(int count, int threads, const std::function<void(int)> &fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto &th : pool) th.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int spectral_sparsity(const ScenarioConfig &config) {
  const CVector clean = unitary_dft(multiband_samples(config, realize_subbands(config)));
  const double peak = clean.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0;
  return static_cast<int>((clean.array().abs() > 1e-9 * peak).count());
}

TrialRow trial_row(int trial, const ScenarioConfig &c, const SensingOutcome &o, int sparsity) {
  TrialRow r;
  r.trial = trial;
  r.noise_seed = c.noise_seed;
  r.matrix_seed = c.matrix_seed;
  r.signal_seed = c.signal_seed;
  r.terminated_slot = o.terminated_slot;
  r.halted = o.halted;
  const auto &last = o.trace.back();
  r.measurements = last.measurements;
  r.rho_over_v = last.normalized;
  r.two_delta_sq = last.predicted;
  r.accuracy = o.accuracy;
  r.relative_error = o.relative_error();
  r.solver_iterations = o.estimate.iterations;
  r.occupied = static_cast<int>(o.occupied.size());
  r.detected = static_cast<int>(
      std::count(o.detection.decisions.begin(), o.detection.decisions.end(), true));
  const ConfusionRates rates = confusion(o.detection.decisions, o.occupied);
  r.false_alarm = rates.false_alarm;
  r.detection = rates.detection;
  r.throughput_adaptive = o.throughput_adaptive;
  r.throughput_baseline = o.throughput_baseline;
  r.ratio = o.throughput_baseline > 0 ? o.throughput_adaptive / o.throughput_baseline
                                      : std::numeric_limits<double>::quiet_NaN();
  r.sparsity = sparsity;
  for (bool d : o.detection.decisions) r.decisions.push_back(d ? '1' : '0');
  return r;
}

Aggregate aggregate(const std::vector<TrialRow> &rows) {
  Aggregate a;
  a.trials = static_cast<int>(rows.size());
  if (rows.empty()) return a;
  const auto mean = [&](auto field) {
    double sum = 0.0;
    int n = 0;
    for (const auto &r : rows) {
      const double v = field(r);
      if (std::isnan(v)) continue;
      sum += v;
      ++n;
    }
    return n ? sum / n : std::numeric_limits<double>::quiet_NaN();
  };
  a.mean_terminated_slot = mean([](const TrialRow &r) { return double(r.terminated_slot); });
  a.halted_fraction = mean([](const TrialRow &r) { return r.halted ? 1.0 : 0.0; });
  a.mean_relative_error = mean([](const TrialRow &r) { return r.relative_error; });
  a.mean_false_alarm = mean([](const TrialRow &r) { return r.false_alarm; });
  a.mean_detection = mean([](const TrialRow &r) { return r.detection; });
  a.mean_throughput_adaptive = mean([](const TrialRow &r) { return r.throughput_adaptive; });
  a.mean_throughput_baseline = mean([](const TrialRow &r) { return r.throughput_baseline; });
  a.mean_ratio = mean([](const TrialRow &r) { return r.ratio; });
  a.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto &r : rows) {
    if (!std::isnan(r.ratio)) a.min_ratio = std::min(a.min_ratio, r.ratio);
  }
  if (std::isinf(a.min_ratio)) a.min_ratio = std::numeric_limits<double>::quiet_NaN();
  return a;
}

namespace {

void check_outcome(const ScenarioConfig &c, const SensingOutcome &o, int trial,
                   std::vector<std::string> &violations) {
  const auto fail = [&](const std::string &what) {
    violations.push_back("trial " + std::to_string(trial) + ": " + what);
  };
  const int l = o.terminated_slot;
  if (l < 1 || l > c.mini_slots) fail("terminated slot out of range");
  if (static_cast<int>(o.trace.size()) != l) fail("trace length differs from l*");
  if (o.trace.empty()) return;
  const auto &last = o.trace.back();
  if (o.halted != last.halted) fail("halted flag disagrees with the last trace entry");
  if (l < c.mini_slots && !o.halted) fail("stopped before L without halting");
  const bool criterion =
      last.solver_converged && halting_check(last.rho, last.testing_size, o.noise_variance, o.accuracy);
  if (criterion != last.halted) fail("halted flag disagrees with the halting check");
  if (o.throughput_adaptive < o.throughput_baseline) fail("C* < C");
  if (o.throughput_baseline > 0) {
    const double expected = time_factor(c.frame_length, c.sensing_interval, l, c.mini_slots) /
                            time_factor(c.frame_length, c.sensing_interval, c.mini_slots, c.mini_slots);
    const double ratio = o.throughput_adaptive / o.throughput_baseline;
    if (std::abs(ratio - expected) > 1e-9 * expected) fail("C*/C differs from the time-factor ratio");
  }
}

} // namespace

ExperimentResult run(const ExperimentPlan &plan) {
  validate_plan(plan);
  const std::vector<double> values =
      plan.sweep ? plan.sweep->values : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
  const bool reuse = !plan.sweep || link_only(plan.sweep->parameter);
  const int runs = reuse ? 1 : static_cast<int>(values.size());

  const auto point_config = [&](std::size_t v) {
    return plan.sweep ? with_parameter(plan.scenario, plan.sweep->parameter, values[v]) : plan.scenario;
  };

  // outcomes[run][trial]
  std::vector<std::vector<SensingOutcome>> outcomes(static_cast<std::size_t>(runs),
                                                    std::vector<SensingOutcome>(plan.trials));
  std::vector<int> sparsity(static_cast<std::size_t>(plan.trials));
  const int jobs = runs * plan.trials;
  parallel_for(jobs, plan.threads, [&](int job) {
    const int r = job / plan.trials;
    const int t = job % plan.trials;
    const ScenarioConfig c = point_config(static_cast<std::size_t>(r)).for_trial(plan.base_seed + t);
    outcomes[r][t] = adaptive_sense(c);
    if (r == 0) sparsity[t] = spectral_sparsity(c);
  });

  ExperimentResult result;
  for (std::size_t v = 0; v < values.size(); ++v) {
    SweepPoint point;
    point.value = values[v];
    const ScenarioConfig base = point_config(v);
    const LinkModel link = LinkModel::from_config(base);
    for (int t = 0; t < plan.trials; ++t) {
      const ScenarioConfig c = base.for_trial(plan.base_seed + t);
      SensingOutcome o = outcomes[reuse ? 0 : v][t];
      if (reuse) {
        o.throughput_adaptive =
            adaptive_throughput(o.terminated_slot, o.detection.decisions, o.occupied, link, c);
        o.throughput_baseline = baseline_throughput(o.detection.decisions, o.occupied, link, c);
      }
      check_outcome(c, o, t, result.violations);
      point.rows.push_back(trial_row(t, c, o, sparsity[t]));
    }
    point.summary = aggregate(point.rows);
    result.points.push_back(std::move(point));
  }
  result.max_sparsity = *std::max_element(sparsity.begin(), sparsity.end());
  const int k = result.max_sparsity;
  const int n = plan.scenario.nyquist_samples();
  if (k > 0 && k < n) {
    result.implied_c0 = plan.scenario.compressed_samples() / (k * std::log(double(n) / k));
  }
  return result;
}

CsvTable trial_table(const ExperimentResult &result) {
  CsvTable t;
  t.header = {"sweep_value",   "trial",        "noise_seed",   "matrix_seed",  "signal_seed",
              "l_star",        "halted",       "measurements", "rho_over_v",   "two_delta_sq",
              "accuracy",      "relative_error", "iterations", "occupied",     "detected",
              "false_alarm",   "detection",    "c_adaptive",   "c_baseline",   "ratio",
              "sparsity"};
  for (const auto &p : result.points) {
    for (const auto &r : p.rows) {
      t.add_row({format_number(p.value), format_number((long long)r.trial),
                 std::to_string(r.noise_seed), std::to_string(r.matrix_seed),
                 std::to_string(r.signal_seed), format_number((long long)r.terminated_slot),
                 r.halted ? "1" : "0", format_number((long long)r.measurements),
                 format_number(r.rho_over_v), format_number(r.two_delta_sq),
                 format_number(r.accuracy), format_number(r.relative_error),
                 format_number((long long)r.solver_iterations), format_number((long long)r.occupied),
                 format_number((long long)r.detected), format_number(r.false_alarm),
                 format_number(r.detection), format_number(r.throughput_adaptive),
                 format_number(r.throughput_baseline), format_number(r.ratio),
                 format_number((long long)r.sparsity)});
    }
  }
  return t;
}

CsvTable summary_table(const ExperimentResult &result) {
  CsvTable t;
  t.header = {"sweep_value",    "trials",         "mean_l_star",  "halted_fraction",
              "mean_relative_error", "mean_false_alarm", "mean_detection", "mean_c_adaptive",
              "mean_c_baseline", "mean_ratio",    "min_ratio"};
  for (const auto &p : result.points) {
    const auto &a = p.summary;
    t.add_row({format_number(p.value), format_number((long long)a.trials),
               format_number(a.mean_terminated_slot), format_number(a.halted_fraction),
               format_number(a.mean_relative_error), format_number(a.mean_false_alarm),
               format_number(a.mean_detection), format_number(a.mean_throughput_adaptive),
               format_number(a.mean_throughput_baseline), format_number(a.mean_ratio),
               format_number(a.min_ratio)});
  }
  return t;
}

CsvTable trace_table(const SlotTrace &trace) {
  CsvTable t;
  t.header = {"l", "measurements", "rho_over_v", "two_delta_sq", "oracle_error",
              "oracle_error_sq", "relative_error", "halted", "failure_bound"};
  for (const auto &r : trace.records) {
    t.add_row({format_number((long long)r.slot), format_number((long long)r.measurements),
               format_number(r.normalized), format_number(r.predicted),
               format_number(r.oracle_error), format_number(r.oracle_error * r.oracle_error),
               format_number(trace.signal_norm > 0 ? r.oracle_error / trace.signal_norm : 0.0),
               r.halted ? "1" : "0", format_number(r.failure_bound)});
  }
  return t;
}

CsvTable spectrum_table(const ScenarioConfig &config, const CVector &truth, const CVector &estimate) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("spectra differ in length");
  CsvTable t;
  t.header = {"bin", "frequency_hz", "true_magnitude", "recovered_magnitude"};
  const auto n = truth.size();
  for (Eigen::Index k = 0; k <= n / 2; ++k) {
    const double f = config.nyquist_rate * static_cast<double>(k) / static_cast<double>(n);
    t.add_row({format_number((long long)k), format_number(f), format_number(std::abs(truth[k])),
               format_number(std::abs(estimate[k]))});
  }
  return t;
}

CsvTable detection_table(const DetectionResult &d, const SubchannelSet &occupied) {
  CsvTable t;
  t.header = {"subchannel", "statistic", "threshold", "busy", "occupied"};
  for (std::size_t j = 0; j < d.decisions.size(); ++j) {
    const bool truth = std::binary_search(occupied.begin(), occupied.end(), static_cast<int>(j));
    t.add_row({format_number((long long)j), format_number(d.statistics[j]),
               format_number(d.thresholds[j]), d.decisions[j] ? "1" : "0", truth ? "1" : "0"});
  }
  return t;
}

nlohmann::json manifest(const ExperimentPlan &plan, const ExperimentResult &result) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto &p : result.points) {
    for (const auto &r : p.rows) {
      trials.push_back({{"sweep_value", std::isnan(p.value) ? nlohmann::json() : nlohmann::json(p.value)},
                        {"trial", r.trial},
                        {"noise_seed", r.noise_seed},
                        {"matrix_seed", r.matrix_seed},
                        {"signal_seed", r.signal_seed},
                        {"l_star", r.terminated_slot},
                        {"halted", r.halted},
                        {"decisions", r.decisions}});
    }
  }
  return {{"plan", plan_to_json(plan)},
          {"trials", trials},
          {"max_sparsity", result.max_sparsity},
          {"implied_c0", result.implied_c0},
          {"violations", result.violations}};
}

namespace {

void write_figure(const ExperimentPlan &plan, const ExperimentResult &result) {
  const fs::path &dir = plan.output_dir;
  switch (plan.figure) {
  case Figure::None: return;
  case Figure::Trace: {
    const SlotTrace trace = trace_all_slots(plan.scenario.for_trial(plan.base_seed));
    const CsvTable table = trace_table(trace);
    write_text(dir / "trace.csv", to_csv(table));
    PlotSpec spec;
    spec.title = "Validation statistic per mini slot";
    spec.x_label = "mini slot l";
    spec.y_label = "power";
    spec.log_y = true;
    spec.series = {{"l", "rho_over_v", "rho_l / v_l", SeriesStyle::Line, "#1f77b4"},
                   {"l", "two_delta_sq", "2 delta^2", SeriesStyle::Line, "#d62728"},
                   {"l", "oracle_error_sq", "||X - X_hat||^2", SeriesStyle::Line, "#2ca02c"}};
    write_text(dir / "fig2.svg", render_svg(table, spec));
    return;
  }
  case Figure::Spectrum: {
    const ScenarioConfig c = plan.scenario.for_trial(plan.base_seed);
    const NyquistSignal signal = synthesize(c);
    const SensingOutcome o = adaptive_sense(c);
    const CsvTable table = spectrum_table(c, signal.spectrum, o.estimate.spectrum);
    write_text(dir / "spectrum.csv", to_csv(table));
    write_text(dir / "detection.csv", to_csv(detection_table(o.detection, o.occupied)));
    PlotSpec spec;
    spec.title = "Wideband spectrum and its reconstruction at l* = " +
                 std::to_string(o.terminated_slot);
    spec.x_label = "frequency (Hz)";
    spec.y_label = "|X|";
    spec.series = {{"frequency_hz", "true_magnitude", "true", SeriesStyle::Line, "#1f77b4"},
                   {"frequency_hz", "recovered_magnitude", "recovered", SeriesStyle::Line, "#d62728"}};
    write_text(dir / "fig3.svg", render_svg(table, spec));
    return;
  }
  case Figure::Throughput: {
    const CsvTable table = summary_table(result);
    PlotSpec spec;
    spec.title = "Opportunistic throughput";
    spec.x_label = plan.sweep ? sweep_parameter_name(plan.sweep->parameter) : "run";
    spec.y_label = "bits/s";
    spec.series = {{"sweep_value", "mean_c_adaptive", "adaptive", SeriesStyle::Line, "#1f77b4"},
                   {"sweep_value", "mean_c_baseline", "full interval", SeriesStyle::Line, "#d62728"}};
    write_text(dir / "fig4.svg", render_svg(table, spec));
    return;
  }
  }
}

} // namespace

ExperimentResult execute(const ExperimentPlan &plan) {
  validate_plan(plan);
  std::error_code ec;
  fs::create_directories(plan.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + plan.output_dir.string() + ": " + ec.message());
  ExperimentResult result = run(plan);
  write_text(plan.output_dir / "trials.csv", to_csv(trial_table(result)));
  write_text(plan.output_dir / "summary.csv", to_csv(summary_table(result)));
  write_text(plan.output_dir / "manifest.json", manifest(plan, result).dump(2) + "\n");
  write_figure(plan, result);
  return result;
}

namespace {

ScenarioConfig mini_scenario() {
  ScenarioConfig c;
  c.total_bandwidth = 7.8125e6;
  c.num_subchannels = 20;
  c.nyquist_rate = 15.625e6;
  c.subnyquist_rate = 3.90625e6;
  c.sensing_interval = 64e-6;
  c.frame_length = 128e-6;
  c.mini_slots = 10;
  c.random_subbands = SubbandDraw{3, 156.25e3, 468.75e3, 7, 27, 0.25};
  return c;
}

CheckResult check_parseval() {
  const NyquistSignal s = synthesize(desk_preset());
  const double time = s.samples.squaredNorm();
  const double freq = s.spectrum.squaredNorm();
  const double rel = std::abs(time - freq) / time;
  return {"parseval", rel <= 1e-10, "relative energy gap " + format_number(rel)};
}

CheckResult check_partition() {
  const ScenarioConfig c = desk_preset();
  const NyquistSignal s = synthesize(c);
  MeasurementEnsemble e = build_ensemble(c);
  e.set_noise_variance(smnr_noise_variance(e, s, c.smnr_db));
  AcquisitionState state = begin_acquisition(c.noise_seed);
  for (int l = 1; l <= c.mini_slots; ++l) {
    const CVector previous = state.samples;
    state = acquire_slot(std::move(state), e, s);
    const int m = e.measurements_through(l);
    std::vector<int> all = state.training_index;
    all.insert(all.end(), state.testing_index.begin(), state.testing_index.end());
    std::sort(all.begin(), all.end());
    bool ok = static_cast<int>(all.size()) == m;
    for (int i = 0; ok && i < m; ++i) ok = all[static_cast<std::size_t>(i)] == i;
    for (std::size_t i = 0; ok && i < state.training_index.size(); ++i) {
      ok = state.training[static_cast<Eigen::Index>(i)] == state.samples[state.training_index[i]];
    }
    for (std::size_t i = 0; ok && i < state.testing_index.size(); ++i) {
      ok = state.testing[static_cast<Eigen::Index>(i)] == state.samples[state.testing_index[i]];
    }
    if (ok) ok = state.samples.head(previous.size()) == previous;
    if (!ok) return {"partition", false, "slot " + std::to_string(l) + " is not an exact split"};
  }
  return {"partition", true, std::to_string(c.mini_slots) + " slots split exactly"};
}

CheckResult check_prefix() {
  // Half the slots at the same block size must reproduce the first half.
  const ScenarioConfig full = desk_preset();
  ScenarioConfig half = full;
  half.mini_slots = full.mini_slots / 2;
  half.subnyquist_rate = full.subnyquist_rate / 2;
  const MeasurementEnsemble a = build_ensemble(full);
  const MeasurementEnsemble b = build_ensemble(half);
  const Eigen::Index tr = b.training.rows();
  const Eigen::Index te = b.testing.rows();
  const bool rows = a.training.topRows(tr) == b.training && a.testing.topRows(te) == b.testing;
  const bool counts = std::equal(b.training_count.begin(), b.training_count.end(),
                                 a.training_count.begin()) &&
                      std::equal(b.testing_count.begin(), b.testing_count.end(),
                                 a.testing_count.begin());
  return {"matrix prefix", rows && counts,
          rows && counts ? "first " + std::to_string(half.mini_slots) + " slots identical"
                         : "rows were resampled"};
}

CheckResult check_determinism() {
  ExperimentPlan plan;
  plan.scenario = mini_scenario();
  plan.trials = 2;
  plan.threads = 1;
  const std::string first = to_csv(trial_table(run(plan)));
  plan.threads = 2;
  const std::string second = to_csv(trial_table(run(plan)));
  return {"deterministic rerun", first == second,
          first == second ? std::to_string(first.size()) + " identical bytes" : "outputs differ"};
}

} // namespace

std::vector<CheckResult> run_invariant_suite() {
  std::vector<CheckResult> out;
  for (auto check : {check_parseval, check_partition, check_prefix, check_determinism}) {
    try {
      out.push_back(check());
    } catch (const std::exception &e) {
      out.push_back({"exception", false, e.what()});
    }
  }
  return out;
}

} // namespace specsense
