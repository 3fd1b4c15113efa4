#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "specsense/harness.hpp"

using namespace specsense;

namespace {

struct Common {
  std::string config;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool paper_scale = false;
  int threads = 0;
};

void add_common(CLI::App *cmd, Common &o, bool with_config = true) {
  if (with_config) {
    cmd->add_option("--config", o.config, "scenario or plan JSON")->check(CLI::ExistingFile);
  }
  cmd->add_option("--trials", o.trials, "number of seeded trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "base seed added to every scenario seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--paper-scale", o.paper_scale, "use the 2 GHz preset (N = 20000, slow)");
  cmd->add_option("--threads", o.threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
}

// A config file is either a full plan or a bare scenario.
ExperimentPlan base_plan(const Common &o, ExperimentPlan fallback) {
  ExperimentPlan plan = std::move(fallback);
  if (!o.config.empty()) {
    const auto j = nlohmann::json::parse(read_text(o.config));
    if (j.value("schema", std::string()) == kPlanSchema) {
      plan = load_plan(o.config);
    } else {
      plan.scenario = load_config(o.config);
    }
  } else if (o.paper_scale) {
    plan.scenario = paper_scale_preset();
  }
  if (o.trials) plan.trials = *o.trials;
  if (o.seed) plan.base_seed = *o.seed;
  if (!o.out.empty()) plan.output_dir = o.out;
  plan.threads = o.threads;
  return plan;
}

void print_summary(const ExperimentPlan &plan, const ExperimentResult &result) {
  for (const auto &p : result.points) {
    const auto &a = p.summary;
    if (plan.sweep) std::printf("%s = %g\n", sweep_parameter_name(plan.sweep->parameter).c_str(), p.value);
    std::printf("  trials %d  mean l* %.2f of %d  halted %.0f%%  mean rel. error %.3g\n", a.trials,
                a.mean_terminated_slot, plan.scenario.mini_slots, 100 * a.halted_fraction,
                a.mean_relative_error);
    std::printf("  Pf %.3g  Pd %.3g  C* %.4g b/s  C %.4g b/s  C*/C mean %.4f min %.4f\n",
                a.mean_false_alarm, a.mean_detection, a.mean_throughput_adaptive,
                a.mean_throughput_baseline, a.mean_ratio, a.min_ratio);
  }
  std::printf("k_max %d  implied C0 %.3g\n", result.max_sparsity, result.implied_c0);
  std::printf("outputs in %s\n", plan.output_dir.string().c_str());
}

int finish(const ExperimentPlan &plan) {
  const ExperimentResult result = execute(plan);
  print_summary(plan, result);
  for (const auto &v : result.violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
  return result.violations.empty() ? 0 : 2;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Adaptive compressive wideband spectrum sensing simulator"};
  app.require_subcommand(1);

  Common sense_opts, sweep_opts, fig_opts[3];
  std::string sweep_param;
  std::vector<double> sweep_values;

  auto *sense = app.add_subcommand("sense", "run seeded trials of one scenario");
  add_common(sense, sense_opts);

  auto *sweep = app.add_subcommand("sweep", "sweep one parameter over seeded trials");
  add_common(sweep, sweep_opts);
  sweep->add_option("--param", sweep_param,
                    "transmit_power_dbm, distance_km, test_fraction or accuracy_factor");
  sweep->add_option("--values", sweep_values, "sweep values")->delimiter(',');

  const char *fig_help[3] = {"validation statistic per mini slot", "true and recovered spectrum",
                             "throughput against transmit power"};
  CLI::App *figs[3];
  for (int i = 0; i < 3; ++i) {
    figs[i] = app.add_subcommand("fig" + std::to_string(i + 2), fig_help[i]);
    add_common(figs[i], fig_opts[i]);
  }

  auto *check = app.add_subcommand("validate", "structural invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sense) {
      ExperimentPlan fallback;
      fallback.name = "sense";
      fallback.scenario = desk_preset();
      fallback.output_dir = "out/sense";
      return finish(base_plan(sense_opts, fallback));
    }
    if (*sweep) {
      ExperimentPlan fallback = figure_plan(Figure::Throughput, false);
      fallback.name = "sweep";
      fallback.figure = Figure::Throughput;
      fallback.output_dir = "out/sweep";
      ExperimentPlan plan = base_plan(sweep_opts, fallback);
      if (!sweep_param.empty() || !sweep_values.empty()) {
        Sweep s = plan.sweep.value_or(Sweep{});
        if (!sweep_param.empty()) s.parameter = parse_sweep_parameter(sweep_param);
        if (!sweep_values.empty()) s.values = sweep_values;
        plan.sweep = s;
      }
      if (!plan.sweep) throw std::invalid_argument("sweep needs --param and --values or a plan with a sweep");
      return finish(plan);
    }
    const Figure kinds[3] = {Figure::Trace, Figure::Spectrum, Figure::Throughput};
    for (int i = 0; i < 3; ++i) {
      if (*figs[i]) {
        ExperimentPlan plan = base_plan(fig_opts[i], figure_plan(kinds[i], fig_opts[i].paper_scale));
        plan.figure = kinds[i];
        return finish(plan);
      }
    }
    if (*check) {
      bool ok = true;
      for (const auto &c : run_invariant_suite()) {
        std::printf("%s %-20s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        ok = ok && c.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
