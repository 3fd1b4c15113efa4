#include "specsense/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specsense/rng.hpp"

namespace specsense {

namespace {

constexpr double kBacktrackGrowth = 1.1;
constexpr int kMaxBacktracks = 60;
constexpr double kPolishShrink = 0.9;
constexpr std::uint64_t kPowerIterationSeed = 0x5eed;

double magnitude(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

double l1_norm(const CVector &v) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += magnitude(v[i]);
  return sum;
}

struct Iterate {
  CVector x;  // current spectrum estimate
  CVector ax; // A x
  CVector nx; // A^H A x
};

struct StageOutcome {
  int iterations = 0;
  bool converged = false;
};

// Monotone FISTA on 0.5 ||A x - R||^2 + lambda ||x||_1, warm-started from
// `state`. The step 1/lip grows only through backtracking on the
// quadratic upper bound, so `lip` is carried between stages. Gradients
// come from A^H A y - A^H R, with A^H A tracked through the same linear
// combinations as the iterates.
StageOutcome run_stage(const SensingOperator &op, const CVector &data, double lambda, double &lip,
                       Iterate &state, double tolerance, const SolverSettings &settings,
                       StageRecord *record) {
  op.apply_normal(state.x, state.ax, state.nx); // the previous stage may have used another operator
  const CVector projected = op.adjoint(data);
  CVector x_prev = state.x;
  CVector ax_prev = state.ax;
  CVector nx_prev = state.nx;
  CVector y = state.x;
  CVector ay = state.ax;
  CVector ny = state.nx;
  CVector z, az, nz;
  double t = 1.0;
  double objective = 0.5 * (state.ax - data).squaredNorm() + lambda * l1_norm(state.x);

  StageOutcome out;
  for (int it = 1; it <= settings.max_iterations; ++it) {
    out.iterations = it;

    // Backtrack on ||A (z - y)||^2 <= lip ||z - y||^2, which is the
    // quadratic upper bound rearranged without cancellation.
    for (int backtrack = 0;; ++backtrack) {
      z = y - (ny - projected) / lip;
      soft_threshold(z, lambda / lip);
      op.apply_normal(z, az, nz);
      const double curvature = (az - ay).squaredNorm();
      if (curvature <= lip * (z - y).squaredNorm() || backtrack == kMaxBacktracks) break;
      lip *= kBacktrackGrowth;
    }
    const double objective_z = 0.5 * (az - data).squaredNorm() + lambda * l1_norm(z);
    const bool accepted = objective_z <= objective;
    // Adaptive restart: drop the momentum whenever it stops paying off.
    if (!accepted || (y - z).dot(z - state.x).real() > 0) t = 1.0;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double a = t / t_next;
    const double b = (t - 1.0) / t_next;
    t = t_next;

    if (!accepted) {
      // x stays put, so only the step towards z carries momentum.
      y = state.x + a * (z - state.x);
      ay = state.ax + a * (az - state.ax);
      ny = state.nx + a * (nz - state.nx);
      if (record) record->objective.push_back(objective);
      continue;
    }
    objective = objective_z;
    x_prev.swap(state.x);
    ax_prev.swap(state.ax);
    nx_prev.swap(state.nx);
    state.x.swap(z);
    state.ax.swap(az);
    state.nx.swap(nz);
    y = state.x + b * (state.x - x_prev);
    ay = state.ax + b * (state.ax - ax_prev);
    ny = state.nx + b * (state.nx - nx_prev);
    if (record) record->objective.push_back(objective);

    if ((state.x - x_prev).norm() <= tolerance * state.x.norm()) {
      out.converged = true;
      break;
    }
  }
  // Refresh A x exactly; the recursion above accumulates rounding.
  op.apply(state.x, state.ax);
  return out;
}

} // namespace

void soft_threshold(CVector &v, double threshold) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = magnitude(v[i]);
    v[i] = mag > threshold ? v[i] * (1.0 - threshold / mag) : Complex{0.0, 0.0};
  }
}

double default_recovery_threshold(double noise_variance, int training_size) {
  if (training_size < 1) throw std::invalid_argument("training subset is empty");
  const double r = training_size;
  return std::sqrt(noise_variance) * std::sqrt(2.0 * r) * (1.0 + 2.0 / std::sqrt(r));
}

double estimate_operator_norm_sq(const SensingOperator &op, int iterations) {
  Rng rng(kPowerIterationSeed);
  CVector v(op.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {rng.normal(), rng.normal()};
  v.normalize();
  CVector av, w;
  for (int k = 0; k < iterations; ++k) {
    op.apply(v, av);
    op.adjoint(av, w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
  }
  op.apply(v, av);
  return av.squaredNorm();
}

SpectralEstimate recover(const CVector &training, const SensingOperator &op, double target,
                         const SolverSettings &settings, SolverTrace *trace,
                         const SensingOperator *search_op) {
  if (training.size() != op.rows()) {
    throw std::invalid_argument("training subset length does not match the operator rows");
  }
  if (search_op && (search_op->rows() != op.rows() || search_op->cols() != op.cols())) {
    throw std::invalid_argument("search operator shape differs from the operator");
  }
  const SensingOperator &coarse = search_op ? *search_op : op;
  if (training.size() < 1) throw std::invalid_argument("training subset is empty");
  if (!(target >= 0)) throw std::invalid_argument("recovery threshold must be nonnegative");

  const Eigen::Index n = op.cols();
  SpectralEstimate est;
  est.target_residual = target;
  Iterate state{CVector::Zero(n), CVector::Zero(op.rows()), CVector::Zero(n)};

  const double data_norm = training.norm();
  const double upper = target * (1.0 + settings.tol_slack);
  const double lower = target * (1.0 - settings.tol_slack);
  const double lambda_max = op.adjoint(training).cwiseAbs().maxCoeff();
  if (data_norm <= upper || lambda_max == 0.0) {
    // X = 0 already satisfies the constraint and has the least l1 norm.
    est.spectrum = state.x;
    est.residual_norm = data_norm;
    est.converged = true;
    return est;
  }

  double lip = estimate_operator_norm_sq(coarse, settings.power_iterations) / settings.step_safety;
  if (trace) trace->lipschitz = lip;

  auto stage = [&](const SensingOperator &a, double lambda, double tolerance) {
    StageRecord record;
    record.lambda = lambda;
    const auto outcome = run_stage(a, training, lambda, lip, state, tolerance, settings,
                                   trace ? &record : nullptr);
    const double residual = (state.ax - training).norm();
    est.iterations += outcome.iterations;
    ++est.stages;
    if (trace) {
      record.iterations = outcome.iterations;
      record.residual_norm = residual;
      record.inner_converged = outcome.converged;
      trace->stages.push_back(std::move(record));
    }
    return std::make_pair(residual, outcome.converged);
  };

  // Locate lambda with the loose stage tolerance, then polish it.
  const double loose = settings.stage_tolerance;
  const double ratio = std::pow(settings.lambda_floor_ratio, 1.0 / settings.continuation_steps);
  double above = lambda_max; // a lambda whose solution sits above the band
  double chosen = lambda_max * settings.lambda_floor_ratio;
  double residual = data_norm;
  for (int k = 1; k <= settings.continuation_steps; ++k) {
    const double lambda = lambda_max * std::pow(ratio, k);
    residual = stage(coarse, lambda, loose).first;
    chosen = lambda;
    if (target > 0 && residual <= upper) {
      if (residual < lower) {
        // Overshot the band: bisect log(lambda) between `above` and `below`,
        // keeping the feasible iterate with the largest lambda.
        double below = lambda;
        Iterate feasible = state;
        for (int r = 0; r < settings.refine_steps; ++r) {
          const double mid = std::sqrt(above * below);
          residual = stage(coarse, mid, loose).first;
          if (residual > upper) {
            above = mid;
          } else {
            below = mid;
            feasible = state;
            if (residual >= lower) break;
          }
        }
        state = std::move(feasible);
        chosen = below;
      }
      break;
    }
    above = lambda;
  }
  bool polished = false;
  std::tie(residual, polished) = stage(op, chosen, settings.stop_tolerance);
  // The loose search can leave lambda slightly too large for the band.
  for (int r = 0; target > 0 && residual > upper && r < settings.refine_steps; ++r) {
    chosen *= kPolishShrink;
    std::tie(residual, polished) = stage(op, chosen, settings.stop_tolerance);
  }
  est.converged = target > 0 ? residual <= upper : polished;

  est.spectrum = std::move(state.x);
  est.residual_norm = residual;
  return est;
}

double oracle_recovery_error(const CVector &truth, const CVector &estimate) {
  if (truth.size() != estimate.size()) {
    throw std::invalid_argument("oracle error: spectra have different lengths");
  }
  return (truth - estimate).norm();
}

} // namespace specsense
