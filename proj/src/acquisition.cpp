#include "specsense/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace specsense {

namespace {

constexpr std::uint64_t kMatrixStream = 0x11;
constexpr std::uint64_t kAssignmentStream = 0x12;
constexpr std::uint64_t kNoiseStream = 0x31;

} // namespace

void MeasurementEnsemble::set_noise_variance(double variance) {
  if (!(variance >= 0)) throw std::invalid_argument("noise variance must be nonnegative");
  noise_variance = variance;
  noise_bound = 4.0 * std::sqrt(variance);
}

MeasurementEnsemble build_ensemble(const ScenarioConfig &config) {
  if (!(config.test_fraction > 0 && config.test_fraction < 1)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  MeasurementEnsemble e;
  e.signal_length = config.nyquist_samples();
  e.slots = config.mini_slots;
  e.rows_per_slot = config.rows_per_slot();
  e.row_kind = config.complex_measurements ? RowKind::Complex : RowKind::Real;
  const int total = e.rows_per_slot * e.slots;

  Rng assign_rng(mix_seed(config.matrix_seed, kAssignmentStream));
  e.is_test.assign(static_cast<std::size_t>(total), false);
  int previous_tests = 0;
  for (int l = 1; l <= e.slots; ++l) {
    const int m_l = l * e.rows_per_slot;
    const int v_l = static_cast<int>(std::lround(config.test_fraction * m_l));
    if (v_l < 1) {
      throw std::invalid_argument("slot " + std::to_string(l) +
                                  " has no testing samples; raise test_fraction");
    }
    if (m_l - v_l < 1) {
      throw std::invalid_argument("slot " + std::to_string(l) + " has no training samples");
    }
    const int new_tests = v_l - previous_tests;
    std::vector<int> order(static_cast<std::size_t>(e.rows_per_slot));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), assign_rng.engine());
    for (int k = 0; k < new_tests; ++k) {
      e.is_test[static_cast<std::size_t>((l - 1) * e.rows_per_slot + order[k])] = true;
    }
    previous_tests = v_l;
    e.testing_count.push_back(v_l);
    e.training_count.push_back(m_l - v_l);
  }

  const int n = e.signal_length;
  const int stride = e.stride();
  // Complex entries are CN(0, 1): each component has variance 1/2.
  const double scale = e.row_kind == RowKind::Complex ? std::sqrt(0.5) : 1.0;
  e.training.resize(stride * e.training_count.back(), n);
  e.testing.resize(stride * e.testing_count.back(), n);
  Rng matrix_rng(mix_seed(config.matrix_seed, kMatrixStream));
  int tr = 0;
  int te = 0;
  for (int i = 0; i < total; ++i) {
    const bool test = e.is_test[static_cast<std::size_t>(i)];
    RMatrix &target = test ? e.testing : e.training;
    int &next = test ? te : tr;
    for (int c = 0; c < stride; ++c) {
      auto row = target.row(next++);
      for (int k = 0; k < n; ++k) row[k] = scale * matrix_rng.normal();
    }
  }
  e.training_single = e.training.cast<float>();
  if (config.noise_variance) e.set_noise_variance(*config.noise_variance);
  return e;
}

double smnr_noise_variance(const MeasurementEnsemble &ensemble, const NyquistSignal &signal,
                           double smnr_db) {
  const int r1 = ensemble.training_count.front();
  const CVector y = measure(ensemble.training.topRows(ensemble.stride() * r1), ensemble.row_kind,
                            signal.samples);
  const double power = y.squaredNorm() / r1;
  return power / (2.0 * std::pow(10.0, smnr_db / 10.0));
}

AcquisitionState begin_acquisition(std::uint64_t noise_seed) {
  AcquisitionState s;
  s.noise_rng = Rng(mix_seed(noise_seed, kNoiseStream));
  return s;
}

AcquisitionState acquire_slot(AcquisitionState state, const MeasurementEnsemble &ensemble,
                              const NyquistSignal &signal) {
  if (state.slot >= ensemble.slots) {
    throw std::out_of_range("all " + std::to_string(ensemble.slots) + " mini slots already acquired");
  }
  if (signal.samples.size() != ensemble.signal_length) {
    throw std::invalid_argument("signal length does not match the measurement ensemble");
  }
  const int l = state.slot + 1;
  const int first = state.slot * ensemble.rows_per_slot;
  const int last = first + ensemble.rows_per_slot;
  const int tr0 = state.slot == 0 ? 0 : ensemble.training_count[state.slot - 1];
  const int te0 = state.slot == 0 ? 0 : ensemble.testing_count[state.slot - 1];
  const int tr_new = ensemble.training_count[l - 1] - tr0;
  const int te_new = ensemble.testing_count[l - 1] - te0;

  const int stride = ensemble.stride();
  const CVector tr_clean = measure(ensemble.training.middleRows(stride * tr0, stride * tr_new),
                                   ensemble.row_kind, signal.samples);
  const CVector te_clean = measure(ensemble.testing.middleRows(stride * te0, stride * te_new),
                                   ensemble.row_kind, signal.samples);

  const double sd = std::sqrt(ensemble.noise_variance);
  const auto grow = [](CVector &v, Eigen::Index extra) {
    v.conservativeResize(v.size() + extra);
  };
  grow(state.samples, last - first);
  grow(state.noise, last - first);
  grow(state.training, tr_new);
  grow(state.testing, te_new);

  int tr = 0;
  int te = 0;
  for (int i = first; i < last; ++i) {
    const double nr = state.noise_rng.normal();
    const double ni = state.noise_rng.normal();
    const Complex n{sd * nr, sd * ni};
    Complex clean;
    if (ensemble.is_test[static_cast<std::size_t>(i)]) {
      clean = te_clean[te];
      state.testing[te0 + te] = clean + n;
      state.testing_index.push_back(i);
      ++te;
    } else {
      clean = tr_clean[tr];
      state.training[tr0 + tr] = clean + n;
      state.training_index.push_back(i);
      ++tr;
    }
    state.samples[i] = clean + n;
    state.noise[i] = n;
  }
  state.slot = l;
  return state;
}

SplitView split(const AcquisitionState &state, const MeasurementEnsemble &ensemble) {
  if (state.slot < 1) throw std::logic_error("split requires at least one acquired slot");
  const int r = ensemble.training_count[state.slot - 1];
  const int v = ensemble.testing_count[state.slot - 1];
  const int stride = ensemble.stride();
  return {state.training, ensemble.training.topRows(stride * r),
          ensemble.training_single.topRows(stride * r), state.testing,
          ensemble.testing.topRows(stride * v), ensemble.row_kind};
}

} // namespace specsense
