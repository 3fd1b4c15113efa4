#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "specsense/config.hpp"
#include "specsense/types.hpp"

namespace specsense::testing {

// N = 128, M_L = 32, L = 4, J = 8.
inline ScenarioConfig toy_config() {
  ScenarioConfig c;
  c.total_bandwidth = 1e6;
  c.num_subchannels = 8;
  c.nyquist_rate = 2e6;
  c.subnyquist_rate = 0.5e6;
  c.sensing_interval = 64e-6;
  c.frame_length = 128e-6;
  c.mini_slots = 4;
  c.test_fraction = 0.25;
  return c;
}

inline CVector dense_dft(const CVector &x) {
  const auto n = x.size();
  CVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (Eigen::Index t = 0; t < n; ++t) {
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * t % n) / double(n));
    }
    out[k] = acc / std::sqrt(double(n));
  }
  return out;
}

inline CVector dense_idft(const CVector &x) {
  CVector c = x.conjugate();
  return dense_dft(c).conjugate();
}

} // namespace specsense::testing
