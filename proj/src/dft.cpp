#include "specsense/dft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <fftw3.h>

namespace specsense {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (length, direction) and kept for
// the life of the process.
enum class Kind { Forward, Backward, RealForward, HermitianBackward };

class PlanCache {
public:
  fftw_plan get(int n, Kind kind) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto size = static_cast<std::size_t>(n);
    auto *buf = fftw_alloc_complex(size);
    auto *real = fftw_alloc_real(size);
    constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = nullptr;
    switch (kind) {
    case Kind::Forward: p = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags); break;
    case Kind::Backward: p = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags); break;
    case Kind::RealForward: p = fftw_plan_dft_r2c_1d(n, real, buf, flags); break;
    case Kind::HermitianBackward: p = fftw_plan_dft_c2r_1d(n, buf, real, flags); break;
    }
    fftw_free(buf);
    fftw_free(real);
    if (!p) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto &[key, plan] : plans_) fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, Kind>, fftw_plan> plans_;
};

PlanCache &cache() {
  static PlanCache c;
  return c;
}

void check_length(int n) {
  if (n < 1) throw std::invalid_argument("DFT length must be at least 1");
}

void transform(Complex *data, int n, Kind kind) {
  check_length(n);
  auto *buf = reinterpret_cast<fftw_complex *>(data);
  fftw_execute_dft(cache().get(n, kind), buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) data[i] *= scale;
}

} // namespace

void unitary_dft_inplace(Complex *data, int n) { transform(data, n, Kind::Forward); }

void inverse_unitary_dft_inplace(Complex *data, int n) { transform(data, n, Kind::Backward); }

void real_unitary_dft(const double *x, Complex *half, int n) {
  check_length(n);
  fftw_execute_dft_r2c(cache().get(n, Kind::RealForward), const_cast<double *>(x),
                       reinterpret_cast<fftw_complex *>(half));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k <= n / 2; ++k) half[k] *= scale;
}

void hermitian_inverse_unitary_dft(Complex *half, double *x, int n) {
  check_length(n);
  fftw_execute_dft_c2r(cache().get(n, Kind::HermitianBackward), reinterpret_cast<fftw_complex *>(half), x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) x[i] *= scale;
}

CVector unitary_dft(const CVector &x) {
  CVector out = x;
  unitary_dft_inplace(out.data(), static_cast<int>(out.size()));
  return out;
}

CVector inverse_unitary_dft(const CVector &spectrum) {
  CVector out = spectrum;
  inverse_unitary_dft_inplace(out.data(), static_cast<int>(out.size()));
  return out;
}

} // namespace specsense
