#include "specsense/sensing_operator.hpp"

#include <stdexcept>
#include <string>

#include "specsense/dft.hpp"

namespace specsense {

namespace {

Eigen::Map<RVector> as_real(CVector &v) {
  return {reinterpret_cast<double *>(v.data()), 2 * v.size()};
}

Eigen::Map<const RVector> as_real(const CVector &v) {
  return {reinterpret_cast<const double *>(v.data()), 2 * v.size()};
}

Eigen::Index count_measurements(Eigen::Index stacked_rows, RowKind kind) {
  if (kind == RowKind::Real) return stacked_rows;
  if (stacked_rows % 2 != 0) {
    throw std::invalid_argument("complex rows need an even number of stacked real rows");
  }
  return stacked_rows / 2;
}

// out = Phi (wr + i wi), given a = S wr and b = S wi from the stacked rows.
void combine(const RVector &a, const RVector &b, RowKind kind, CVector &out) {
  const Eigen::Index m = count_measurements(a.size(), kind);
  out.resize(m);
  if (kind == RowKind::Real) {
    for (Eigen::Index i = 0; i < m; ++i) out[i] = {a[i], b[i]};
  } else {
    for (Eigen::Index i = 0; i < m; ++i) {
      out[i] = {a[2 * i] - b[2 * i + 1], a[2 * i + 1] + b[2 * i]};
    }
  }
}

constexpr Eigen::Index kBlock = 4;

// Float rows against a double vector, accumulated in double. Rows go in
// blocks so each pass over x serves several of them.
template <int K>
void rows_dot(const float *rows, Eigen::Index stride, const double *x, Eigen::Index n, double *out) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const float *r0 = rows;
  const float *r1 = rows + (K > 1 ? stride : 0);
  const float *r2 = rows + (K > 2 ? 2 * stride : 0);
  const float *r3 = rows + (K > 3 ? 3 * stride : 0);
#pragma omp simd reduction(+ : s0, s1, s2, s3)
  for (Eigen::Index j = 0; j < n; ++j) {
    s0 += static_cast<double>(r0[j]) * x[j];
    if constexpr (K > 1) s1 += static_cast<double>(r1[j]) * x[j];
    if constexpr (K > 2) s2 += static_cast<double>(r2[j]) * x[j];
    if constexpr (K > 3) s3 += static_cast<double>(r3[j]) * x[j];
  }
  out[0] = s0;
  if constexpr (K > 1) out[1] = s1;
  if constexpr (K > 2) out[2] = s2;
  if constexpr (K > 3) out[3] = s3;
}

// acc += sum_k coef[k] rows[k]
template <int K>
void rows_axpy(const float *rows, Eigen::Index stride, const double *coef, Eigen::Index n, double *acc) {
  const float *r0 = rows;
  const float *r1 = rows + (K > 1 ? stride : 0);
  const float *r2 = rows + (K > 2 ? 2 * stride : 0);
  const float *r3 = rows + (K > 3 ? 3 * stride : 0);
  const double c0 = coef[0];
  const double c1 = K > 1 ? coef[1] : 0.0;
  const double c2 = K > 2 ? coef[2] : 0.0;
  const double c3 = K > 3 ? coef[3] : 0.0;
#pragma omp simd
  for (Eigen::Index j = 0; j < n; ++j) {
    double v = acc[j] + static_cast<double>(r0[j]) * c0;
    if constexpr (K > 1) v += static_cast<double>(r1[j]) * c1;
    if constexpr (K > 2) v += static_cast<double>(r2[j]) * c2;
    if constexpr (K > 3) v += static_cast<double>(r3[j]) * c3;
    acc[j] = v;
  }
}

// Visits rows in blocks of kBlock, then one at a time.
template <typename Block, typename Single>
void for_row_blocks(Eigen::Index rows, Block block, Single single) {
  Eigen::Index i = 0;
  for (; i + kBlock <= rows; i += kBlock) block(i);
  for (; i < rows; ++i) single(i);
}

} // namespace

CVector measure(Eigen::Ref<const RMatrix> stacked, RowKind kind, const CVector &x) {
  if (x.size() != stacked.cols()) {
    throw std::invalid_argument("measure: vector length does not match the rows");
  }
  const RVector a = stacked * x.real();
  const RVector b = stacked * x.imag();
  CVector out;
  combine(a, b, kind, out);
  return out;
}

SensingOperator::SensingOperator(Eigen::Ref<const RMatrix> stacked, RowKind kind,
                                 SpectrumDomain domain)
    : kind_(kind), domain_(domain), stacked_(stacked.rows()), cols_(stacked.cols()),
      measurements_(count_measurements(stacked.rows(), kind)) {
  if (measurements_ < 1 || cols_ < 1) {
    throw std::invalid_argument("sensing operator needs a nonempty matrix");
  }
  double_rows_.emplace(stacked.data(), stacked.rows(), stacked.cols(),
                       Eigen::OuterStride<>(stacked.outerStride()));
}

SensingOperator::SensingOperator(Eigen::Ref<const FMatrix> stacked, RowKind kind,
                                 SpectrumDomain domain)
    : kind_(kind), domain_(domain), stacked_(stacked.rows()), cols_(stacked.cols()),
      measurements_(count_measurements(stacked.rows(), kind)) {
  if (measurements_ < 1 || cols_ < 1) {
    throw std::invalid_argument("sensing operator needs a nonempty matrix");
  }
  single_rows_.emplace(stacked.data(), stacked.rows(), stacked.cols(),
                       Eigen::OuterStride<>(stacked.outerStride()));
}

void SensingOperator::forward(const Eigen::Ref<const RVector> &x, RVector &y) const {
  if (double_rows_) {
    y.noalias() = *double_rows_ * x;
    return;
  }
  const SingleView &t = *single_rows_;
  const Eigen::Index n = t.cols();
  const Eigen::Index stride = t.outerStride();
  y.resize(t.rows());
  for_row_blocks(
      t.rows(), [&](Eigen::Index i) { rows_dot<kBlock>(t.data() + i * stride, stride, x.data(), n, &y[i]); },
      [&](Eigen::Index i) { rows_dot<1>(t.data() + i * stride, stride, x.data(), n, &y[i]); });
}

void SensingOperator::backward(const Eigen::Ref<const RVector> &u, RVector &g) const {
  if (double_rows_) {
    g.noalias() = double_rows_->transpose() * u;
    return;
  }
  const SingleView &t = *single_rows_;
  const Eigen::Index n = t.cols();
  const Eigen::Index stride = t.outerStride();
  g.setZero(n);
  for_row_blocks(
      t.rows(), [&](Eigen::Index i) { rows_axpy<kBlock>(t.data() + i * stride, stride, u.data() + i, n, g.data()); },
      [&](Eigen::Index i) { rows_axpy<1>(t.data() + i * stride, stride, u.data() + i, n, g.data()); });
}

void SensingOperator::apply(const CVector &spectrum, CVector &out) const {
  if (spectrum.size() != cols()) {
    throw std::invalid_argument("operator apply: spectrum length " + std::to_string(spectrum.size()) +
                                " does not match N = " + std::to_string(cols()));
  }
  const Eigen::Index n = cols();
  if (domain_ == SpectrumDomain::Hermitian) {
    // Re(F^{-1} X) = F^{-1} H with H = (X[k] + conj X[N-k]) / 2 Hermitian.
    half_.resize(n / 2 + 1);
    for (Eigen::Index k = 0; k <= n / 2; ++k) {
      half_[k] = 0.5 * (spectrum[k] + std::conj(spectrum[(n - k) % n]));
    }
    re_.resize(n);
    hermitian_inverse_unitary_dft(half_.data(), re_.data(), static_cast<int>(n));
    forward(re_, a_);
    out.resize(rows());
    if (kind_ == RowKind::Complex) {
      as_real(out) = a_;
    } else {
      out.real() = a_;
      out.imag().setZero();
    }
    return;
  }
  time_ = spectrum;
  inverse_unitary_dft_inplace(time_.data(), static_cast<int>(n));
  re_ = time_.real();
  forward(re_, a_);
  im_ = time_.imag();
  forward(im_, b_);
  combine(a_, b_, kind_, out);
}

void SensingOperator::adjoint(const CVector &measurements, CVector &out) const {
  if (measurements.size() != rows()) {
    throw std::invalid_argument("operator adjoint: measurement length " +
                                std::to_string(measurements.size()) + " does not match " +
                                std::to_string(rows()));
  }
  const Eigen::Index m = rows();
  // Re(Phi^H u): for complex rows this is S^T applied to u read as 2m reals.
  if (kind_ == RowKind::Complex) {
    backward(as_real(measurements), re_);
  } else {
    a_ = measurements.real();
    backward(a_, re_);
  }
  const Eigen::Index n = cols();
  if (domain_ == SpectrumDomain::Hermitian) {
    out.resize(n);
    real_unitary_dft(re_.data(), out.data(), static_cast<int>(n));
    for (Eigen::Index k = n / 2 + 1; k < n; ++k) out[k] = std::conj(out[n - k]);
    return;
  }
  if (kind_ == RowKind::Complex) {
    // Im(conj(p + i q) u) = p u_i - q u_r
    b_.resize(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
      b_[2 * i] = measurements[i].imag();
      b_[2 * i + 1] = -measurements[i].real();
    }
    backward(b_, im_);
  } else {
    b_ = measurements.imag();
    backward(b_, im_);
  }
  out.resize(cols());
  out.real() = re_;
  out.imag() = im_;
  unitary_dft_inplace(out.data(), static_cast<int>(cols()));
}

void SensingOperator::apply_normal(const CVector &spectrum, CVector &out, CVector &normal) const {
  if (!single_rows_ || domain_ != SpectrumDomain::Hermitian) {
    apply(spectrum, out);
    adjoint(out, normal);
    return;
  }
  if (spectrum.size() != cols()) {
    throw std::invalid_argument("operator apply: spectrum length " + std::to_string(spectrum.size()) +
                                " does not match N = " + std::to_string(cols()));
  }
  const Eigen::Index n = cols();
  half_.resize(n / 2 + 1);
  for (Eigen::Index k = 0; k <= n / 2; ++k) {
    half_[k] = 0.5 * (spectrum[k] + std::conj(spectrum[(n - k) % n]));
  }
  re_.resize(n);
  hermitian_inverse_unitary_dft(half_.data(), re_.data(), static_cast<int>(n));

  // Each block of rows is read once: its products with the signal, then
  // its share of S^T S x while it is still in cache.
  const SingleView &t = *single_rows_;
  const Eigen::Index stride = t.outerStride();
  a_.resize(t.rows());
  im_.setZero(n);
  for_row_blocks(
      t.rows(),
      [&](Eigen::Index i) {
        rows_dot<kBlock>(t.data() + i * stride, stride, re_.data(), n, &a_[i]);
        rows_axpy<kBlock>(t.data() + i * stride, stride, &a_[i], n, im_.data());
      },
      [&](Eigen::Index i) {
        rows_dot<1>(t.data() + i * stride, stride, re_.data(), n, &a_[i]);
        rows_axpy<1>(t.data() + i * stride, stride, &a_[i], n, im_.data());
      });

  out.resize(rows());
  if (kind_ == RowKind::Complex) {
    as_real(out) = a_;
  } else {
    out.real() = a_;
    out.imag().setZero();
  }
  normal.resize(n);
  real_unitary_dft(im_.data(), normal.data(), static_cast<int>(n));
  for (Eigen::Index k = n / 2 + 1; k < n; ++k) normal[k] = std::conj(normal[n - k]);
}

CVector SensingOperator::apply(const CVector &spectrum) const {
  CVector out;
  apply(spectrum, out);
  return out;
}

CVector SensingOperator::adjoint(const CVector &measurements) const {
  CVector out;
  adjoint(measurements, out);
  return out;
}

} // namespace specsense
