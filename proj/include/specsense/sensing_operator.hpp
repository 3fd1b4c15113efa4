#pragma once

#include <optional>
#include <type_traits>

#include "specsense/types.hpp"

namespace specsense {

/// How a measurement row is stored. A complex row phi = p + i q occupies
/// two consecutive real rows (p, then q); a real row occupies one.
enum class RowKind { Real, Complex };

/// Domain of the spectra the operator acts on. Hermitian restricts to
/// spectra of real-valued signals: apply() discards the imaginary part of
/// F^{-1} v and adjoint() returns Hermitian spectra. That operator is only
/// real-linear, so its adjoint holds for Re<.,.>.
enum class SpectrumDomain { General, Hermitian };

/// Phi x for a time-domain vector x, Phi stored as described by `kind`.
CVector measure(Eigen::Ref<const RMatrix> stacked, RowKind kind, const CVector &x);

/// A = Phi F^{-1}: maps a spectrum to compressed measurements. The
/// product Phi F^{-1} is never formed. Holds scratch buffers, so a single
/// instance must not be shared between threads. Holds a view of the
/// stacked rows, which must outlive the operator.
class SensingOperator {
public:
  SensingOperator(Eigen::Ref<const RMatrix> stacked, RowKind kind,
                  SpectrumDomain domain = SpectrumDomain::General);
  /// Single-precision rows, accumulated in double: the operator of the
  /// float-rounded matrix, at half the memory traffic.
  SensingOperator(Eigen::Ref<const FMatrix> stacked, RowKind kind,
                  SpectrumDomain domain = SpectrumDomain::General);
  template <typename Temporary>
    requires(!std::is_lvalue_reference_v<Temporary> &&
             std::is_base_of_v<Eigen::PlainObjectBase<Temporary>, Temporary>)
  SensingOperator(Temporary &&, RowKind, SpectrumDomain = SpectrumDomain::General) = delete;

  Eigen::Index rows() const { return measurements_; }
  Eigen::Index cols() const { return cols_; }
  RowKind row_kind() const { return kind_; }
  SpectrumDomain domain() const { return domain_; }

  /// out = A v
  void apply(const CVector &spectrum, CVector &out) const;
  /// out = A^H u = F Phi^H u (real part only for the Hermitian domain)
  void adjoint(const CVector &measurements, CVector &out) const;

  /// out = A v and normal = A^H A v. Single-precision rows in the Hermitian
  /// domain take one pass over the matrix for both.
  void apply_normal(const CVector &spectrum, CVector &out, CVector &normal) const;

  CVector apply(const CVector &spectrum) const;
  CVector adjoint(const CVector &measurements) const;

private:
  using DoubleView = Eigen::Map<const RMatrix, 0, Eigen::OuterStride<>>;
  using SingleView = Eigen::Map<const FMatrix, 0, Eigen::OuterStride<>>;

  void forward(const Eigen::Ref<const RVector> &x, RVector &y) const;  // y = S x
  void backward(const Eigen::Ref<const RVector> &u, RVector &g) const; // g = S^T u

  std::optional<DoubleView> double_rows_;
  std::optional<SingleView> single_rows_;
  RowKind kind_;
  SpectrumDomain domain_;
  Eigen::Index stacked_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::Index measurements_ = 0;
  mutable CVector time_, half_;
  mutable RVector re_, im_, a_, b_;
};

} // namespace specsense
