#pragma once

#include "specsense/types.hpp"

namespace specsense {

/// Unitary DFT: X[k] = N^{-1/2} sum_n x[n] exp(-2 pi i k n / N).
CVector unitary_dft(const CVector &x);

/// Inverse of unitary_dft (also its adjoint).
CVector inverse_unitary_dft(const CVector &spectrum);

/// In-place variants on caller-owned buffers of length n.
void unitary_dft_inplace(Complex *data, int n);
void inverse_unitary_dft_inplace(Complex *data, int n);

/// Unitary DFT of a real vector: writes bins 0..n/2 to `half`.
void real_unitary_dft(const double *x, Complex *half, int n);
/// x = N^{-1/2} sum_k H[k] exp(2 pi i k n / N), H the Hermitian extension of
/// bins 0..n/2 in `half`. Overwrites `half`.
void hermitian_inverse_unitary_dft(Complex *half, double *x, int n);

} // namespace specsense
