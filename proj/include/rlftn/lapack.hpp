#pragma once

#include "rlftn/types.hpp"

namespace rlftn::lapack {

/// Thin SVD of a (copied) matrix via the divide-and-conquer driver, with the
/// standard-driver fallback on non-convergence.  On return u is m x k, s is
/// k, vt is k x n with k = min(m, n); singular values are descending and
/// non-negative.  Throws std::runtime_error if both drivers fail.
void svd(const MatrixR& a, MatrixR& u, VectorR& s, MatrixR& vt);
void svd(const MatrixC& a, MatrixC& u, VectorR& s, MatrixC& vt);

/// Singular values only.
VectorR singular_values(const MatrixR& a);
VectorR singular_values(const MatrixC& a);

/// Orthonormal basis of the column span: the thin Q factor of a Householder
/// QR.  Always returns min(m, n) orthonormal columns, also for rank-deficient
/// input (trailing columns then complete the basis arbitrarily).
MatrixR orthonormal_columns(MatrixR a);
MatrixC orthonormal_columns(MatrixC a);

/// Full thin QR: a = q * r with q m x k orthonormal and r k x n upper
/// trapezoidal, k = min(m, n).
void qr(MatrixR a, MatrixR& q, MatrixR& r);
void qr(MatrixC a, MatrixC& q, MatrixC& r);

/// Pins the linked BLAS to one thread; called once per process entry point so
/// timings and results are independent of host threading defaults.
void use_single_thread();

}  // namespace rlftn::lapack
