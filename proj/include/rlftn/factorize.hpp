#pragma once

#include <cstdint>

#include "rlftn/types.hpp"

namespace rlftn {

/// Rank-limited factorization A ~= left * diag(sigma) * right_adj.
///
/// left has orthonormal columns, right_adj orthonormal rows, sigma is
/// descending and non-negative.  rank() can come out below the requested rank
/// when the input has lower numerical rank (trailing values at the
/// numerical-zero level are dropped rather than padded).
template <class Scalar>
struct TruncatedFactorization {
  Matrix<Scalar> left;       // m x r
  VectorR sigma;             // r
  Matrix<Scalar> right_adj;  // r x n

  /// Sum of squares of the singular values that were computed but not
  /// retained.  Exact for tsvd (full spectrum seen); for rsvd only the
  /// sampled tail is known and discarded_exact is false.
  double discarded_weight = 0.0;
  bool discarded_exact = true;

  Index rank() const { return sigma.size(); }
  Matrix<Scalar> reconstruct() const {
    return left * sigma.asDiagonal() * right_adj;
  }
};

/// Parameters of the randomized factorization.
///
/// oversample is the sample width l (number of Gaussian probe columns);
/// 0 picks the default l = 2*rank, clipped to min(m, n).  power is the
/// exponent q of the (A A^H)^q A sampling operator.  The generator is
/// counter-based, so a given seed yields one reproducible factorization
/// regardless of call history.
struct RsvdParams {
  Index rank = 0;
  Index oversample = 0;
  int power = 4;
  std::uint64_t seed = 0;
};

/// Deterministic truncated SVD: full decomposition, keep the chi largest
/// values.  The truncation is Frobenius/spectral optimal at its rank.
template <class Scalar>
TruncatedFactorization<Scalar> tsvd(const Matrix<Scalar>& a, Index chi);

/// Randomized range finder: orthonormal basis Q (m x ell) approximating the
/// span of the ell dominant left singular directions of a, sampled through
/// power iteration with re-orthonormalization after every application of a
/// or its adjoint (2q+1 products in total).
template <class Scalar>
Matrix<Scalar> randomized_range(const Matrix<Scalar>& a, Index ell, int power, std::uint64_t seed);

/// Randomized truncated SVD: project onto the sampled range, factorize the
/// small projected matrix, lift the left factors back.  Both factor matrices
/// are exactly isometric by construction.
template <class Scalar>
TruncatedFactorization<Scalar> rsvd(const Matrix<Scalar>& a, const RsvdParams& params);

enum class ErrorNorm { frobenius, spectral };

/// || a - reconstruct(f) || in the requested norm.
template <class Scalar>
double reconstruction_error(const Matrix<Scalar>& a, const TruncatedFactorization<Scalar>& f,
                            ErrorNorm norm = ErrorNorm::frobenius);

}  // namespace rlftn
