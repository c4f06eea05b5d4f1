#include "rlftn/factorize.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "rlftn/lapack.hpp"
#include "rlftn/rng.hpp"

namespace rlftn {

namespace {

// Numerical rank: values at or below max(m,n) * eps * sigma_max count as
// zero.  Keeps exact-rank inputs at their exact rank instead of padding the
// spectrum with roundoff noise.
Index numerical_rank(const VectorR& sigma, Index m, Index n) {
  if (sigma.size() == 0 || sigma[0] <= 0.0) return 0;
  const double cut =
      static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon() * sigma[0];
  Index r = sigma.size();
  while (r > 0 && sigma[r - 1] <= cut) --r;
  return r;
}

template <class Scalar>
TruncatedFactorization<Scalar> truncate_full(Matrix<Scalar>&& u, VectorR&& s, Matrix<Scalar>&& vt,
                                             Index chi, Index m, Index n) {
  TruncatedFactorization<Scalar> f;
  const Index r = std::min(chi, numerical_rank(s, m, n));
  f.discarded_weight = 0.0;
  for (Index k = r; k < s.size(); ++k) f.discarded_weight += s[k] * s[k];
  f.left = u.leftCols(r);
  f.sigma = s.head(r);
  f.right_adj = vt.topRows(r);
  f.discarded_exact = true;
  return f;
}

}  // namespace

template <class Scalar>
TruncatedFactorization<Scalar> tsvd(const Matrix<Scalar>& a, Index chi) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("tsvd: empty matrix");
  if (chi < 1) throw std::invalid_argument("tsvd: rank must be >= 1");
  Matrix<Scalar> u, vt;
  VectorR s;
  lapack::svd(a, u, s, vt);
  return truncate_full(std::move(u), std::move(s), std::move(vt), chi, a.rows(), a.cols());
}

template <class Scalar>
Matrix<Scalar> randomized_range(const Matrix<Scalar>& a, Index ell, int power,
                                std::uint64_t seed) {
  const Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("randomized_range: empty matrix");
  if (ell < 1 || ell > std::min(m, n))
    throw std::invalid_argument("randomized_range: need 1 <= ell <= min(m, n)");
  if (power < 0) throw std::invalid_argument("randomized_range: power must be >= 0");

  Matrix<Scalar> omega(n, ell);
  CounterRng rng(seed);
  rng.fill_gaussian(omega.data(), static_cast<std::size_t>(omega.size()));

  // Q <- orth(A Omega), then q rounds of Q <- orth(A orth(A^H Q)).  The
  // re-orthonormalization after every product keeps the power iteration from
  // collapsing onto the leading direction in finite precision.
  Matrix<Scalar> q = lapack::orthonormal_columns(Matrix<Scalar>(a * omega));
  for (int t = 0; t < power; ++t) {
    q = lapack::orthonormal_columns(Matrix<Scalar>(a.adjoint() * q));
    q = lapack::orthonormal_columns(Matrix<Scalar>(a * q));
  }
  return q;
}

template <class Scalar>
TruncatedFactorization<Scalar> rsvd(const Matrix<Scalar>& a, const RsvdParams& params) {
  const Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("rsvd: empty matrix");
  if (params.rank < 1) throw std::invalid_argument("rsvd: rank must be >= 1");
  Index ell = params.oversample;
  if (ell == 0) ell = std::min(2 * params.rank, std::min(m, n));
  if (ell < params.rank) throw std::invalid_argument("rsvd: oversample must be >= rank");

  const Matrix<Scalar> q = randomized_range(a, ell, params.power, params.seed);
  const Matrix<Scalar> b = q.adjoint() * a;  // ell x n

  Matrix<Scalar> ub, vtb;
  VectorR sb;
  lapack::svd(b, ub, sb, vtb);
  auto f = truncate_full(std::move(ub), std::move(sb), std::move(vtb), params.rank, m, n);
  f.left = q * f.left;
  f.discarded_exact = false;  // only the ell - chi sampled tail values are known
  return f;
}

template <class Scalar>
double reconstruction_error(const Matrix<Scalar>& a, const TruncatedFactorization<Scalar>& f,
                            ErrorNorm norm) {
  Matrix<Scalar> resid = a - f.reconstruct();
  if (norm == ErrorNorm::frobenius) return resid.norm();
  const VectorR s = lapack::singular_values(resid);
  return s.size() ? s[0] : 0.0;
}

template struct TruncatedFactorization<double>;
template struct TruncatedFactorization<Complex>;

template TruncatedFactorization<double> tsvd(const MatrixR&, Index);
template TruncatedFactorization<Complex> tsvd(const MatrixC&, Index);
template MatrixR randomized_range(const MatrixR&, Index, int, std::uint64_t);
template MatrixC randomized_range(const MatrixC&, Index, int, std::uint64_t);
template TruncatedFactorization<double> rsvd(const MatrixR&, const RsvdParams&);
template TruncatedFactorization<Complex> rsvd(const MatrixC&, const RsvdParams&);
template double reconstruction_error(const MatrixR&, const TruncatedFactorization<double>&,
                                     ErrorNorm);
template double reconstruction_error(const MatrixC&, const TruncatedFactorization<Complex>&,
                                     ErrorNorm);

}  // namespace rlftn
