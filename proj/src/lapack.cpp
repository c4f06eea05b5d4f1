#include "rlftn/lapack.hpp"

#include <complex>
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

extern "C" void openblas_set_num_threads(int);

namespace rlftn::lapack {

namespace {

// Grow-only scratch shared by all drivers in one thread; LAPACKE's
// convenience wrappers would otherwise malloc a fresh workspace per call,
// which is measurable in the TEBD inner loop.
struct Workspace {
  std::vector<double> dwork;
  std::vector<Complex> zwork;
  std::vector<double> rwork;
  std::vector<lapack_int> iwork;

  double* d(std::size_t n) {
    if (dwork.size() < n) dwork.resize(n);
    return dwork.data();
  }
  Complex* z(std::size_t n) {
    if (zwork.size() < n) zwork.resize(n);
    return zwork.data();
  }
  double* r(std::size_t n) {
    if (rwork.size() < n) rwork.resize(n);
    return rwork.data();
  }
  lapack_int* i(std::size_t n) {
    if (iwork.size() < n) iwork.resize(n);
    return iwork.data();
  }
};

Workspace& ws() {
  thread_local Workspace w;
  return w;
}

[[noreturn]] void fail(const char* driver, lapack_int info) {
  throw std::runtime_error(std::string("lapack: ") + driver + " failed with info=" +
                           std::to_string(info));
}

// gesdd occasionally fails to converge on hard inputs; gesvd is the slower,
// more robust fallback.  All calls are column-major on Eigen storage.

lapack_int gesdd(char jobz, lapack_int m, lapack_int n, double* a, lapack_int lda, double* s,
                 double* u, lapack_int ldu, double* vt, lapack_int ldvt) {
  const lapack_int k = std::min(m, n);
  double query = 0;
  lapack_int info = LAPACKE_dgesdd_work(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt,
                                        &query, -1, ws().i(8 * static_cast<std::size_t>(k)));
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query);
  return LAPACKE_dgesdd_work(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt,
                             ws().d(static_cast<std::size_t>(lwork)), lwork,
                             ws().i(8 * static_cast<std::size_t>(k)));
}

lapack_int gesdd(char jobz, lapack_int m, lapack_int n, Complex* a, lapack_int lda, double* s,
                 Complex* u, lapack_int ldu, Complex* vt, lapack_int ldvt) {
  const auto k = static_cast<std::size_t>(std::min(m, n));
  const auto mx = static_cast<std::size_t>(std::max(m, n));
  const std::size_t lrwork =
      jobz == 'N' ? 7 * k : std::max<std::size_t>(1, 5 * k * k + 7 * k) + 2 * k * mx;
  Complex query = 0;
  lapack_int info = LAPACKE_zgesdd_work(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt,
                                        &query, -1, ws().r(lrwork), ws().i(8 * k));
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query.real());
  return LAPACKE_zgesdd_work(LAPACK_COL_MAJOR, jobz, m, n, a, lda, s, u, ldu, vt, ldvt,
                             ws().z(static_cast<std::size_t>(lwork)), lwork, ws().r(lrwork),
                             ws().i(8 * k));
}

lapack_int gesvd(char jobu, char jobvt, lapack_int m, lapack_int n, double* a, lapack_int lda,
                 double* s, double* u, lapack_int ldu, double* vt, lapack_int ldvt) {
  double query = 0;
  lapack_int info = LAPACKE_dgesvd_work(LAPACK_COL_MAJOR, jobu, jobvt, m, n, a, lda, s, u, ldu, vt,
                                        ldvt, &query, -1);
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query);
  return LAPACKE_dgesvd_work(LAPACK_COL_MAJOR, jobu, jobvt, m, n, a, lda, s, u, ldu, vt, ldvt,
                             ws().d(static_cast<std::size_t>(lwork)), lwork);
}

lapack_int gesvd(char jobu, char jobvt, lapack_int m, lapack_int n, Complex* a, lapack_int lda,
                 double* s, Complex* u, lapack_int ldu, Complex* vt, lapack_int ldvt) {
  const auto k = static_cast<std::size_t>(std::min(m, n));
  Complex query = 0;
  lapack_int info = LAPACKE_zgesvd_work(LAPACK_COL_MAJOR, jobu, jobvt, m, n, a, lda, s, u, ldu, vt,
                                        ldvt, &query, -1, ws().r(5 * k));
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query.real());
  return LAPACKE_zgesvd_work(LAPACK_COL_MAJOR, jobu, jobvt, m, n, a, lda, s, u, ldu, vt, ldvt,
                             ws().z(static_cast<std::size_t>(lwork)), lwork, ws().r(5 * k));
}

template <class Scalar>
void svd_impl(const Matrix<Scalar>& a, Matrix<Scalar>& u, VectorR& s, Matrix<Scalar>& vt) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  if (m == 0 || n == 0) throw std::invalid_argument("lapack::svd: empty matrix");
  const lapack_int k = std::min(m, n);
  u.resize(m, k);
  s.resize(k);
  vt.resize(k, n);
  Matrix<Scalar> work = a;
  lapack_int info = gesdd('S', m, n, work.data(), m, s.data(), u.data(), m, vt.data(), k);
  if (info != 0) {
    work = a;
    info = gesvd('S', 'S', m, n, work.data(), m, s.data(), u.data(), m, vt.data(), k);
    if (info != 0) fail("gesdd/gesvd", info);
  }
}

template <class Scalar>
VectorR singular_values_impl(const Matrix<Scalar>& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  if (m == 0 || n == 0) return VectorR(0);
  VectorR s(std::min(m, n));
  Matrix<Scalar> work = a;
  lapack_int info = gesdd('N', m, n, work.data(), m, s.data(), nullptr, m, nullptr, 1);
  if (info != 0) {
    work = a;
    info = gesvd('N', 'N', m, n, work.data(), m, s.data(), nullptr, m, nullptr, 1);
    if (info != 0) fail("gesdd/gesvd", info);
  }
  return s;
}

lapack_int geqrf(lapack_int m, lapack_int n, double* a, double* tau) {
  double query = 0;
  lapack_int info = LAPACKE_dgeqrf_work(LAPACK_COL_MAJOR, m, n, a, m, tau, &query, -1);
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query);
  return LAPACKE_dgeqrf_work(LAPACK_COL_MAJOR, m, n, a, m, tau,
                             ws().d(static_cast<std::size_t>(lwork)), lwork);
}
lapack_int geqrf(lapack_int m, lapack_int n, Complex* a, Complex* tau) {
  Complex query = 0;
  lapack_int info = LAPACKE_zgeqrf_work(LAPACK_COL_MAJOR, m, n, a, m, tau, &query, -1);
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query.real());
  return LAPACKE_zgeqrf_work(LAPACK_COL_MAJOR, m, n, a, m, tau,
                             ws().z(static_cast<std::size_t>(lwork)), lwork);
}

lapack_int orgqr(lapack_int m, lapack_int k, double* a, const double* tau) {
  double query = 0;
  lapack_int info = LAPACKE_dorgqr_work(LAPACK_COL_MAJOR, m, k, k, a, m, tau, &query, -1);
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query);
  return LAPACKE_dorgqr_work(LAPACK_COL_MAJOR, m, k, k, a, m, tau,
                             ws().d(static_cast<std::size_t>(lwork)), lwork);
}
lapack_int orgqr(lapack_int m, lapack_int k, Complex* a, const Complex* tau) {
  Complex query = 0;
  lapack_int info = LAPACKE_zungqr_work(LAPACK_COL_MAJOR, m, k, k, a, m, tau, &query, -1);
  if (info != 0) return info;
  const auto lwork = static_cast<lapack_int>(query.real());
  return LAPACKE_zungqr_work(LAPACK_COL_MAJOR, m, k, k, a, m, tau,
                             ws().z(static_cast<std::size_t>(lwork)), lwork);
}

template <class Scalar>
void qr_impl(Matrix<Scalar> a, Matrix<Scalar>* q, Matrix<Scalar>* r) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  if (m == 0 || n == 0) throw std::invalid_argument("lapack::qr: empty matrix");
  const lapack_int k = std::min(m, n);
  std::vector<Scalar> tau(static_cast<std::size_t>(k));
  lapack_int info = geqrf(m, n, a.data(), tau.data());
  if (info != 0) fail("geqrf", info);
  if (r) {
    r->resize(k, n);
    r->setZero();
    for (lapack_int j = 0; j < n; ++j)
      for (lapack_int i = 0; i <= std::min<lapack_int>(j, k - 1); ++i) (*r)(i, j) = a(i, j);
  }
  if (q) {
    a.conservativeResize(m, k);
    info = orgqr(m, k, a.data(), tau.data());
    if (info != 0) fail("orgqr", info);
    *q = std::move(a);
  }
}

}  // namespace

void svd(const MatrixR& a, MatrixR& u, VectorR& s, MatrixR& vt) { svd_impl(a, u, s, vt); }
void svd(const MatrixC& a, MatrixC& u, VectorR& s, MatrixC& vt) { svd_impl(a, u, s, vt); }

VectorR singular_values(const MatrixR& a) { return singular_values_impl(a); }
VectorR singular_values(const MatrixC& a) { return singular_values_impl(a); }

MatrixR orthonormal_columns(MatrixR a) {
  MatrixR q;
  qr_impl<double>(std::move(a), &q, nullptr);
  return q;
}
MatrixC orthonormal_columns(MatrixC a) {
  MatrixC q;
  qr_impl<Complex>(std::move(a), &q, nullptr);
  return q;
}

void qr(MatrixR a, MatrixR& q, MatrixR& r) { qr_impl<double>(std::move(a), &q, &r); }
void qr(MatrixC a, MatrixC& q, MatrixC& r) { qr_impl<Complex>(std::move(a), &q, &r); }

void use_single_thread() { openblas_set_num_threads(1); }

}  // namespace rlftn::lapack
