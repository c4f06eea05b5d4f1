#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "rlftn/factorize.hpp"

using namespace rlftn;

namespace {

MatrixR diag321() {
  MatrixR a = MatrixR::Zero(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 2.0;
  a(2, 2) = 1.0;
  return a;
}

double tail_weight(const std::vector<double>& sigma, Index from) {
  double w = 0.0;
  for (std::size_t k = static_cast<std::size_t>(from); k < sigma.size(); ++k)
    w += sigma[k] * sigma[k];
  return w;
}

}  // namespace

TEST_CASE("tsvd keeps the leading values of a diagonal matrix") {
  const auto f = tsvd<double>(diag321(), 2);
  REQUIRE(f.rank() == 2);
  CHECK(f.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.sigma[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.discarded_exact);
  CHECK(f.discarded_weight == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(reconstruction_error(diag321(), f, ErrorNorm::frobenius) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reconstruction_error(diag321(), f, ErrorNorm::spectral) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tsvd rank one of the diagonal matrix") {
  const auto f = tsvd<double>(diag321(), 1);
  REQUIRE(f.rank() == 1);
  CHECK(f.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.discarded_weight == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(reconstruction_error(diag321(), f, ErrorNorm::frobenius) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(reconstruction_error(diag321(), f, ErrorNorm::spectral) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tsvd recovers a prescribed geometric spectrum") {
  std::mt19937_64 rng(42);
  const auto sigma = helpers::spectrum_family(0, 30);  // 2^-k
  const MatrixR a = helpers::matrix_with_spectrum<double>(50, 30, sigma, rng);
  const auto f = tsvd<double>(a, 10);
  REQUIRE(f.rank() == 10);
  for (Index k = 0; k < 10; ++k)
    CHECK(f.sigma[k] ==
          doctest::Approx(sigma[static_cast<std::size_t>(k)]).epsilon(1e-12));
  CHECK(f.discarded_weight == doctest::Approx(tail_weight(sigma, 10)).epsilon(1e-10));

  // Frobenius optimality: the error equals the discarded tail exactly.
  const double err = reconstruction_error(a, f, ErrorNorm::frobenius);
  CHECK(err * err == doctest::Approx(tail_weight(sigma, 10)).epsilon(1e-10));
}

TEST_CASE("factor matrices are isometric") {
  std::mt19937_64 rng(7);
  const MatrixR a = helpers::gaussian_matrix<double>(40, 25, rng);
  for (const auto& f : {tsvd<double>(a, 8), rsvd<double>(a, {8, 16, 4, 11})}) {
    const MatrixR ltl = f.left.adjoint() * f.left;
    const MatrixR rtr = f.right_adj * f.right_adj.adjoint();
    CHECK((ltl - MatrixR::Identity(f.rank(), f.rank())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rtr - MatrixR::Identity(f.rank(), f.rank())).cwiseAbs().maxCoeff() < 1e-12);
    for (Index k = 0; k + 1 < f.rank(); ++k) CHECK(f.sigma[k] >= f.sigma[k + 1]);
  }
}

TEST_CASE("rsvd matches tsvd on a fast-decaying spectrum") {
  std::mt19937_64 rng(3);
  const auto sigma = helpers::spectrum_family(0, 30);
  const MatrixR a = helpers::matrix_with_spectrum<double>(50, 30, sigma, rng);
  const auto ft = tsvd<double>(a, 10);
  const auto fr = rsvd<double>(a, {10, 20, 4, 123});
  REQUIRE(fr.rank() == 10);
  CHECK_FALSE(fr.discarded_exact);
  for (Index k = 0; k < 10; ++k)
    CHECK(std::abs(fr.sigma[k] - ft.sigma[k]) / ft.sigma[k] < 1e-10);

  const double et = reconstruction_error(a, ft, ErrorNorm::frobenius);
  const double er = reconstruction_error(a, fr, ErrorNorm::frobenius);
  CHECK(er / et <= 1.01);

  // The sampled tail underestimates the true discarded weight but is positive.
  CHECK(fr.discarded_weight > 0.0);
  CHECK(fr.discarded_weight <= ft.discarded_weight * (1.0 + 1e-8));
}

TEST_CASE("rsvd reconstructs exact-rank matrices to roundoff") {
  std::mt19937_64 rng(17);
  for (const Index r : {3, 7}) {
    std::vector<double> sigma;
    for (Index k = 0; k < r; ++k) sigma.push_back(5.0 / (1.0 + static_cast<double>(k)));

    const MatrixR a = helpers::matrix_with_spectrum<double>(60, 40, sigma, rng);
    const auto f = rsvd<double>(a, {10, 20, 4, 5});
    CHECK(reconstruction_error(a, f, ErrorNorm::frobenius) <= 1e-10 * a.norm());
    CHECK(f.rank() <= 10);

    const MatrixC ac = helpers::matrix_with_spectrum<Complex>(60, 40, sigma, rng);
    const auto fc = rsvd<Complex>(ac, {10, 20, 4, 5});
    CHECK(reconstruction_error(ac, fc, ErrorNorm::frobenius) <= 1e-10 * ac.norm());
  }
}

TEST_CASE("complex tsvd and rsvd agree") {
  std::mt19937_64 rng(29);
  const auto sigma = helpers::spectrum_family(2, 24);  // 0.8^k
  const MatrixC a = helpers::matrix_with_spectrum<Complex>(36, 24, sigma, rng);
  const auto ft = tsvd<Complex>(a, 8);
  const auto fr = rsvd<Complex>(a, {8, 16, 4, 99});
  for (Index k = 0; k < 8; ++k) {
    CHECK(ft.sigma[k] ==
          doctest::Approx(sigma[static_cast<std::size_t>(k)]).epsilon(1e-11));
    CHECK(std::abs(fr.sigma[k] - ft.sigma[k]) / ft.sigma[k] < 1e-9);
  }
}

TEST_CASE("rsvd is deterministic in the seed") {
  std::mt19937_64 rng(101);
  const MatrixR a = helpers::gaussian_matrix<double>(48, 32, rng);
  const auto f1 = rsvd<double>(a, {6, 12, 4, 77});
  const auto f2 = rsvd<double>(a, {6, 12, 4, 77});
  CHECK(f1.sigma == f2.sigma);
  CHECK(f1.left == f2.left);
  CHECK(f1.right_adj == f2.right_adj);

  const auto f3 = rsvd<double>(a, {6, 12, 4, 78});
  CHECK((f1.left - f3.left).cwiseAbs().maxCoeff() > 1e-12);
}

TEST_CASE("tsvd is scale equivariant") {
  std::mt19937_64 rng(55);
  const MatrixR a = helpers::gaussian_matrix<double>(20, 20, rng);
  const auto f1 = tsvd<double>(a, 5);
  const auto f2 = tsvd<double>(MatrixR(3.0 * a), 5);
  for (Index k = 0; k < 5; ++k)
    CHECK(f2.sigma[k] == doctest::Approx(3.0 * f1.sigma[k]).epsilon(1e-13));
}

TEST_CASE("requested rank clamps to the matrix size") {
  const auto f = tsvd<double>(diag321(), 10);
  CHECK(f.rank() == 3);
  CHECK(f.discarded_weight == 0.0);
}

TEST_CASE("randomized_range captures an exact-rank column space") {
  std::mt19937_64 rng(4);
  std::vector<double> sigma{4.0, 2.0, 1.0, 0.5, 0.25};
  const MatrixR a = helpers::matrix_with_spectrum<double>(30, 20, sigma, rng);
  const MatrixR q = randomized_range<double>(a, 8, 2, 31);
  CHECK(q.cols() == 8);
  const MatrixR qtq = q.adjoint() * q;
  CHECK((qtq - MatrixR::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  const MatrixR res = a - q * (q.adjoint() * a);
  CHECK(res.norm() <= 1e-10 * a.norm());
}

TEST_CASE("invalid factorization arguments throw") {
  const MatrixR a = MatrixR::Identity(4, 4);
  CHECK_THROWS_AS(tsvd<double>(a, 0), std::invalid_argument);
  CHECK_THROWS_AS(tsvd<double>(MatrixR(), 1), std::invalid_argument);
  CHECK_THROWS_AS(rsvd<double>(a, {0, 0, 4, 1}), std::invalid_argument);
  CHECK_THROWS_AS(rsvd<double>(a, {3, 2, 4, 1}), std::invalid_argument);  // l < rank
  CHECK_THROWS_AS(randomized_range<double>(a, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(randomized_range<double>(a, 5, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(randomized_range<double>(a, 2, -1, 1), std::invalid_argument);
}

TEST_CASE("rank-one matrix is recovered exactly") {
  std::mt19937_64 rng(9);
  VectorR u = helpers::gaussian_matrix<double>(12, 1, rng);
  VectorR v = helpers::gaussian_matrix<double>(9, 1, rng);
  u.normalize();
  v.normalize();
  const MatrixR a = 2.0 * u * v.transpose();
  const auto f = tsvd<double>(a, 1);
  REQUIRE(f.rank() == 1);
  CHECK(f.sigma[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(reconstruction_error(a, f, ErrorNorm::frobenius) <= 1e-12);
}

TEST_CASE("zero matrix yields an empty factorization") {
  const MatrixR a = MatrixR::Zero(10, 6);
  const auto ft = tsvd<double>(a, 3);
  CHECK(ft.rank() == 0);
  CHECK(ft.discarded_weight == 0.0);
  const auto fr = rsvd<double>(a, {3, 6, 2, 1});
  CHECK(fr.rank() == 0);
  CHECK(reconstruction_error(a, fr, ErrorNorm::frobenius) == 0.0);
}

TEST_CASE("mean range-capture residual improves with power iterations") {
  // Slow 1/k spectrum; for each of 50 matrices compare the subspace residual
  // at increasing power counts and require the means to be non-increasing.
  std::vector<double> sigma;
  for (Index k = 1; k <= 24; ++k) sigma.push_back(1.0 / static_cast<double>(k));
  const int powers[] = {0, 1, 2, 4};
  double mean[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<unsigned>(trial));
    const MatrixR a = helpers::matrix_with_spectrum<double>(40, 24, sigma, rng);
    for (int i = 0; i < 4; ++i) {
      const MatrixR q =
          randomized_range<double>(a, 8, powers[i], 7000 + static_cast<std::uint64_t>(trial));
      mean[i] += (a - q * (q.adjoint() * a)).norm() / 50.0;
    }
  }
  for (int i = 0; i + 1 < 4; ++i) CHECK(mean[i + 1] <= mean[i] * (1.0 + 1e-12));
}

TEST_CASE("truncation error equals the spectral tail of a random matrix") {
  std::mt19937_64 rng(77);
  const MatrixR a = helpers::gaussian_matrix<double>(40, 40, rng);
  const auto f = tsvd<double>(a, 8);
  const VectorR all = helpers::singular_values_ref(a);
  double tail = 0.0;
  for (Index k = 8; k < all.size(); ++k) tail += all[k] * all[k];
  const double err = reconstruction_error(a, f, ErrorNorm::frobenius);
  CHECK(err * err == doctest::Approx(tail).epsilon(1e-10));
  CHECK(f.discarded_weight == doctest::Approx(tail).epsilon(1e-10));
}

TEST_CASE("reconstruction error against an independent reference") {
  std::mt19937_64 rng(63);
  const auto sigma = helpers::spectrum_family(1, 20);  // (k+1)^-3
  const MatrixR a = helpers::matrix_with_spectrum<double>(28, 20, sigma, rng);
  const auto f = tsvd<double>(a, 6);
  const MatrixR r = a - f.reconstruct();
  const VectorR rs = helpers::singular_values_ref(r);
  CHECK(reconstruction_error(a, f, ErrorNorm::spectral) ==
        doctest::Approx(rs[0]).epsilon(1e-10));
  CHECK(reconstruction_error(a, f, ErrorNorm::frobenius) ==
        doctest::Approx(r.norm()).epsilon(1e-12));
}
