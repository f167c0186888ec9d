#include <cmath>

#include "cauchy/errors.hpp"
#include "cauchy/spectral.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace cauchy;

namespace {

Matrix reconstruct(const SpectralDecomposition& d) {
  const std::size_t n = d.dim();
  Matrix m(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) += d.eigenvalues[k] * d.eigenvectors(i, k) * d.eigenvectors(j, k);
  return m;
}

void check_invariants(const SymMatrix& m, const SpectralDecomposition& d) {
  const double scale = std::max(1.0, m.matrix().max_abs());
  CHECK(testing::max_abs_diff(reconstruct(d), m.matrix()) <= 1e-10 * scale);
  const Matrix vtv = multiply(d.eigenvectors.transposed(), d.eigenvectors);
  CHECK(testing::max_abs_diff(vtv, Matrix::identity(m.dim())) <= 1e-10);
  for (std::size_t k = 0; k + 1 < d.dim(); ++k) CHECK(d.eigenvalues[k] >= d.eigenvalues[k + 1]);
}

}  // namespace

TEST_CASE("SymMatrix symmetrizes exactly") {
  const SymMatrix s(Matrix::from_rows({{1.0, 2.0}, {4.0, 5.0}}));
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);
  CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), DomainError);
}

TEST_CASE("eigendecompose: diagonal and identity") {
  const double diag[] = {1.0, 10.0};
  const auto d = eigendecompose(SymMatrix::diagonal(diag));
  CHECK(d.eigenvalues[0] == 10.0);
  CHECK(d.eigenvalues[1] == 1.0);
  CHECK(d.eigenvectors(1, 0) == 1.0);
  CHECK(d.eigenvectors(0, 1) == 1.0);

  const auto id = eigendecompose(SymMatrix::identity(3));
  for (double l : id.eigenvalues) CHECK(l == 1.0);
  check_invariants(SymMatrix::identity(3), id);
}

TEST_CASE("eigendecompose: 2x2 against the characteristic polynomial") {
  const SymMatrix m(Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}}));
  const auto [l1, l2] = oracle::eig2(2.0, 1.0, 2.0);
  const auto d = eigendecompose(m);
  CHECK(d.eigenvalues[0] == doctest::Approx(l1).epsilon(1e-14));
  CHECK(d.eigenvalues[1] == doctest::Approx(l2).epsilon(1e-14));
  CHECK(l1 == doctest::Approx(3.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(d.eigenvectors(0, 0) == doctest::Approx(r));
  CHECK(d.eigenvectors(1, 0) == doctest::Approx(r));
  CHECK(d.eigenvectors(0, 1) == doctest::Approx(r));
  CHECK(d.eigenvectors(1, 1) == doctest::Approx(-r));
}

TEST_CASE("eigendecompose: random symmetric trace and determinant") {
  SplitMix64 rng(7);
  for (std::size_t n = 1; n <= 16; ++n) {
    const SymMatrix m = testing::random_symmetric(rng, n);
    const auto d = eigendecompose(m);
    check_invariants(m, d);
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
    for (double l : d.eigenvalues) sum += l;
    CHECK(std::abs(trace - sum) <= 1e-9 * n * m.matrix().max_abs());
    if (n <= 4) {
      std::vector<std::vector<double>> rows(n, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = m(i, j);
      double prod = 1.0;
      for (double l : d.eigenvalues) prod *= l;
      const double det = oracle::determinant(rows);
      CHECK((det > 0) == (prod > 0));
    }
  }
}

TEST_CASE("eigendecompose: repeated eigenvalues") {
  SplitMix64 rng(11);
  const auto q = testing::random_matrix(rng, 5, 5);
  // Orthonormalize columns by Gram-Schmidt to get a rotation.
  Matrix v(5, 5);
  for (std::size_t k = 0; k < 5; ++k) {
    Vector col(5);
    for (std::size_t i = 0; i < 5; ++i) col[i] = q(i, k);
    for (std::size_t j = 0; j < k; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i < 5; ++i) c += v(i, j) * col[i];
      for (std::size_t i = 0; i < 5; ++i) col[i] -= c * v(i, j);
    }
    const double nn = norm(col);
    for (std::size_t i = 0; i < 5; ++i) v(i, k) = col[i] / nn;
  }
  const double lam[] = {3.0, 3.0, 3.0, 1.0, 1.0};
  const SymMatrix m(multiply(multiply(v, Matrix::diagonal(lam)), v.transposed()));
  const auto d = eigendecompose(m);
  check_invariants(m, d);
  CHECK(d.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(d.eigenvalues[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral_summary: diagonal readoff") {
  const double a[] = {0.0, 1.0, 4.0};
  const auto s = spectral_summary(SymMatrix::diagonal(a));
  CHECK(s.lambda_min == 0.0);
  CHECK(*s.lambda_min_pp == 1.0);
  CHECK(s.lambda_max == 4.0);
  CHECK(s.rank == 2);
  CHECK(s.kappa_pp == 0.25);
  CHECK(s.kappa == 0.0);
  CHECK(s.zero_threshold == doctest::Approx(3 * 4.0 * 1e-12));

  const double b[] = {1.0, 10.0};
  const auto t = spectral_summary(SymMatrix::diagonal(b));
  CHECK(t.kappa == doctest::Approx(0.1));
  CHECK(t.rank == 2);
  CHECK(*t.lambda_min_pp == 1.0);
}

TEST_CASE("spectral_summary: Gram matrix of two independent columns has rank 2") {
  SplitMix64 rng(3);
  const auto q = testing::random_psd(rng, 4, 2);
  const auto s = spectral_summary(q);
  CHECK(s.rank == 2);
  CHECK(s.lambda_min == 0.0);
  CHECK(s.lambda_min <= *s.lambda_min_pp);
  CHECK(*s.lambda_min_pp <= s.lambda_max);
}

TEST_CASE("spectral_summary: errors") {
  const double neg[] = {1.0, -0.5};
  CHECK_THROWS_WITH_AS(spectral_summary(SymMatrix::diagonal(neg)),
                       doctest::Contains("not positive semidefinite"), DomainError);
  CHECK_THROWS_WITH_AS(spectral_summary(SymMatrix(Matrix(3, 3))), doctest::Contains("zero matrix"),
                       DomainError);
  // Tiny negative eigenvalue inside the threshold is treated as zero.
  const double tiny[] = {1.0, -1e-15};
  CHECK(spectral_summary(SymMatrix::diagonal(tiny)).lambda_min == 0.0);
}

TEST_CASE("gram") {
  const auto g = gram(Matrix::from_rows({{1, 0, 0}, {0, 2, 0}}));
  CHECK(g(0, 0) == 1.0);
  CHECK(g(1, 1) == 4.0);
  CHECK(g(0, 1) == 0.0);
  CHECK(gram(Matrix::identity(3)).matrix() == Matrix::identity(3));
  CHECK(gram(Matrix::from_rows({{1, 1}})).matrix()(0, 0) == 2.0);

  SplitMix64 rng(5);
  // Orthonormal rows: first rows of an orthogonal eigenvector matrix.
  const auto d = eigendecompose(testing::random_symmetric(rng, 6));
  Matrix a(3, 6);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 6; ++j) a(i, j) = d.eigenvectors(j, i);
  CHECK(spectral_summary(gram(a)).kappa == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pinv_apply") {
  const double a[] = {1.0, 10.0};
  const double va[] = {1.0, 10.0};
  auto x = pinv_apply(SymMatrix::diagonal(a), va);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  const double b[] = {0.0, 2.0};
  const double vb[] = {0.0, 4.0};
  x = pinv_apply(SymMatrix::diagonal(b), vb);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == doctest::Approx(2.0));

  const double vc[] = {3.0, 3.0};
  x = pinv_apply(SymMatrix(Matrix::from_rows({{2, 1}, {1, 2}})), vc);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pinv_apply(M, Mx) projects x onto range(M)") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 10));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n) - 1));
    const auto m = testing::random_psd(rng, n, k);
    const Vector x = testing::random_vector(rng, n);
    const Vector got = pinv_apply(m, multiply(m.matrix(), x));
    // Projection via the kernel: x minus its components along null eigenvectors.
    const auto d = eigendecompose(m);
    const auto s = spectral_summary(d);
    Vector proj = x;
    for (std::size_t c = s.rank; c < n; ++c) {
      const Vector v = d.eigenvector(c);
      const double coef = dot(v, x);
      for (std::size_t i = 0; i < n; ++i) proj[i] -= coef * v[i];
    }
    CHECK(testing::max_abs_diff(got, proj) <= 1e-8);
  }
}

TEST_CASE("range_residual") {
  const double a[] = {0.0, 1.0};
  const double in_range[] = {0.0, 5.0};
  const double in_kernel[] = {3.0, 0.0};
  CHECK(range_residual(SymMatrix::diagonal(a), in_range) == doctest::Approx(0.0));
  CHECK(range_residual(SymMatrix::diagonal(a), in_kernel) == doctest::Approx(1.0));
  const double b[] = {0.0, 2.0};
  const double v[] = {1.0, 2.0};
  CHECK(range_residual(SymMatrix::diagonal(b), v) == doctest::Approx(1.0 / std::sqrt(5.0)));
}
