#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "cauchy/linalg.hpp"

namespace cauchy {

/// Square symmetric matrix. Construction symmetrizes via (M + Mᵀ)/2, so
/// entries(i, j) == entries(j, i) holds bitwise.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
  static SymMatrix diagonal(std::span<const double> d) { return SymMatrix(Matrix::diagonal(d)); }

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }

  SymMatrix scaled(double s) const { return SymMatrix(m_.scaled(s)); }

 private:
  Matrix m_;
};

/// Eigenpairs sorted by descending eigenvalue; column k of `eigenvectors`
/// pairs with eigenvalues[k]. Each column has its first non-negligible
/// component positive.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const { return eigenvalues.size(); }
  Vector eigenvector(std::size_t k) const;
};

struct SpectralSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Smallest eigenvalue strictly above zero_threshold.
  std::optional<double> lambda_min_pp;
  std::size_t rank = 0;
  double kappa = 0.0;
  double kappa_pp = 0.0;
  double zero_threshold = 0.0;
};

/// Cyclic Jacobi. Converges when the off-diagonal Frobenius norm drops below
/// 1e-14 * ||M||_F; throws NumericalError after 100 sweeps.
SpectralDecomposition eigendecompose(const SymMatrix& m);

/// Default rank cut: n * lambda_max * 1e-12.
double default_zero_threshold(std::size_t n, double lambda_max);

/// Throws DomainError if M has an eigenvalue below -zero_threshold ("not
/// positive semidefinite") or lambda_max <= zero_threshold ("zero matrix").
SpectralSummary spectral_summary(const SymMatrix& m,
                                 std::optional<double> zero_threshold = std::nullopt);
SpectralSummary spectral_summary(const SpectralDecomposition& d,
                                 std::optional<double> zero_threshold = std::nullopt);

/// A Aᵀ.
SymMatrix gram(const Matrix& a);

/// Minimum-norm solution M⁺ v using eigenpairs above the zero threshold.
Vector pinv_apply(const SymMatrix& m, std::span<const double> v);
Vector pinv_apply(const SpectralDecomposition& d, double zero_threshold,
                  std::span<const double> v);

/// ||M M⁺ v - v|| / max(1, ||v||). Zero iff v lies in range(M).
double range_residual(const SymMatrix& m, std::span<const double> v);

}  // namespace cauchy
