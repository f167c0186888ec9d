#include "cauchy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiRelTol = 1e-14;
constexpr double kSignEpsilon = 1e-12;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) { return norm(a.data()); }

void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
  const double c = 1.0 / std::hypot(t, 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = c * akp - s * akq;
    a(k, q) = a(q, k) = s * akp + c * akq;
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

double threshold_or_default(const SpectralDecomposition& d, std::optional<double> zero_threshold) {
  if (zero_threshold) return *zero_threshold;
  const double lmax = d.eigenvalues.empty() ? 0.0 : d.eigenvalues.front();
  return default_zero_threshold(d.dim(), lmax);
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) : m_(m.rows(), m.cols()) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DomainError("SymMatrix: matrix must be square with n >= 1");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i);
    for (std::size_t j = i + 1; j < n; ++j) m_(i, j) = m_(j, i) = 0.5 * (m(i, j) + m(j, i));
  }
}

Vector SpectralDecomposition::eigenvector(std::size_t k) const {
  Vector v(dim());
  for (std::size_t i = 0; i < dim(); ++i) v[i] = eigenvectors(i, k);
  return v;
}

SpectralDecomposition eigendecompose(const SymMatrix& m) {
  const std::size_t n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::identity(n);
  const double target = kJacobiRelTol * frobenius_norm(a);

  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweep == kMaxSweeps) {
      std::ostringstream msg;
      msg << "eigendecompose: no convergence after " << kMaxSweeps
          << " Jacobi sweeps; off-diagonal residual " << off << " (target " << target << ")";
      throw NumericalError(msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SpectralDecomposition d{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    d.eigenvalues[k] = a(src, src);
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, src)) > kSignEpsilon) {
        sign = v(i, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) d.eigenvectors(i, k) = sign * v(i, src);
  }
  return d;
}

double default_zero_threshold(std::size_t n, double lambda_max) {
  return static_cast<double>(n) * std::max(lambda_max, 0.0) * 1e-12;
}

SpectralSummary spectral_summary(const SpectralDecomposition& d,
                                 std::optional<double> zero_threshold) {
  const double thr = threshold_or_default(d, zero_threshold);
  const double lmax = d.eigenvalues.front();
  const double lmin = d.eigenvalues.back();
  if (lmin < -thr) {
    std::ostringstream msg;
    msg << "not positive semidefinite: most negative eigenvalue " << lmin
        << " below -zero_threshold " << -thr;
    throw DomainError(msg.str());
  }
  if (lmax <= thr) throw DomainError("zero matrix: lambda_max <= zero_threshold, kappa undefined");

  SpectralSummary s;
  s.zero_threshold = thr;
  s.lambda_max = lmax;
  s.lambda_min = std::abs(lmin) <= thr ? 0.0 : lmin;
  for (double l : d.eigenvalues) {
    if (l > thr) {
      ++s.rank;
      s.lambda_min_pp = l;
    }
  }
  s.kappa = s.lambda_min / s.lambda_max;
  s.kappa_pp = *s.lambda_min_pp / s.lambda_max;
  return s;
}

SpectralSummary spectral_summary(const SymMatrix& m, std::optional<double> zero_threshold) {
  return spectral_summary(eigendecompose(m), zero_threshold);
}

SymMatrix gram(const Matrix& a) { return SymMatrix(multiply(a, a.transposed())); }

Vector pinv_apply(const SpectralDecomposition& d, double zero_threshold,
                  std::span<const double> v) {
  const std::size_t n = d.dim();
  Vector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = d.eigenvalues[k];
    if (l <= zero_threshold) continue;
    double coef = 0.0;
    for (std::size_t i = 0; i < n; ++i) coef += d.eigenvectors(i, k) * v[i];
    coef /= l;
    for (std::size_t i = 0; i < n; ++i) out[i] += coef * d.eigenvectors(i, k);
  }
  return out;
}

Vector pinv_apply(const SymMatrix& m, std::span<const double> v) {
  const auto d = eigendecompose(m);
  return pinv_apply(d, threshold_or_default(d, std::nullopt), v);
}

double range_residual(const SymMatrix& m, std::span<const double> v) {
  const Vector x = pinv_apply(m, v);
  const Vector r = subtract(multiply(m.matrix(), x), v);
  return norm(r) / std::max(1.0, norm(v));
}

}  // namespace cauchy
