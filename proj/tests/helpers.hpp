#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "cauchy/linalg.hpp"
#include "cauchy/objectives.hpp"
#include "cauchy/rng.hpp"
#include "cauchy/solver.hpp"
#include "cauchy/spectral.hpp"

namespace testing {

inline cauchy::Matrix random_matrix(cauchy::SplitMix64& rng, std::size_t rows, std::size_t cols) {
  cauchy::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline cauchy::Vector random_vector(cauchy::SplitMix64& rng, std::size_t n, double s = 1.0) {
  cauchy::Vector v(n);
  for (auto& x : v) x = s * rng.normal();
  return v;
}

inline cauchy::SymMatrix random_symmetric(cauchy::SplitMix64& rng, std::size_t n) {
  return cauchy::SymMatrix(random_matrix(rng, n, n));
}

/// B Bᵀ for a random n×k B.
inline cauchy::SymMatrix random_psd(cauchy::SplitMix64& rng, std::size_t n, std::size_t k) {
  const auto b = random_matrix(rng, n, k);
  return cauchy::SymMatrix(cauchy::multiply(b, b.transposed()));
}

/// n×n orthogonal matrix from Gram-Schmidt on Gaussian columns.
inline cauchy::Matrix random_orthogonal(cauchy::SplitMix64& rng, std::size_t n) {
  cauchy::Matrix q(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    cauchy::Vector v = random_vector(rng, n);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < k; ++j) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += q(i, j) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= d * q(i, j);
      }
    const double nv = cauchy::norm(v);
    for (std::size_t i = 0; i < n; ++i) q(i, k) = v[i] / nv;
  }
  return q;
}

/// m×n matrix U diag(sigma) Vᵀ (first m columns of V), sigma.size() == m.
inline cauchy::Matrix with_singular_values(cauchy::SplitMix64& rng, std::size_t n,
                                           std::span<const double> sigma) {
  const std::size_t m = sigma.size();
  const auto u = testing::random_orthogonal(rng, m);
  const auto v = testing::random_orthogonal(rng, n);
  cauchy::Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k) a(i, j) += u(i, k) * sigma[k] * v(j, k);
  return a;
}

/// Trajectory through the given points, with f and ∇f recomputed and
/// γ_i = ||x_{i+1} - x_i|| / ||g_i||.
inline cauchy::Trajectory replay(const cauchy::ObjectiveOracle& f,
                                 const std::vector<cauchy::Vector>& xs,
                                 std::optional<double> f_star = std::nullopt) {
  cauchy::Trajectory t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cauchy::IterateRecord r;
    r.index = i;
    r.x = xs[i];
    r.f = f.value(xs[i]);
    r.g = f.gradient(xs[i]);
    if (f_star) r.gap = r.f - *f_star;
    t.records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    t.records[i].gamma = cauchy::norm(cauchy::subtract(xs[i + 1], xs[i])) / cauchy::norm(t.records[i].g);
  return t;
}

/// The same run with every step length halved.
inline cauchy::Trajectory halve_steps(const cauchy::ObjectiveOracle& f, const cauchy::Trajectory& t) {
  std::vector<cauchy::Vector> xs{t.records.front().x};
  for (std::size_t i = 0; i + 1 < t.records.size(); ++i)
    xs.push_back(cauchy::axpy(xs.back(), -0.5 * *t.records[i].gamma, f.gradient(xs.back())));
  return replay(f, xs);
}

inline double max_abs_diff(const cauchy::Matrix& a, const cauchy::Matrix& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r = std::max(r, std::abs(a(i, j) - b(i, j)));
  return r;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace testing
