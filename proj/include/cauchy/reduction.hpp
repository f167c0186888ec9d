#pragma once

#include <span>

#include "cauchy/certify.hpp"
#include "cauchy/objectives.hpp"
#include "cauchy/rates.hpp"
#include "cauchy/solver.hpp"

namespace cauchy {

/// A PSD quadratic f(x) = 1/2 xᵀQx + cᵀx rewritten as h(Bᵀx) with
/// h(y) = 1/2||y + u||² - 1/2||u||² ∈ F_{1,1}(R^m), m = rank(Q).
struct ReducedQuadratic {
  Matrix b;  // n×m, U Σ^{1/2}
  Vector u;  // -Σ^{1/2} Uᵀ x*
  Vector x_star;  // min-norm minimizer -Q⁺c
  double f_star = 0.0;
  std::size_t m = 0;
  double kappa_bt = 0.0;  // λ⁺⁺min(Q)/λmax(Q)
  SpectralSummary q_summary;
  /// Basis of ker(Q) as columns (n×(n-m)); empty when Q is definite.
  Matrix kernel_basis;

  /// h(y) = 1/2 yᵀy + uᵀy.
  ObjectiveOracle h() const;
  /// Evaluates 1/2||Bᵀx + u||² - 1/2||u||².
  double reduced_value(std::span<const double> x) const;
  /// The composed problem (h, Bᵀ).
  ComposedProblem composed() const;
  /// Component of x in ker(Q).
  Vector kernel_component(std::span<const double> x) const;
};

/// Throws DomainError for a zero Q, a non-PSD Q, or c ∉ range(Q)
/// (range_residual(Q, -c) > 1e-8: f is unbounded below).
ReducedQuadratic reduce(const SymMatrix& q, std::span<const double> c);

/// Certificates for a reduction:
///   reduction_factor    max|BBᵀ - Q| <= 1e-9·λmax(Q)
///   reduction_identity  f(x) == 1/2||Bᵀx + u||² - 1/2||u||² at `samples` seeded
///                       points, 1e-9 relative to the largest term
///   reduction_kappa     κ(Bᵀ) == λ⁺⁺min/λmax within 1e-12
///   reduction_rates     rate_main(κ(Bᵀ), 1) == rate_corollary within 1e-14 relative
///   flat_subspace       ker(Q) component of every iterate equals that of x_0
///                       within 1e-10
std::vector<Certificate> check_reduction(const ReducedQuadratic& r, const SymMatrix& q,
                                         std::span<const double> c, const Trajectory& traj,
                                         int samples, std::uint64_t seed);

struct CorollaryResult {
  Trajectory trajectory;
  ContractionReport contraction;
  RateBundle rates;
  ReducedQuadratic reduced;
};

/// Runs the solver on the original quadratic oracle and certifies
/// contraction against (1 - κ⁺⁺)². The rate bundle's rate_main(κ⁺⁺, 1) is
/// cross-checked against rate_corollary and against the composed view.
CorollaryResult corollary_pipeline(const SymMatrix& q, std::span<const double> c,
                                   std::span<const double> x0, SolverOptions opts = {});

}  // namespace cauchy
