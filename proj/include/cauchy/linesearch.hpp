#pragma once

#include <span>

#include "cauchy/objectives.hpp"

namespace cauchy {

struct LineSearchResult {
  double gamma = 0.0;
  /// |φ'(gamma)| where φ(γ) = f(x - γ g).
  double phi_prime_residual = 0.0;
  int evaluations = 0;
};

inline constexpr double kDefaultLineSearchTol = 1e-12;

/// Closed form gamma = gᵀg / gᵀQg for g = Qx + c. Throws NumericalError on a
/// flat direction (gᵀQg <= zero_threshold * ||g||²) and DomainError on g = 0.
LineSearchResult exact_step_quadratic(const QuadraticForm& q, std::span<const double> x);
LineSearchResult exact_step_quadratic(const SymMatrix& q, std::span<const double> c,
                                      std::span<const double> x);

/// Exact minimization of φ(γ) = f(x - γ g) by bracketing on φ' followed by
/// bisection. On success |φ'(gamma)| <= tol * ||g||²; bisection continues
/// while it can also reach tol * ||g|| * ||∇f(x - γ g)||, which keeps the
/// normalized successive-gradient inner product at the tol level.
///
/// The bracket starts at 1/upper and doubles up to 4/lower, using the
/// oracle's curvature bounds (1 and unbounded when absent).
LineSearchResult exact_step_general(const ObjectiveOracle& f, std::span<const double> x,
                                    double tol = kDefaultLineSearchTol);
LineSearchResult exact_step_general(const ObjectiveOracle& f, std::span<const double> x,
                                    std::span<const double> g, double tol);

}  // namespace cauchy
