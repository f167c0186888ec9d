#pragma once

#include <optional>

#include "cauchy/objectives.hpp"
#include "cauchy/spectral.hpp"

namespace cauchy {

/// Closed-form per-step contraction factors for one instance.
///
/// rate_conjectured is the open improvement of rate_corollary. It is reported
/// for exploration only and never used as a pass/fail bound.
struct RateBundle {
  /// ((L-mu)/(L+mu))², absent when no strong convexity modulus applies.
  std::optional<double> rate_classic;
  /// ((2 - κA - κA κh)/(2 - κA + κA κh))².
  double rate_main = 0.0;
  /// (1 - λ⁺⁺min/λmax)², quadratics only.
  std::optional<double> rate_corollary;
  /// ((λmax - λ⁺⁺min)/(λmax + λ⁺⁺min))², quadratics only.
  std::optional<double> rate_conjectured;
  double epsilon = 0.0;
  double kappa_eps = 0.0;
  double rho_eps = 0.0;
};

double rate_classic(const ClassParams& params);

/// Throws DomainError unless kappa_a ∈ (0, 1] and kappa_h ∈ (0, 1].
double rate_main(double kappa_a, double kappa_h);

/// Both throw DomainError for a zero matrix summary.
double rate_corollary(const SpectralSummary& summary);
double rate_conjectured(const SpectralSummary& summary);

/// κ_ε = μ̃(1-ε) / (L̃(1+ε)).
double kappa_eps(double mu_tilde, double ell_tilde, double epsilon);
/// ρ_ε = (1-κ_ε)/(1+κ_ε).
double rho_eps(double kappa_eps);

/// Rates for f = h(Ax) from the rescaled quantities. Throws std::logic_error
/// if ρ_ε² and rate_main disagree beyond 1e-14 relative.
RateBundle proof_chain(const ComposedProblem& problem);

/// Rates for a PSD quadratic via the semidefinite reduction (h ∈ F_{1,1},
/// κ(Bᵀ) = κ⁺⁺(Q)). rate_classic is present only for positive definite Q.
RateBundle quadratic_bundle(const SpectralSummary& q_summary);

}  // namespace cauchy
