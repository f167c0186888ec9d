#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "cauchy/linalg.hpp"
#include "cauchy/spectral.hpp"

namespace cauchy {

enum class Family { quadratic, logcosh, composed };

std::string_view to_string(Family f);

/// Membership data for F_{mu,L}: mu-strongly convex with L-Lipschitz gradient.
struct ClassParams {
  double mu;
  double ell;

  /// Validates 0 < mu <= ell.
  static ClassParams make(double mu, double ell);
  double kappa_h() const { return mu / ell; }
};

/// Curvature of the objective along any ray the solver can take. Used to
/// seed and cap the line-search bracket.
struct CurvatureBounds {
  double lower;
  double upper;
};

/// 1/2 xᵀQx + cᵀx together with the spectral facts of Q.
struct QuadraticForm {
  SymMatrix q;
  Vector c;
  SpectralDecomposition eigen;
  SpectralSummary summary;
};

struct Rescaled;

/// Value/gradient oracle for f: Rⁿ -> R. Immutable; copies share the
/// underlying data.
class ObjectiveOracle {
 public:
  std::size_t dim() const { return dim_; }
  Family family() const;
  const std::optional<ClassParams>& class_params() const { return params_; }
  const std::optional<CurvatureBounds>& curvature() const { return curvature_; }

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;

  /// Non-null only for the quadratic family.
  const QuadraticForm* quadratic() const;

 private:
  struct LogCosh {
    ClassParams base;
    Vector shift;
    double input_scale;
  };
  struct Composed {
    std::shared_ptr<const ObjectiveOracle> inner;
    Matrix a;
  };
  using Impl = std::variant<std::shared_ptr<const QuadraticForm>, LogCosh, Composed>;

  ObjectiveOracle(std::size_t dim, Impl impl, std::optional<ClassParams> params,
                  std::optional<CurvatureBounds> curvature)
      : dim_(dim), impl_(std::move(impl)), params_(params), curvature_(curvature) {}

  std::size_t dim_;
  Impl impl_;
  std::optional<ClassParams> params_;
  std::optional<CurvatureBounds> curvature_;

  friend ObjectiveOracle make_quadratic(const SymMatrix&, std::span<const double>);
  friend ObjectiveOracle make_logcosh(ClassParams, std::size_t, std::span<const double>);
  friend ObjectiveOracle compose(const ObjectiveOracle&, const Matrix&);
  friend Rescaled rescale(const ObjectiveOracle&, const Matrix&);
  friend std::pair<Vector, double> minimize_reference(const ObjectiveOracle&);
};

/// f(x) = 1/2 xᵀQx + cᵀx. Class params are attached only when Q is positive
/// definite (mu = lambda_min(Q), L = lambda_max(Q)). Throws DomainError when
/// Q is not PSD.
ObjectiveOracle make_quadratic(const SymMatrix& q, std::span<const double> c);

/// h(y) = mu/2 ||y - s||² + (L - mu) Σ log cosh(y_i - s_i).
/// Hessian is diagonal with entries in [mu, L], so h ∈ F_{mu,L}.
/// Requires mu < L.
ObjectiveOracle make_logcosh(ClassParams params, std::size_t m, std::span<const double> shift);

/// x ↦ h(Ax) with gradient Aᵀ∇h(Ax). Does not check rank.
ObjectiveOracle compose(const ObjectiveOracle& h, const Matrix& a);

/// h̃(y) = h(λ y) and Ã = A/λ with λ = sqrt(lambda_max(AAᵀ)).
struct Rescaled {
  ObjectiveOracle h_tilde;
  Matrix a_tilde;
  double lambda;
  double mu_tilde;
  double ell_tilde;
};

Rescaled rescale(const ObjectiveOracle& h, const Matrix& a);

/// Minimizer and minimum of a strongly convex h. Quadratics use the
/// pseudo-inverse with one refinement step; log-cosh uses damped Newton on
/// the diagonal Hessian (at most 100 iterations).
std::pair<Vector, double> minimize_reference(const ObjectiveOracle& h);

/// The composition f(x) = h(Ax) with every derived quantity the rate and
/// certification code needs.
struct ComposedProblem {
  ObjectiveOracle h;
  Matrix a;
  ObjectiveOracle f;
  SpectralSummary gram_summary;

  double lambda_scale;
  double mu_tilde;
  double ell_tilde;
  Matrix a_tilde;
  ObjectiveOracle h_tilde;

  Vector y_star;        // minimizer of h
  Vector y_tilde_star;  // minimizer of h̃ (= y_star / λ)
  double f_star;
  double epsilon;  // 1 - kappa(A)
  double nu;       // RSC modulus mu * lambda_min(AAᵀ)

  double kappa_a() const { return gram_summary.kappa; }
  double kappa_h() const { return h.class_params()->kappa_h(); }
  const ClassParams& params() const { return *h.class_params(); }
};

/// Throws DomainError if h lacks class params, m > n, or A is not of full
/// row rank.
ComposedProblem make_composed(const ObjectiveOracle& h, const Matrix& a);

}  // namespace cauchy
