#include "cauchy/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

// log cosh without the cancellation of log(cosh t) near 0 or the overflow of
// cosh t for large |t|.
double log_cosh(double t) {
  t = std::abs(t);
  if (t < 1.0) {
    const double s = std::sinh(0.5 * t);
    return std::log1p(2.0 * s * s);
  }
  return t + std::log1p(std::exp(-2.0 * t)) - std::numbers::ln2;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kNewtonMaxIters = 100;

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::quadratic: return "quadratic";
    case Family::logcosh: return "logcosh";
    case Family::composed: return "composed";
  }
  return "unknown";
}

ClassParams ClassParams::make(double mu, double ell) {
  if (!(mu > 0.0) || !(ell >= mu) || !std::isfinite(ell)) {
    std::ostringstream msg;
    msg << "ClassParams: need 0 < mu <= L, got mu=" << mu << " L=" << ell;
    throw DomainError(msg.str());
  }
  return {mu, ell};
}

Family ObjectiveOracle::family() const {
  return std::visit(Overloaded{
                        [](const std::shared_ptr<const QuadraticForm>&) { return Family::quadratic; },
                        [](const LogCosh&) { return Family::logcosh; },
                        [](const Composed&) { return Family::composed; },
                    },
                    impl_);
}

const QuadraticForm* ObjectiveOracle::quadratic() const {
  const auto* q = std::get_if<std::shared_ptr<const QuadraticForm>>(&impl_);
  return q ? q->get() : nullptr;
}

double ObjectiveOracle::value(std::span<const double> x) const {
  return std::visit(
      Overloaded{
          [&](const std::shared_ptr<const QuadraticForm>& q) {
            return 0.5 * dot(x, multiply(q->q.matrix(), x)) + dot(q->c, x);
          },
          [&](const LogCosh& lc) {
            const double mu = lc.base.mu;
            const double excess = lc.base.ell - lc.base.mu;
            double quad = 0.0;
            double lcs = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double t = lc.input_scale * x[i] - lc.shift[i];
              quad += t * t;
              lcs += log_cosh(t);
            }
            return 0.5 * mu * quad + excess * lcs;
          },
          [&](const Composed& c) { return c.inner->value(multiply(c.a, x)); },
      },
      impl_);
}

Vector ObjectiveOracle::gradient(std::span<const double> x) const {
  return std::visit(
      Overloaded{
          [&](const std::shared_ptr<const QuadraticForm>& q) {
            Vector g = multiply(q->q.matrix(), x);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += q->c[i];
            return g;
          },
          [&](const LogCosh& lc) {
            const double mu = lc.base.mu;
            const double excess = lc.base.ell - lc.base.mu;
            Vector g(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double t = lc.input_scale * x[i] - lc.shift[i];
              g[i] = lc.input_scale * (mu * t + excess * std::tanh(t));
            }
            return g;
          },
          [&](const Composed& c) {
            return multiply_transposed(c.a, c.inner->gradient(multiply(c.a, x)));
          },
      },
      impl_);
}

ObjectiveOracle make_quadratic(const SymMatrix& q, std::span<const double> c) {
  if (c.size() != q.dim()) throw DomainError("make_quadratic: c has wrong dimension");
  auto eigen = eigendecompose(q);
  SpectralSummary summary = spectral_summary(eigen);
  std::optional<ClassParams> params;
  if (summary.lambda_min > 0.0) params = ClassParams::make(summary.lambda_min, summary.lambda_max);
  const CurvatureBounds curv{*summary.lambda_min_pp, summary.lambda_max};
  auto form = std::make_shared<const QuadraticForm>(
      QuadraticForm{q, Vector(c.begin(), c.end()), std::move(eigen), summary});
  return ObjectiveOracle(q.dim(), std::move(form), params, curv);
}

ObjectiveOracle make_logcosh(ClassParams params, std::size_t m, std::span<const double> shift) {
  if (!(params.mu < params.ell))
    throw DomainError("make_logcosh: requires mu < L (use make_quadratic with mu*I for mu == L)");
  if (shift.size() != m) throw DomainError("make_logcosh: shift has wrong dimension");
  return ObjectiveOracle(m,
                         ObjectiveOracle::LogCosh{params, Vector(shift.begin(), shift.end()), 1.0},
                         params, CurvatureBounds{params.mu, params.ell});
}

ObjectiveOracle compose(const ObjectiveOracle& h, const Matrix& a) {
  if (a.rows() != h.dim()) throw DomainError("compose: A must have h.dim() rows");
  std::optional<CurvatureBounds> curv;
  if (const auto& p = h.class_params()) {
    const auto eig = eigendecompose(gram(a)).eigenvalues;
    curv = CurvatureBounds{p->mu * std::max(eig.back(), 0.0), p->ell * eig.front()};
  }
  return ObjectiveOracle(a.cols(),
                         ObjectiveOracle::Composed{std::make_shared<const ObjectiveOracle>(h), a},
                         std::nullopt, curv);
}

Rescaled rescale(const ObjectiveOracle& h, const Matrix& a) {
  const auto& params = h.class_params();
  if (!params) throw DomainError("rescale: h must carry class params (mu, L)");
  const double lambda_max = eigendecompose(gram(a)).eigenvalues.front();
  if (!(lambda_max > 0.0)) throw DomainError("rescale: A is the zero matrix");
  const double lambda = std::sqrt(lambda_max);
  const double l2 = lambda * lambda;
  const ClassParams tilde{l2 * params->mu, l2 * params->ell};
  const CurvatureBounds curv{tilde.mu, tilde.ell};

  auto h_tilde = std::visit(
      Overloaded{
          [&](const std::shared_ptr<const QuadraticForm>& q) {
            const ObjectiveOracle base = make_quadratic(q->q.scaled(l2), scale(q->c, lambda));
            return ObjectiveOracle(h.dim(), base.impl_, tilde, curv);
          },
          [&](const ObjectiveOracle::LogCosh& lc) {
            auto scaled = lc;
            scaled.input_scale *= lambda;
            return ObjectiveOracle(h.dim(), scaled, tilde, curv);
          },
          [&](const ObjectiveOracle::Composed&) -> ObjectiveOracle {
            throw DomainError("rescale: h must be a quadratic or log-cosh oracle");
          },
      },
      h.impl_);
  return Rescaled{std::move(h_tilde), a.scaled(1.0 / lambda), lambda, tilde.mu, tilde.ell};
}

std::pair<Vector, double> minimize_reference(const ObjectiveOracle& h) {
  const auto& params = h.class_params();
  if (!params) throw DomainError("minimize_reference: h must be strongly convex (mu > 0)");
  const double grad_target = 1e-12 * std::max(1.0, params->ell);

  if (const QuadraticForm* q = h.quadratic()) {
    const double thr = q->summary.zero_threshold;
    Vector y = pinv_apply(q->eigen, thr, scale(q->c, -1.0));
    const Vector r = h.gradient(y);
    y = subtract(y, pinv_apply(q->eigen, thr, r));
    const double gnorm = norm(h.gradient(y));
    if (gnorm > grad_target) {
      std::ostringstream msg;
      msg << "minimize_reference: quadratic solve residual " << gnorm << " exceeds " << grad_target;
      throw NumericalError(msg.str());
    }
    return {y, h.value(y)};
  }

  const auto* lc = std::get_if<ObjectiveOracle::LogCosh>(&h.impl_);
  if (!lc) throw DomainError("minimize_reference: unsupported objective family");

  const double s = lc->input_scale;
  const double mu = lc->base.mu;
  const double excess = lc->base.ell - lc->base.mu;
  // h is separable with diagonal Hessian, so each coordinate is damped on its
  // own: a step is halved until |∂h/∂y_i| decreases, which rules out the ±t
  // two-cycle of undamped Newton on log cosh.
  auto partial = [&](std::size_t i, double yi) {
    const double t = s * yi - lc->shift[i];
    return s * (mu * t + excess * std::tanh(t));
  };
  Vector y(h.dim(), 0.0);
  Vector g = h.gradient(y);
  for (int it = 0; it < kNewtonMaxIters && norm(g) > grad_target; ++it) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (g[i] == 0.0) continue;
      const double t = s * y[i] - lc->shift[i];
      const double sech = 1.0 / std::cosh(t);
      const double step = -g[i] / (s * s * (mu + excess * sech * sech));
      double alpha = 1.0;
      while (std::abs(partial(i, y[i] + alpha * step)) >= std::abs(g[i]) && alpha > 1e-10)
        alpha *= 0.5;
      y[i] += alpha * step;
    }
    g = h.gradient(y);
  }
  const double fy = h.value(y);
  const double gnorm = norm(g);
  if (gnorm > grad_target) {
    std::ostringstream msg;
    msg << "minimize_reference: damped Newton did not converge in " << kNewtonMaxIters
        << " iterations; final gradient norm " << gnorm;
    throw NumericalError(msg.str());
  }
  return {y, fy};
}

ComposedProblem make_composed(const ObjectiveOracle& h, const Matrix& a) {
  const auto& params = h.class_params();
  if (!params) throw DomainError("make_composed: h must carry class params (mu, L)");
  if (a.rows() != h.dim()) throw DomainError("make_composed: A must have h.dim() rows");
  if (a.rows() > a.cols()) throw DomainError("make_composed: requires m <= n");

  const SpectralSummary gs = spectral_summary(gram(a));
  if (gs.rank != a.rows()) {
    std::ostringstream msg;
    msg << "make_composed: A must have full row rank (rank " << gs.rank << " < m = " << a.rows()
        << "); the rate for h(Ax) is only established for full row-rank A";
    throw DomainError(msg.str());
  }

  Rescaled r = rescale(h, a);
  const double scaled_max = eigendecompose(gram(r.a_tilde)).eigenvalues.front();
  if (std::abs(scaled_max - 1.0) > 1e-10)
    throw NumericalError("make_composed: lambda_max(Ã Ãᵀ) deviates from 1");

  auto [y_star, h_star] = minimize_reference(h);
  const double gnorm = norm(h.gradient(y_star));
  if (gnorm > 1e-10 * std::max(1.0, params->ell * norm(y_star)))
    throw NumericalError("make_composed: reference optimum not stationary");

  ComposedProblem p{
      .h = h,
      .a = a,
      .f = compose(h, a),
      .gram_summary = gs,
      .lambda_scale = r.lambda,
      .mu_tilde = r.mu_tilde,
      .ell_tilde = r.ell_tilde,
      .a_tilde = std::move(r.a_tilde),
      .h_tilde = std::move(r.h_tilde),
      .y_star = y_star,
      .y_tilde_star = scale(y_star, 1.0 / r.lambda),
      .f_star = h_star,
      .epsilon = 1.0 - gs.kappa,
      .nu = params->mu * gs.lambda_min,
  };
  return p;
}

}  // namespace cauchy
