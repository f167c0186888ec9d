#include "cauchy/linesearch.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

constexpr int kMaxBisections = 200;
constexpr int kMaxDoublings = 2000;

struct Probe {
  double gamma;
  double phi_prime;
  double grad_norm;  // ||∇f(x - γ g)||
};

}  // namespace

LineSearchResult exact_step_quadratic(const QuadraticForm& q, std::span<const double> x) {
  Vector g = multiply(q.q.matrix(), x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += q.c[i];
  const double gg = norm_squared(g);
  if (gg == 0.0) throw DomainError("exact_step_quadratic: zero gradient, no descent direction");
  const double gqg = dot(g, multiply(q.q.matrix(), g));
  if (gqg <= q.summary.zero_threshold * gg) {
    std::ostringstream msg;
    msg << "exact_step_quadratic: flat direction (gᵀQg = " << gqg << ", ||g||² = " << gg << ")";
    throw NumericalError(msg.str());
  }
  return {gg / gqg, 0.0, 1};
}

LineSearchResult exact_step_quadratic(const SymMatrix& q, std::span<const double> c,
                                      std::span<const double> x) {
  const auto eigen = eigendecompose(q);
  const auto summary = spectral_summary(eigen);
  const QuadraticForm form{q, Vector(c.begin(), c.end()), eigen, summary};
  return exact_step_quadratic(form, x);
}

LineSearchResult exact_step_general(const ObjectiveOracle& f, std::span<const double> x,
                                    double tol) {
  const Vector g = f.gradient(x);
  return exact_step_general(f, x, g, tol);
}

LineSearchResult exact_step_general(const ObjectiveOracle& f, std::span<const double> x,
                                    std::span<const double> g, double tol) {
  const double gg = norm_squared(g);
  if (gg == 0.0) throw DomainError("exact_step_general: zero gradient, no descent direction");
  const double gnorm = std::sqrt(gg);

  double start = 1.0;
  double cap = std::numeric_limits<double>::infinity();
  if (const auto& curv = f.curvature()) {
    if (curv->upper > 0.0) start = 1.0 / curv->upper;
    if (curv->lower > 0.0) cap = 4.0 / curv->lower;
  }

  int evals = 0;
  auto probe = [&](double gamma) {
    const Vector xp = axpy(x, -gamma, g);
    const Vector gp = f.gradient(xp);
    ++evals;
    const double d = -dot(g, gp);
    if (!std::isfinite(d)) {
      std::ostringstream msg;
      msg << "exact_step_general: non-finite derivative at gamma = " << gamma;
      throw NumericalError(msg.str());
    }
    return Probe{gamma, d, norm(gp)};
  };
  Probe best{0.0, -gg, gnorm};
  auto consider = [&](const Probe& p) {
    if (std::abs(p.phi_prime) < std::abs(best.phi_prime)) best = p;
  };
  auto strict_ok = [&](const Probe& p) {
    return std::abs(p.phi_prime) <= tol * gnorm * std::min(gnorm, p.grad_norm);
  };
  auto result = [&](const Probe& p) {
    return LineSearchResult{p.gamma, std::abs(p.phi_prime), evals};
  };

  // Bracket: φ'(0) = -||g||² < 0, grow until φ' >= 0.
  double lo = 0.0;
  double hi = start;
  Probe p = probe(hi);
  consider(p);
  for (int k = 0; p.phi_prime < 0.0; ++k) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap || k == kMaxDoublings) {
      std::ostringstream msg;
      msg << "exact_step_general: bracket expansion exceeded gamma_cap = " << cap;
      throw NumericalError(msg.str());
    }
    p = probe(hi);
    consider(p);
  }
  if (p.phi_prime == 0.0 || strict_ok(p)) return result(p);

  for (int k = 0; k < kMaxBisections; ++k) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    p = probe(mid);
    consider(p);
    if (p.phi_prime == 0.0 || strict_ok(p)) return result(p);
    (p.phi_prime < 0.0 ? lo : hi) = mid;
  }

  if (std::abs(best.phi_prime) <= tol * gg) return result(best);
  std::ostringstream msg;
  msg << "exact_step_general: |phi'| = " << std::abs(best.phi_prime) << " above tol*||g||^2 = "
      << tol * gg << " after bisection";
  throw PrecisionLimit(msg.str());
}

}  // namespace cauchy
