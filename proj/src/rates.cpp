#include "cauchy/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

double square(double v) { return v * v; }

// rho_eps = (1 - κε)/(1 + κε) carries an absolute rounding error of a few ulps
// from 1 - κε, so its square is compared against a tolerance scaled by rho_eps
// rather than rho_eps²; the two agree except when the rate is tiny.
void check_chain(const RateBundle& b) {
  const double scale = std::max({std::abs(b.rate_main), square(b.rho_eps), std::abs(b.rho_eps)});
  if (std::abs(square(b.rho_eps) - b.rate_main) > 1e-14 * scale) {
    std::ostringstream msg;
    msg << "proof_chain: rho_eps^2 = " << square(b.rho_eps) << " disagrees with rate_main = "
        << b.rate_main;
    throw std::logic_error(msg.str());
  }
}

void require_nonzero(const SpectralSummary& s) {
  if (!(s.lambda_max > s.zero_threshold) || !s.lambda_min_pp)
    throw DomainError("rate: zero matrix has no positive spectrum");
}

}  // namespace

double rate_classic(const ClassParams& params) {
  return square((params.ell - params.mu) / (params.ell + params.mu));
}

double rate_main(double kappa_a, double kappa_h) {
  if (!(kappa_a > 0.0 && kappa_a <= 1.0))
    throw DomainError("rate_main: kappa(A) must lie in (0, 1]; A needs full row rank");
  if (!(kappa_h > 0.0 && kappa_h <= 1.0)) throw DomainError("rate_main: kappa_h must lie in (0, 1]");
  // (2 - κA ∓ κA κh) regrouped as (1 - κA) + (1 ∓ κA κh): no cancellation.
  const double gap = 1.0 - kappa_a;
  const double prod = kappa_a * kappa_h;
  return square((gap + (1.0 - prod)) / (gap + (1.0 + prod)));
}

double rate_corollary(const SpectralSummary& summary) {
  require_nonzero(summary);
  return square(1.0 - summary.kappa_pp);
}

double rate_conjectured(const SpectralSummary& summary) {
  require_nonzero(summary);
  const double lpp = *summary.lambda_min_pp;
  return square((summary.lambda_max - lpp) / (summary.lambda_max + lpp));
}

double kappa_eps(double mu_tilde, double ell_tilde, double epsilon) {
  return mu_tilde * (1.0 - epsilon) / (ell_tilde * (1.0 + epsilon));
}

double rho_eps(double kappa_eps) { return (1.0 - kappa_eps) / (1.0 + kappa_eps); }

RateBundle proof_chain(const ComposedProblem& problem) {
  RateBundle b;
  b.rate_classic = rate_classic(problem.params());
  b.rate_main = rate_main(problem.kappa_a(), problem.kappa_h());
  b.epsilon = problem.epsilon;
  b.kappa_eps = kappa_eps(problem.mu_tilde, problem.ell_tilde, b.epsilon);
  b.rho_eps = rho_eps(b.kappa_eps);
  check_chain(b);
  return b;
}

RateBundle quadratic_bundle(const SpectralSummary& q_summary) {
  require_nonzero(q_summary);
  RateBundle b;
  if (q_summary.lambda_min > 0.0)
    b.rate_classic = rate_classic(ClassParams{q_summary.lambda_min, q_summary.lambda_max});
  b.rate_main = rate_main(q_summary.kappa_pp, 1.0);
  b.rate_corollary = rate_corollary(q_summary);
  b.rate_conjectured = rate_conjectured(q_summary);
  b.epsilon = 1.0 - q_summary.kappa_pp;
  b.kappa_eps = kappa_eps(1.0, 1.0, b.epsilon);
  b.rho_eps = rho_eps(b.kappa_eps);
  check_chain(b);
  return b;
}

}  // namespace cauchy
