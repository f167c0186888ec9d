#include "cauchy/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cauchy/errors.hpp"
#include "cauchy/rng.hpp"

namespace cauchy {

ObjectiveOracle ReducedQuadratic::h() const {
  return make_quadratic(SymMatrix::identity(m), u);
}

double ReducedQuadratic::reduced_value(std::span<const double> x) const {
  const Vector y = axpy(multiply_transposed(b, x), 1.0, u);
  return 0.5 * norm_squared(y) - 0.5 * norm_squared(u);
}

ComposedProblem ReducedQuadratic::composed() const { return make_composed(h(), b.transposed()); }

Vector ReducedQuadratic::kernel_component(std::span<const double> x) const {
  Vector out(x.size(), 0.0);
  for (std::size_t k = 0; k < kernel_basis.cols(); ++k) {
    double coef = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) coef += kernel_basis(i, k) * x[i];
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += coef * kernel_basis(i, k);
  }
  return out;
}

ReducedQuadratic reduce(const SymMatrix& q, std::span<const double> c) {
  const std::size_t n = q.dim();
  if (c.size() != n) throw DomainError("reduce: c has wrong dimension");
  const auto eigen = eigendecompose(q);
  const SpectralSummary summary = spectral_summary(eigen);
  const double thr = summary.zero_threshold;

  const Vector neg_c = scale(c, -1.0);
  const double resid = norm(subtract(multiply(q.matrix(), pinv_apply(eigen, thr, neg_c)), neg_c)) /
                       std::max(1.0, norm(neg_c));
  if (resid > 1e-8) {
    std::ostringstream msg;
    msg << "reduce: c is not in range(Q) (range residual " << resid
        << "); f is unbounded below and has no minimizer";
    throw DomainError(msg.str());
  }

  ReducedQuadratic r;
  r.q_summary = summary;
  r.m = summary.rank;
  r.kappa_bt = summary.kappa_pp;
  r.x_star = pinv_apply(eigen, thr, neg_c);

  // Eigenvalues are sorted descending, so the first m columns span range(Q).
  r.b = Matrix(n, r.m);
  for (std::size_t k = 0; k < r.m; ++k) {
    const double root = std::sqrt(eigen.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) r.b(i, k) = eigen.eigenvectors(i, k) * root;
  }
  r.kernel_basis = Matrix(n, n - r.m);
  for (std::size_t k = r.m; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) r.kernel_basis(i, k - r.m) = eigen.eigenvectors(i, k);

  r.u = scale(multiply_transposed(r.b, r.x_star), -1.0);
  r.f_star = -0.5 * norm_squared(r.u);
  return r;
}

std::vector<Certificate> check_reduction(const ReducedQuadratic& r, const SymMatrix& q,
                                         std::span<const double> c, const Trajectory& traj,
                                         int samples, std::uint64_t seed) {
  const std::size_t n = q.dim();
  const double lmax = r.q_summary.lambda_max;
  std::vector<Certificate> out;

  CertificateBuilder factor("reduction_factor", 1e-9 * lmax);
  const Matrix bbt = multiply(r.b, r.b.transposed());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(bbt(i, j) - q(i, j)));
  factor.add(0, -worst, 1e-9 * lmax);
  out.push_back(factor.finish());

  CertificateBuilder identity("reduction_identity", 1e-9);
  const ObjectiveOracle f = make_quadratic(q, c);
  SplitMix64 rng(seed);
  const double radius = std::max(1.0, norm(r.x_star));
  for (int s = 0; s < samples; ++s) {
    Vector x(n);
    for (auto& v : x) v = radius * rng.normal();
    const double fx = f.value(x);
    const double terms = 0.5 * lmax * norm_squared(x) + std::abs(dot(c, x));
    const double scale = std::max({1.0, std::abs(fx), terms});
    identity.add(static_cast<std::size_t>(s), -std::abs(fx - r.reduced_value(x)), 1e-9 * scale);
  }
  out.push_back(identity.finish());

  CertificateBuilder kappa("reduction_kappa", 1e-12);
  kappa.add(0, -std::abs(spectral_summary(gram(r.b.transposed())).kappa - r.q_summary.kappa_pp), 1e-12);
  out.push_back(kappa.finish());

  CertificateBuilder rates("reduction_rates", 1e-14);
  const double main = rate_main(r.kappa_bt, 1.0);
  const double cor = rate_corollary(r.q_summary);
  rates.add(0, -std::abs(main - cor), 1e-14 * std::max(cor, 1e-300));
  out.push_back(rates.finish());

  CertificateBuilder flat("flat_subspace", 1e-10);
  if (!traj.records.empty()) {
    const Vector k0 = r.kernel_component(traj.records.front().x);
    for (const auto& rec : traj.records) {
      const Vector d = subtract(r.kernel_component(rec.x), k0);
      double dmax = 0.0;
      for (double v : d) dmax = std::max(dmax, std::abs(v));
      flat.add(rec.index, -dmax, 1e-10);
    }
  }
  out.push_back(flat.finish());
  return out;
}

CorollaryResult corollary_pipeline(const SymMatrix& q, std::span<const double> c,
                                   std::span<const double> x0, SolverOptions opts) {
  ReducedQuadratic reduced = reduce(q, c);
  const ObjectiveOracle f = make_quadratic(q, c);
  opts.f_star = reduced.f_star;
  Trajectory traj = run_cauchy(f, x0, opts);

  RateBundle rates = quadratic_bundle(reduced.q_summary);
  if (std::abs(rates.rate_main - *rates.rate_corollary) > 1e-14 * std::max(rates.rate_main, 1e-300))
    throw std::logic_error("corollary_pipeline: rate_main(kappa_pp, 1) != rate_corollary");
  const RateBundle via_composed = proof_chain(reduced.composed());
  if (std::abs(via_composed.rate_main - rates.rate_main) > 1e-10)
    throw std::logic_error("corollary_pipeline: composed-view rate disagrees with eq6 bound");

  ContractionReport report =
      check_contraction(traj, reduced.f_star, *rates.rate_corollary, "eq6");
  return {std::move(traj), std::move(report), rates, std::move(reduced)};
}

}  // namespace cauchy
