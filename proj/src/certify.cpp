#include "cauchy/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cauchy/errors.hpp"
#include "cauchy/rng.hpp"

namespace cauchy {

namespace {

constexpr double kAtol = 1e-12;
constexpr double kRtol = 1e-8;
constexpr double kRscRtol = 1e-9;
constexpr double kClassRtol = 1e-9;

double normalized_inner(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(dot(a, b)) / (na * nb);
}

// The gradient of a record that met the run's gradient tolerance is rounding
// noise in direction, so pairs ending there carry no orthogonality signal.
bool converged(const Trajectory& traj, std::size_t i) {
  return norm(traj.records[i].g) <= traj.grad_tol;
}

// h_i >= h_j + g_jᵀ(y_i - y_j) + Q with
// Q = (||Δg - μΔy||²/(L-μ) + μ||Δy||²)/2, the interpolation term rewritten
// so that L == μ reduces to its limit μ||Δy||²/2.
struct Interp {
  double margin;
  double scale;
};

Interp interpolation(double hi, double hj, std::span<const double> yi, std::span<const double> yj,
                     std::span<const double> gi, std::span<const double> gj, double mu,
                     double ell) {
  const Vector dy = subtract(yi, yj);
  const Vector dg = subtract(gi, gj);
  const double lin = dot(gj, dy);
  double quad = 0.5 * mu * norm_squared(dy);
  if (ell - mu > 1e-12 * ell) quad += 0.5 * norm_squared(axpy(dg, -mu, dy)) / (ell - mu);
  const double rhs = hj + lin + quad;
  const double scale =
      std::max({std::abs(hi), std::abs(hj), std::abs(lin), std::abs(quad)});
  return {hi - rhs, scale};
}

}  // namespace

CertificateBuilder::CertificateBuilder(std::string name, double nominal_tolerance) {
  cert_.check_name = std::move(name);
  cert_.tolerance_used = nominal_tolerance;
}

void CertificateBuilder::add(std::size_t index, double margin, double tolerance) {
  const bool ok = margin >= -tolerance;
  if (!ok) cert_.passed = false;
  if (empty_ || margin + tolerance < cert_.worst_margin + cert_.tolerance_used) {
    cert_.worst_margin = margin;
    cert_.worst_index = index;
    cert_.tolerance_used = tolerance;
    empty_ = false;
  }
}

ContractionReport check_contraction(const Trajectory& traj, double f_star, double bound,
                                    std::string bound_name) {
  ContractionReport r;
  r.bound = bound;
  r.bound_name = std::move(bound_name);
  r.gap_floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f_star));
  r.worst_excess = -std::numeric_limits<double>::infinity();

  const auto& recs = traj.records;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const double gap = recs[i].f - f_star;
    if (!(gap > r.gap_floor)) break;
    const double ratio = (recs[i + 1].f - f_star) / gap;
    const double tol = 1e-9 + 100.0 * traj.line_search_tol / gap;
    r.per_step_ratios.push_back(ratio);
    r.ratio_index.push_back(i);
    const double excess = ratio - bound - tol;
    if (excess > r.worst_excess) {
      r.worst_excess = excess;
      r.worst_index = i;
    }
    if (excess > 0.0) r.passed = false;
  }
  if (r.per_step_ratios.empty()) {
    r.too_short = true;
    r.worst_excess = 0.0;
  } else {
    r.max_ratio = *std::max_element(r.per_step_ratios.begin(), r.per_step_ratios.end());
  }
  return r;
}

Certificate to_certificate(const ContractionReport& r) {
  Certificate c;
  c.check_name = "contraction_" + r.bound_name;
  c.passed = r.passed;
  c.worst_index = r.worst_index;
  if (r.too_short) return c;
  // Recover the tolerance at the worst step from excess = ratio - bound - tol.
  const auto it = std::find(r.ratio_index.begin(), r.ratio_index.end(), r.worst_index);
  const double ratio = r.per_step_ratios[static_cast<std::size_t>(it - r.ratio_index.begin())];
  c.worst_margin = r.bound - ratio;
  c.tolerance_used = ratio - r.bound - r.worst_excess;
  return c;
}

Certificate check_orthogonality(const Trajectory& traj) {
  const double tol = 10.0 * traj.line_search_tol;
  CertificateBuilder b("orthogonality", tol);
  const auto& recs = traj.records;
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    if (converged(traj, i + 1)) continue;
    b.add(i, -normalized_inner(recs[i + 1].g, recs[i].g), tol);
  }
  return b.finish();
}

std::vector<FiveInequalityPair> check_five_inequalities(const ComposedProblem& problem,
                                                        const std::vector<YPoint>& view,
                                                        double epsilon) {
  const double mu = problem.mu_tilde;
  const double ell = problem.ell_tilde;
  const auto& ys = problem.y_tilde_star;
  const double hs = problem.f_star;
  const Vector gs(ys.size(), 0.0);

  std::vector<FiveInequalityPair> out;
  for (std::size_t i = 0; i + 1 < view.size(); ++i) {
    const YPoint& p0 = view[i];
    const YPoint& p1 = view[i + 1];
    const Vector step = subtract(p1.y, p0.y);
    if (norm(step) == 0.0) continue;

    const double base_scale = std::max(1.0, ell * norm_squared(subtract(p0.y, ys)));
    FiveInequalityPair pair;
    pair.index = i;
    auto set = [&](std::size_t k, double margin, double term_scale) {
      pair.margin[k] = margin;
      pair.tolerance[k] = kAtol + kRtol * std::max(base_scale, term_scale);
    };

    const Interp i1 = interpolation(p0.h_value, p1.h_value, p0.y, p1.y, p0.g, p1.g, mu, ell);
    const Interp i2 = interpolation(hs, p0.h_value, ys, p0.y, gs, p0.g, mu, ell);
    const Interp i3 = interpolation(hs, p1.h_value, ys, p1.y, gs, p1.g, mu, ell);
    set(0, i1.margin, i1.scale);
    set(1, i2.margin, i2.scale);
    set(2, i3.margin, i3.scale);

    const double ls = dot(p1.g, step);
    set(3, -ls, std::abs(ls));

    const double ip = dot(p0.g, p1.g);
    const double cs = epsilon * norm(p0.g) * norm(p1.g);
    set(4, cs - ip, std::max(std::abs(ip), cs));
    out.push_back(pair);
  }
  return out;
}

std::vector<FiveInequalityPair> check_five_inequalities(const ComposedProblem& problem,
                                                        const Trajectory& traj) {
  if (problem.epsilon >= 1.0)
    throw DomainError("check_five_inequalities: epsilon = 1 (A not of full row rank)");
  return check_five_inequalities(problem, y_space_view(traj, problem), problem.epsilon);
}

std::array<Certificate, kFiveInequalities> summarize(const std::vector<FiveInequalityPair>& pairs) {
  std::array<Certificate, kFiveInequalities> out;
  for (std::size_t k = 0; k < kFiveInequalities; ++k) {
    CertificateBuilder b("five_ineq_" + std::to_string(k + 1), kAtol + kRtol);
    for (const auto& p : pairs) b.add(p.index, p.margin[k], p.tolerance[k]);
    out[k] = b.finish();
  }
  return out;
}

Certificate check_weighted_orthogonality(const ComposedProblem& problem, const Trajectory& traj) {
  const double tol = 10.0 * traj.line_search_tol;
  CertificateBuilder b("weighted_orthogonality", tol);
  const auto view = y_space_view(traj, problem);
  for (std::size_t i = 0; i + 1 < view.size(); ++i) {
    if (converged(traj, i + 1)) continue;
    const double n0 = norm(view[i].g);
    const double n1 = norm(view[i + 1].g);
    if (n0 == 0.0 || n1 == 0.0) {
      b.add(i, 0.0, tol);
      continue;
    }
    const Vector w0 = multiply_transposed(problem.a_tilde, view[i].g);
    const Vector w1 = multiply_transposed(problem.a_tilde, view[i + 1].g);
    b.add(i, -std::abs(dot(w1, w0)) / (n0 * n1), tol);
  }
  return b.finish();
}

RscReport check_rsc(const ComposedProblem& problem, const Trajectory& traj) {
  const SymMatrix g = gram(problem.a);
  const auto eig = eigendecompose(g);
  const double thr = problem.gram_summary.zero_threshold;

  RscReport report;
  CertificateBuilder b("rsc", kRscRtol);
  for (const auto& r : traj.records) {
    const Vector resid = subtract(multiply(problem.a, r.x), problem.y_star);
    const Vector d = multiply_transposed(problem.a, pinv_apply(eig, thr, resid));  // x - x'
    const double lhs = dot(r.g, d);
    const double dd = norm_squared(d);
    const double rhs = problem.nu * dd;
    const double scale = std::max({1.0, std::abs(lhs), rhs});
    b.add(r.index, lhs - rhs, kRscRtol * scale);
    if (std::sqrt(dd) > 1e-6 * std::max(1.0, norm(r.x))) {
      const double ratio = lhs / dd;
      report.nu_hat = report.nu_hat ? std::min(*report.nu_hat, ratio) : ratio;
    }
  }
  report.certificate = b.finish();
  return report;
}

Certificate check_class_membership(const ObjectiveOracle& h, int samples, std::uint64_t seed) {
  const auto& params = h.class_params();
  if (!params) throw DomainError("check_class_membership: oracle has no class params");
  return check_class_membership(h, *params, samples, seed);
}

Certificate check_class_membership(const ObjectiveOracle& h, const ClassParams& params,
                                   int samples, std::uint64_t seed) {  SplitMix64 rng(seed);
  CertificateBuilder b("class_membership", kClassRtol);
  const std::size_t m = h.dim();
  for (int s = 0; s < samples; ++s) {
    const double r1 = rng.log_uniform(1e-2, 1e2);
    const double r2 = rng.log_uniform(1e-3, 1e1);
    Vector y(m), z(m);
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = r1 * rng.normal();
      z[i] = y[i] + r2 * rng.normal();
    }
    const Vector dy = subtract(y, z);
    const Vector dg = subtract(h.gradient(y), h.gradient(z));
    const double ndy = norm(dy);
    const double ndg = norm(dg);
    const auto idx = static_cast<std::size_t>(s);
    const double lip = params.ell * ndy;
    b.add(idx, lip - ndg, kClassRtol * std::max(lip, ndg));
    const double mono = dot(dg, dy);
    const double sc = params.mu * ndy * ndy;
    b.add(idx, mono - sc, kClassRtol * std::max(std::abs(mono), sc));
  }
  return b.finish();
}

}  // namespace cauchy
