#include "cauchy/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

[[noreturn]] void fail_at(std::size_t index, const std::string& what) {
  std::ostringstream msg;
  msg << "iterate " << index << ": " << what;
  throw NumericalError(msg.str());
}

IterateRecord evaluate(const ObjectiveOracle& f, std::size_t index, Vector x,
                       const std::optional<double>& f_star) {
  IterateRecord r;
  r.index = index;
  r.f = f.value(x);
  r.g = f.gradient(x);
  r.x = std::move(x);
  if (!std::isfinite(r.f) || !all_finite(r.g)) fail_at(index, "non-finite value or gradient");
  if (f_star) r.gap = r.f - *f_star;
  return r;
}

}  // namespace

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::gradient_below_tol: return "gradient_below_tol";
    case StopReason::max_iters: return "max_iters";
    case StopReason::gap_below_tol: return "gap_below_tol";
    case StopReason::precision_limit: return "precision_limit";
  }
  return "unknown";
}

Trajectory run_cauchy(const ObjectiveOracle& f, std::span<const double> x0,
                      const SolverOptions& opts) {
  if (x0.size() != f.dim()) throw DomainError("run_cauchy: x0 has wrong dimension");
  if (opts.max_iters < 0 || !(opts.line_search_tol > 0.0))
    throw DomainError("run_cauchy: options must be positive");

  const double grad_tol = opts.grad_tol.value_or(
      1e-10 * (1.0 + (f.curvature() ? f.curvature()->upper : 0.0)));

  Trajectory traj;
  traj.line_search_tol = opts.line_search_tol;
  traj.grad_tol = grad_tol;
  const double target = kSolverHeadroom * opts.line_search_tol;
  traj.records.push_back(evaluate(f, 0, Vector(x0.begin(), x0.end()), opts.f_star));

  const QuadraticForm* quad = f.quadratic();
  for (;;) {
    IterateRecord& cur = traj.records.back();
    if (norm(cur.g) <= grad_tol) {
      traj.stop_reason = StopReason::gradient_below_tol;
      break;
    }
    if (opts.gap_tol && cur.gap && *cur.gap <= *opts.gap_tol) {
      traj.stop_reason = StopReason::gap_below_tol;
      break;
    }
    if (cur.index == static_cast<std::size_t>(opts.max_iters)) {
      traj.stop_reason = StopReason::max_iters;
      break;
    }

    LineSearchResult ls;
    try {
      ls = quad ? exact_step_quadratic(*quad, cur.x)
                : exact_step_general(f, cur.x, cur.g, target);
    } catch (const PrecisionLimit&) {
      traj.stop_reason = StopReason::precision_limit;
      break;
    } catch (const Error& e) {
      fail_at(cur.index, e.what());
    }
    const std::size_t index = cur.index + 1;
    IterateRecord next = evaluate(f, index, axpy(cur.x, -ls.gamma, cur.g), opts.f_star);
    const double gn = norm(next.g);
    if (gn > grad_tol && std::abs(dot(next.g, cur.g)) > target * gn * norm(cur.g)) {
      traj.stop_reason = StopReason::precision_limit;
      break;
    }
    cur.gamma = ls.gamma;
    traj.records.push_back(std::move(next));
  }
  return traj;
}

std::vector<YPoint> y_space_view(const Trajectory& traj, const ComposedProblem& problem) {
  std::vector<YPoint> out;
  out.reserve(traj.records.size());
  for (const auto& r : traj.records) {
    if (r.x.size() != problem.a_tilde.cols())
      throw DomainError("y_space_view: trajectory dimension does not match Ã");
    Vector y = multiply(problem.a_tilde, r.x);
    const double hv = problem.h_tilde.value(y);
    Vector g = problem.h_tilde.gradient(y);
    out.push_back({std::move(y), hv, std::move(g)});
  }
  return out;
}

}  // namespace cauchy
