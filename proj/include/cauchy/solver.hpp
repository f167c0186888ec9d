#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cauchy/linesearch.hpp"
#include "cauchy/objectives.hpp"

namespace cauchy {

struct IterateRecord {
  std::size_t index = 0;
  Vector x;
  double f = 0.0;
  Vector g;
  /// Step taken from this iterate; absent on the last record.
  std::optional<double> gamma;
  /// f - f* when f* was supplied.
  std::optional<double> gap;
};

/// precision_limit: the next step could not be made orthogonal to the current
/// gradient within line_search_tol because rounding noise in the gradient
/// dominates; the step is discarded and the trajectory ends.
enum class StopReason { gradient_below_tol, max_iters, gap_below_tol, precision_limit };

std::string_view to_string(StopReason r);

struct Trajectory {
  std::vector<IterateRecord> records;
  StopReason stop_reason = StopReason::max_iters;
  double line_search_tol = kDefaultLineSearchTol;
  /// Gradient tolerance the run used; a final gradient at or below it has no
  /// meaningful direction.
  double grad_tol = 0.0;

  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
};

inline constexpr double kSolverHeadroom = 0.1;

struct SolverOptions {
  int max_iters = 10'000;
  /// Defaults to 1e-10 * (1 + upper curvature bound) when unset.
  std::optional<double> grad_tol;
  std::optional<double> gap_tol;
  double line_search_tol = kDefaultLineSearchTol;
  std::optional<double> f_star;
};

/// Gradient descent with exact line search: x_{i+1} = x_i - γ_i ∇f(x_i).
/// Quadratic oracles use the closed-form step, everything else the
/// bracketing/bisection search. The search targets kSolverHeadroom·line_search_tol
/// so that certificates recomputed at 10·line_search_tol keep a margin over
/// rounding noise. A step is accepted when ||g_{i+1}|| <= grad_tol or
/// |g_{i+1}ᵀg_i| <= kSolverHeadroom·line_search_tol·||g_{i+1}|| ||g_i||; otherwise
/// the run stops with precision_limit. Other line-search failures and
/// non-finite values are rethrown as NumericalError carrying the iterate index.
Trajectory run_cauchy(const ObjectiveOracle& f, std::span<const double> x0,
                      const SolverOptions& opts = {});

/// Image of a trajectory under y = Ã x, with h̃ values and gradients.
struct YPoint {
  Vector y;
  double h_value;
  Vector g;
};

std::vector<YPoint> y_space_view(const Trajectory& traj, const ComposedProblem& problem);

}  // namespace cauchy
