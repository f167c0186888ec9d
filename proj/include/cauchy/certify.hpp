#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cauchy/objectives.hpp"
#include "cauchy/solver.hpp"

namespace cauchy {

/// Outcome of one inequality family over a trajectory. Margins are
/// "satisfied side minus violated side": a check of a <= b contributes b - a.
struct Certificate {
  std::string check_name;
  bool passed = true;
  double worst_margin = 0.0;
  std::size_t worst_index = 0;
  double tolerance_used = 0.0;
};

/// Accumulates (index, margin, tolerance) samples; the worst sample is the
/// one with the smallest margin + tolerance.
class CertificateBuilder {
 public:
  CertificateBuilder(std::string name, double nominal_tolerance);
  void add(std::size_t index, double margin, double tolerance);
  Certificate finish() const { return cert_; }

 private:
  Certificate cert_;
  bool empty_ = true;
};

struct ContractionReport {
  std::vector<double> per_step_ratios;
  /// Iterate index i of each ratio (f_{i+1}-f*)/(f_i-f*).
  std::vector<std::size_t> ratio_index;
  double bound = 0.0;
  std::string bound_name;
  double max_ratio = 0.0;
  double gap_floor = 0.0;
  bool passed = true;
  /// True when no gap exceeded the floor; this is a diagnostic, not a failure.
  bool too_short = false;
  std::size_t worst_index = 0;
  /// max over steps of ratio - bound - tolerance_i (<= 0 on pass).
  double worst_excess = 0.0;
};

/// Per-step ratios while f_i - f* > gap_floor = 1e3·eps·max(1,|f*|).
/// Step i passes when ratio <= bound + 1e-9 + 100·line_search_tol/gap_i.
ContractionReport check_contraction(const Trajectory& traj, double f_star, double bound,
                                    std::string bound_name);
Certificate to_certificate(const ContractionReport& r);

/// |g_{i+1}ᵀg_i| / (||g_{i+1}|| ||g_i||) <= 10·line_search_tol. A pair whose
/// second gradient is at or below the run's grad_tol is skipped.
Certificate check_orthogonality(const Trajectory& traj);

inline constexpr std::size_t kFiveInequalities = 5;

struct FiveInequalityPair {
  std::size_t index = 0;  // pair (index, index + 1)
  std::array<double, kFiveInequalities> margin{};
  std::array<double, kFiveInequalities> tolerance{};
};

/// The three interpolation inequalities for F_{μ̃,L̃} on {y_i, y_{i+1}, y*},
/// the exact-line-search relaxation g_{i+1}ᵀ(y_{i+1}-y_i) <= 0, and the
/// ε-orthogonality bound g_iᵀg_{i+1} <= ε||g_i|| ||g_{i+1}||, evaluated in
/// the rescaled y-space for every consecutive pair with y_i != y_{i+1}.
/// Tolerance per inequality: 1e-12 + 1e-8·max(1, L̃||y_i - y*||², |terms|).
std::vector<FiveInequalityPair> check_five_inequalities(const ComposedProblem& problem,
                                                        const Trajectory& traj);
std::vector<FiveInequalityPair> check_five_inequalities(const ComposedProblem& problem,
                                                        const std::vector<YPoint>& view,
                                                        double epsilon);
std::array<Certificate, kFiveInequalities> summarize(const std::vector<FiveInequalityPair>& pairs);

/// |g̃_{i+1}ᵀ Ã Ãᵀ g̃_i| / (||g̃_{i+1}|| ||g̃_i||) <= 10·line_search_tol, with the
/// same converged-pair exemption as check_orthogonality.
Certificate check_weighted_orthogonality(const ComposedProblem& problem, const Trajectory& traj);

struct RscReport {
  Certificate certificate;
  /// min_i <∇f(x_i), x_i - x_i'> / ||x_i - x_i'||² over iterates away from the
  /// minimizer set.
  std::optional<double> nu_hat;
};

/// <∇f(x), x - x'> >= ν||x - x'||² with x' the projection of x onto
/// {x : Ax = y*} and ν = μ·λ_min(AAᵀ).
RscReport check_rsc(const ComposedProblem& problem, const Trajectory& traj);

/// Lipschitz and monotonicity inequalities for the declared (μ, L) on
/// seeded random pairs, with 1e-9 relative slack.
Certificate check_class_membership(const ObjectiveOracle& h, int samples, std::uint64_t seed);
/// Same check against explicitly supplied constants.
Certificate check_class_membership(const ObjectiveOracle& h, const ClassParams& params,
                                   int samples, std::uint64_t seed);

}  // namespace cauchy
