#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cauchy/certify.hpp"
#include "cauchy/objectives.hpp"
#include "cauchy/rates.hpp"
#include "cauchy/reduction.hpp"
#include "cauchy/rng.hpp"
#include "cauchy/solver.hpp"

namespace cauchy {

enum class ScenarioFamily { quadratic_pd, quadratic_psd, composed_quadratic, composed_logcosh };

std::string_view to_string(ScenarioFamily f);

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct RealRange {
  double lo = 1.0;
  double hi = 1.0;
};

enum class ShiftKind { zero, random };

/// A batch of seeded instances. Scenario files are flat `key = value` text;
/// see parse_scenario for the keys.
struct Scenario {
  std::string name = "scenario";
  ScenarioFamily family = ScenarioFamily::quadratic_pd;
  std::uint64_t seed = 0;

  IntRange n{2, 2};
  IntRange m{1, 1};
  /// Number of positive eigenvalues for quadratic_psd; n/2 (at least 1) when unset.
  std::optional<std::int64_t> rank;

  /// Explicit eigenvalues of Q; overrides spectrum_range and fixes n.
  std::vector<double> spectrum;
  /// Positive eigenvalues of Q: λmax = hi, λ⁺⁺min = lo, the rest log-uniform.
  RealRange spectrum_range{1e-2, 1.0};
  /// Apply random orthogonal factors; false keeps Q diagonal and A = [diag(σ) 0].
  bool rotate = true;
  /// zero: c = 0 / shift = 0. random: minimizer drawn from N(0, I).
  ShiftKind shift = ShiftKind::random;

  /// L of h and the sampling range of κh = μ/L (composed families).
  double ell = 1.0;
  RealRange kappa_h{1.0, 1.0};
  /// Sampling range of κ(A) = σmin²/σmax² with σmax = 1.
  RealRange kappa_a{1.0, 1.0};
  /// Explicit singular values of A; overrides kappa_a and fixes m.
  std::vector<double> sigma;

  /// Explicit start; with x0_eigen its coordinates are in the eigenbasis of
  /// Q (or the right singular basis of A).
  std::vector<double> x0;
  bool x0_eigen = false;
  /// Radius of the random start on the sphere when x0 is empty.
  double x0_radius = 1.0;

  SolverOptions solver;
  /// Default CSV path used by the command line when --out is omitted.
  std::string output;
};

/// Keys: name, family, seed, n, m, rank, spectrum (list or lo..hi), rotate,
/// shift, ell, kappa_h, kappa_a, sigma, x0, x0_basis (standard | eigen),
/// x0_radius, max_iters, grad_tol, gap_tol, line_search_tol, output.
/// Ranges are written lo..hi; lists are comma separated; '#' starts a
/// comment. Throws ConfigError on unknown keys, bad values or an infeasible
/// combination.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
/// Checks a programmatically built scenario; throws ConfigError.
void validate(const Scenario& s);

/// Seed of instance `index`; SplitMix64(instance_seed(s, i)) reproduces it.
std::uint64_t instance_seed(std::uint64_t scenario_seed, std::size_t index);

/// n×n orthogonal matrix from modified Gram-Schmidt (two passes) on
/// Gaussian columns.
Matrix random_orthogonal(SplitMix64& rng, std::size_t n);

struct Instance {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  ScenarioFamily family = ScenarioFamily::quadratic_pd;
  std::size_t n = 0;
  std::size_t m = 0;
  /// Quadratic families.
  std::optional<SymMatrix> q;
  Vector c;
  /// Composed families.
  std::optional<ComposedProblem> composed;
  Vector x0;
};

Instance generate_instance(const Scenario& s, std::size_t index);

/// One solved instance with everything the certificates need.
struct Solved {
  Instance instance;
  Trajectory trajectory;
  double f_star = 0.0;
  RateBundle rates;
  /// Quadratic families: the reduction and its composed view.
  std::optional<ReducedQuadratic> reduced;
  std::optional<ComposedProblem> reduced_view;
  std::optional<ObjectiveOracle> quadratic;

  /// The composed problem itself, or the reduction's view h(Bᵀx).
  const ComposedProblem& view() const { return instance.composed ? *instance.composed : *reduced_view; }
  const ObjectiveOracle& objective() const { return quadratic ? *quadratic : instance.composed->f; }
};

Solved solve_instance(const Scenario& s, Instance inst);

enum class FailureKind { none, domain, numerical, other };

struct ResultRow {
  std::string scenario;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t iterations = 0;
  std::optional<double> max_ratio;
  std::optional<double> bound_eq3;
  std::optional<double> bound_eq5;
  std::optional<double> bound_eq6;
  std::optional<double> bound_conj;

  std::vector<Certificate> contraction;
  std::vector<Certificate> orthogonality;
  std::vector<Certificate> five_inequalities;
  std::vector<Certificate> rsc;
  std::vector<Certificate> reduction;
  std::optional<double> nu_hat;
  /// μ·λmin(AAᵀ) of the composed view.
  std::optional<double> nu;
  StopReason stop_reason = StopReason::max_iters;

  FailureKind failure = FailureKind::none;
  std::string error;
  double wall_ms = 0.0;

  /// Every certificate, in report order.
  std::vector<Certificate> certificates() const;
  bool passed() const;
};

struct RunOptions {
  /// Debug control: certify contraction against f* - corrupt_fstar.
  double corrupt_fstar = 0.0;
};

/// Build, solve and certify one instance. Failures are recorded in the row.
ResultRow evaluate_instance(const Scenario& s, std::size_t index, const RunOptions& opts = {});

using RowSink = std::function<void(const ResultRow&)>;

/// Instances run concurrently (OpenMP); rows are delivered to `sink` and
/// returned in index order.
std::vector<ResultRow> run_scenario(const Scenario& s, std::size_t count,
                                    const RunOptions& opts = {}, const RowSink& sink = {});
/// Single-threaded reference with identical output.
std::vector<ResultRow> run_scenario_serial(const Scenario& s, std::size_t count,
                                           const RunOptions& opts = {}, const RowSink& sink = {});

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

struct CsvHeader {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> seed_override;
};

/// `# generator=... seed=... seed_override=...` then the column line.
void write_csv_header(std::ostream& out, const CsvHeader& header);
/// Columns: scenario,seed,n,m,iters,max_ratio,bound_eq3,bound_eq5,bound_eq6,
/// bound_conj,orth_pass,five_ineq_pass,rsc_pass,reduction_pass,wall_ms.
/// Pass columns read "passed/total"; non-applicable cells are empty.
void write_csv_row(std::ostream& out, const ResultRow& row, bool omit_timing);

struct ConjectureRow {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t rank = 0;
  std::size_t iterations = 0;
  double max_ratio = 0.0;
  double bound_eq6 = 0.0;
  double bound_conj = 0.0;
  std::vector<double> spectrum;
};

/// Descriptive only: no verdict is ever drawn against the conjectured rate.
struct ConjectureSummary {
  std::vector<ConjectureRow> rows;
  double max_observed = 0.0;
  std::size_t exceed_count = 0;
  /// Instance maximizing max_ratio - bound_conj.
  std::size_t tightest = 0;
};

/// Quadratic families only; throws ConfigError otherwise.
ConjectureSummary explore_conjecture(const Scenario& s, std::size_t count);

void write_conjecture_csv(std::ostream& out, const Scenario& s, const ConjectureSummary& summary,
                          const CsvHeader& header);

}  // namespace cauchy
