#include "cauchy/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cauchy/certify.hpp"
#include "cauchy/errors.hpp"
#include "cauchy/experiment.hpp"
#include "cauchy/rates.hpp"
#include "cauchy/reduction.hpp"
#include "cauchy/rng.hpp"
#include "cauchy/solver.hpp"

namespace cauchy {

namespace {

constexpr std::size_t kBatch = 50;
constexpr double kRatioSlack = 1e-8;

const char* const kLogcoshScenario =
    "name = acceptance_logcosh\nfamily = composed_logcosh\nseed = 14\nn = 4..16\nm = 2..8\n"
    "ell = 4\nkappa_h = 0.05..1\nkappa_a = 0.05..1\nx0_radius = 3\n";
const char* const kPsdScenario =
    "name = acceptance_psd\nfamily = quadratic_psd\nseed = 12\nn = 2..16\nspectrum = 0.01..1\n";
const char* const kPdScenario =
    "name = acceptance_pd\nfamily = quadratic_pd\nseed = 11\nn = 2..16\nspectrum = 0.01..1\n";
const char* const kDiag110Scenario =
    "name = acceptance_diag_1_10\nfamily = quadratic_psd\nseed = 21\nspectrum = 1, 10\n"
    "x0 = 10, 1\nx0_basis = eigen\nshift = zero\n";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// x rounded to a 26-bit mantissa.
double mantissa26(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  return std::ldexp(std::round(std::ldexp(m, 26)), e - 26);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const Certificate* find(const std::vector<Certificate>& certs, std::string_view name) {
  for (const auto& c : certs)
    if (c.check_name == name) return &c;
  return nullptr;
}

std::string first_failure(const std::vector<ResultRow>& rows) {
  for (const auto& r : rows)
    if (r.failure != FailureKind::none) return "instance " + std::to_string(r.index) + ": " + r.error;
  return {};
}

/// Same run with every step halved: x_{i+1} = x_i - γ_i/2 ∇f(x_i).
Trajectory halve_steps(const ObjectiveOracle& f, const Trajectory& t) {
  Trajectory out;
  out.line_search_tol = t.line_search_tol;
  Vector x = t.records.front().x;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    IterateRecord r;
    r.index = i;
    r.x = x;
    r.f = f.value(x);
    r.g = f.gradient(x);
    if (i + 1 < t.records.size()) {
      r.gamma = 0.5 * *t.records[i].gamma;
      x = axpy(x, -*r.gamma, r.g);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

/// max over 50 seeded points of ||fd - g|| / ||g||, centered differences at
/// step 1e-6·max(1, ||x||).
double fd_error(const ObjectiveOracle& f, SplitMix64& rng, double radius) {
  double worst = 0.0;
  for (int p = 0; p < 50; ++p) {
    Vector x(f.dim());
    for (auto& v : x) v = radius * rng.normal();
    const Vector g = f.gradient(x);
    const double h = 1e-6 * std::max(1.0, norm(x));
    Vector fd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      x[i] = xi + h;
      const double fp = f.value(x);
      x[i] = xi - h;
      const double fm = f.value(x);
      x[i] = xi;
      fd[i] = (fp - fm) / (2.0 * h);
    }
    worst = std::max(worst, norm(subtract(fd, g)) / norm(g));
  }
  return worst;
}

struct Runner {
  const CriterionCallback& callback;
  std::vector<CriterionResult> results;

  template <class Body>
  void run(int id, std::string name, double budget, Body body) {
    CriterionResult r{id, std::move(name), false, {}, 0.0, budget};
    const auto t0 = Clock::now();
    try {
      r.passed = body(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    if (budget > 0.0 && r.seconds >= budget) {
      r.passed = false;
      r.detail += "; over the " + sci(budget) + " s budget";
    }
    if (callback) callback(r);
    results.push_back(std::move(r));
  }
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const CriterionCallback& on_result) {
  Runner runner{on_result, {}};

  runner.run(1, "classic tightness: zig-zag on diag(1,10)", 1.0, [](std::string& detail) {
    const ObjectiveOracle f = make_quadratic(SymMatrix::diagonal(Vector{1.0, 10.0}), Vector{0.0, 0.0});
    SolverOptions opts;
    opts.f_star = 0.0;
    opts.grad_tol = 0.0;
    opts.max_iters = 500;
    const Trajectory traj = run_cauchy(f, Vector{10.0, 1.0}, opts);
    const auto report = check_contraction(traj, 0.0, rate_classic({1.0, 10.0}), "eq3");
    double worst = 0.0;
    for (double r : report.per_step_ratios) worst = std::max(worst, std::abs(r - 81.0 / 121.0));
    detail = std::to_string(report.per_step_ratios.size()) + " ratios above the gap floor, max |ratio - 81/121| = " + sci(worst);
    return report.per_step_ratios.size() >= 20 && worst <= 1e-10;
  });

  runner.run(2, "recovery: rate_main(1, mu/L) == rate_classic(mu, L)", 1.0, [](std::string& detail) {
    // μ and L carry 26-bit mantissas so that μ = κh·L is exact and μ/L == κh.
    // With a rounded μ/L the comparison measures the conditioning
    // 4κ/(1-κ²) of the rate in κh instead of the two formulas; that spread is
    // reported but not gated.
    SplitMix64 rng(2024);
    double worst = 0.0;
    double worst_rounded = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double ell = mantissa26(rng.log_uniform(1e-3, 1e3));
      const double kh = std::min(1.0, mantissa26(rng.log_uniform(1e-4, 1.0)));
      const double mu = kh * ell;
      if (mu / ell != kh) throw std::logic_error("criterion 2: mu/L is not exact");
      worst = std::max(worst, rel(rate_main(1.0, mu / ell), rate_classic({mu, ell})));
      const double mu_r = rng.log_uniform(1e-4, 1.0) * ell;
      worst_rounded = std::max(worst_rounded, rel(rate_main(1.0, mu_r / ell), rate_classic({mu_r, ell})));
    }
    detail = "1000 pairs with exact mu/L, max relative error " + sci(worst) +
             " (rounded mu/L, not gated: " + sci(worst_rounded) + ")";
    return worst <= 1e-14;
  });

  runner.run(3, "proof chain: rho_eps^2 == rate_main(kappa_A, kappa_h)", 0.0, [](std::string& detail) {
    SplitMix64 rng(2025);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double ka = rng.log_uniform(1e-4, 1.0);
      const double kh = rng.log_uniform(1e-4, 1.0);
      const double lam2 = rng.log_uniform(1e-2, 1e2);
      const double r = rho_eps(kappa_eps(lam2 * kh, lam2, 1.0 - ka));
      worst = std::max(worst, rel(r * r, rate_main(ka, kh)));
    }
    detail = "1000 pairs, max relative error " + sci(worst);
    return worst <= 1e-14;
  });

  const Scenario logcosh = parse_scenario(kLogcoshScenario);
  const Scenario psd = parse_scenario(kPsdScenario);
  std::vector<ResultRow> composed_rows;
  std::vector<ResultRow> psd_rows;

  runner.run(4, "composed contraction: ratio <= rate_main + 1e-8", 30.0, [&](std::string& detail) {
    composed_rows = run_scenario(logcosh, kBatch);
    if (auto err = first_failure(composed_rows); !err.empty()) {
      detail = err;
      return false;
    }
    std::size_t violations = 0;
    double worst = -1.0;
    for (const auto& r : composed_rows) {
      if (!r.max_ratio) continue;
      const double excess = *r.max_ratio - *r.bound_eq5;
      worst = std::max(worst, excess);
      if (excess > kRatioSlack) ++violations;
    }
    detail = std::to_string(kBatch) + " composed_logcosh instances, " + std::to_string(violations) +
             " violations, max(ratio - bound) = " + sci(worst);
    return violations == 0;
  });

  runner.run(5, "semidefinite contraction: ratio <= (1 - kappa_pp)^2 + 1e-8, flat subspace fixed", 30.0,
             [&](std::string& detail) {
               psd_rows = run_scenario(psd, kBatch);
               if (auto err = first_failure(psd_rows); !err.empty()) {
                 detail = err;
                 return false;
               }
               std::size_t violations = 0;
               std::size_t drifted = 0;
               double worst = -1.0;
               double drift = 0.0;
               for (const auto& r : psd_rows) {
                 if (r.max_ratio) {
                   const double excess = *r.max_ratio - *r.bound_eq6;
                   worst = std::max(worst, excess);
                   if (excess > kRatioSlack) ++violations;
                 }
                 const Certificate* flat = find(r.reduction, "flat_subspace");
                 if (!flat || !flat->passed) ++drifted;
                 if (flat) drift = std::max(drift, -flat->worst_margin);
               }
               detail = std::to_string(kBatch) + " rank n/2 quadratics, " + std::to_string(violations) +
                        " violations, max(ratio - bound) = " + sci(worst) +
                        ", max kernel drift " + sci(drift);
               return violations == 0 && drifted == 0;
             });

  runner.run(6, "five inequalities on every consecutive pair", 0.0, [&](std::string& detail) {
    std::size_t rows = 0;
    std::size_t failed = 0;
    for (const auto* set : {&composed_rows, &psd_rows})
      for (const auto& r : *set) {
        ++rows;
        if (r.failure != FailureKind::none || r.five_inequalities.size() != kFiveInequalities ||
            !std::all_of(r.five_inequalities.begin(), r.five_inequalities.end(),
                         [](const Certificate& c) { return c.passed; }))
          ++failed;
      }
    detail = std::to_string(rows) + " instances through the composed view, " + std::to_string(failed) +
             " with a failing inequality";
    return rows == 2 * kBatch && failed == 0;
  });

  runner.run(7, "orthogonality and weighted orthogonality <= 10 line_search_tol", 0.0,
             [&](std::string& detail) {
               std::size_t failed = 0;
               double worst = 0.0;
               for (const auto* set : {&composed_rows, &psd_rows})
                 for (const auto& r : *set) {
                   if (r.orthogonality.size() != 2) ++failed;
                   for (const auto& c : r.orthogonality) {
                     if (!c.passed) ++failed;
                     worst = std::max(worst, -c.worst_margin);
                   }
                 }
               // Negative control: halving every step must break both checks.
               std::size_t controls = 0;
               std::size_t caught = 0;
               for (std::size_t k = 0; k < 5; ++k) {
                 const Solved solved = solve_instance(logcosh, generate_instance(logcosh, k));
                 if (solved.trajectory.records.size() < 3) continue;
                 const Trajectory halved = halve_steps(solved.objective(), solved.trajectory);
                 ++controls;
                 if (!check_orthogonality(halved).passed &&
                     !check_weighted_orthogonality(solved.view(), halved).passed)
                   ++caught;
               }
               detail = std::to_string(2 * kBatch) + " instances, max normalized residual " + sci(worst) +
                        ", halved-step control failed " + std::to_string(caught) + "/" +
                        std::to_string(controls);
               return failed == 0 && controls > 0 && caught == controls;
             });

  runner.run(8, "restricted strong convexity and nu_hat >= mu lambda_min(AA^T) - 1e-8", 0.0,
             [&](std::string& detail) {
               std::size_t failed = 0;
               double worst = std::numeric_limits<double>::infinity();
               for (const auto* set : {&composed_rows, &psd_rows})
                 for (const auto& r : *set) {
                   if (r.rsc.empty() || !r.rsc.front().passed) ++failed;
                   if (r.nu_hat && r.nu) {
                     worst = std::min(worst, *r.nu_hat - *r.nu);
                     if (*r.nu_hat < *r.nu - 1e-8) ++failed;
                   }
                 }
               detail = std::to_string(2 * kBatch) + " instances, " + std::to_string(failed) +
                        " failures, min(nu_hat - nu) = " + sci(worst);
               return failed == 0;
             });

  runner.run(9, "reduction: BB^T = Q, value identity, kappa(B^T), unsolvable rejected", 0.0,
             [&](std::string& detail) {
               std::size_t failed = 0;
               for (const auto& r : psd_rows)
                 for (const char* name : {"reduction_factor", "reduction_identity", "reduction_kappa"}) {
                   const Certificate* c = find(r.reduction, name);
                   if (!c || !c->passed) ++failed;
                 }
               std::size_t rejected = 0;
               const std::size_t probes = 10;
               for (std::size_t k = 0; k < probes; ++k) {
                 const Instance inst = generate_instance(psd, k);
                 const ReducedQuadratic r = reduce(*inst.q, inst.c);
                 Vector c = inst.c;
                 for (std::size_t i = 0; i < c.size(); ++i) c[i] += r.kernel_basis(i, 0);
                 try {
                   reduce(*inst.q, c);
                 } catch (const DomainError&) {
                   ++rejected;
                 }
               }
               detail = std::to_string(psd_rows.size()) + " instances, " + std::to_string(failed) +
                        " failed certificates, " + std::to_string(rejected) + "/" +
                        std::to_string(probes) + " kernel-shifted c rejected";
               return psd_rows.size() == kBatch && failed == 0 && rejected == probes;
             });

  runner.run(10, "gradient vs centered finite differences", 0.0, [&](std::string& detail) {
    SplitMix64 rng(10);
    const Instance pd = generate_instance(parse_scenario(kPdScenario), 0);
    const Instance semi = generate_instance(psd, 0);
    const Instance lc = generate_instance(logcosh, 0);
    const Instance cq = generate_instance(
        parse_scenario("family = composed_quadratic\nseed = 13\nn = 4..16\nm = 2..8\nell = 2\n"
                       "kappa_h = 0.05..1\nkappa_a = 0.05..1\n"),
        0);
    const std::pair<const char*, ObjectiveOracle> families[] = {
        {"quadratic_pd", make_quadratic(*pd.q, pd.c)},
        {"quadratic_psd", make_quadratic(*semi.q, semi.c)},
        {"logcosh", lc.composed->h},
        {"rescaled_logcosh", lc.composed->h_tilde},
        {"composed_logcosh", lc.composed->f},
        {"composed_quadratic", cq.composed->f},
    };
    bool ok = true;
    for (const auto& [name, f] : families) {
      const double err = fd_error(f, rng, 2.0);
      detail += std::string(detail.empty() ? "" : ", ") + name + " " + sci(err);
      ok = ok && err <= 1e-5;
    }
    return ok;
  });

  runner.run(11, "conjecture explorer on diag(1,10) (descriptive)", 0.0, [](std::string& detail) {
    const Scenario s = parse_scenario(kDiag110Scenario);
    const ConjectureSummary summary = explore_conjecture(s, 20);
    const double conj = summary.rows.front().bound_conj;
    const double gap = std::abs(summary.max_observed - conj);
    detail = "observed max ratio " + format_double(summary.max_observed) + ", conjectured " +
             format_double(conj) + ", |difference| " + sci(gap) + ", instances above conjecture " +
             std::to_string(summary.exceed_count);
    return gap <= 1e-10;
  });

  return runner.results;
}

std::string format_result(const CriterionResult& r) {
  char time[32];
  std::snprintf(time, sizeof time, "%.3f", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + " (" +
         time + " s): " + r.detail;
}

}  // namespace cauchy
