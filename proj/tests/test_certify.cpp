#include <cmath>

#include "cauchy/certify.hpp"
#include "cauchy/errors.hpp"
#include "cauchy/rates.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cauchy;

namespace {

ObjectiveOracle zigzag() {
  const double d[] = {1.0, 10.0};
  return make_quadratic(SymMatrix::diagonal(d), Vector(2, 0.0));
}

struct Instance {
  ComposedProblem problem;
  Trajectory traj;
};

Instance logcosh_instance(SplitMix64& rng, double kappa_a, double kappa_h, std::size_t m,
                          std::size_t n, double ls_tol = kDefaultLineSearchTol) {
  Vector sigma(m, 1.0);
  sigma.back() = std::sqrt(kappa_a);
  for (std::size_t k = 1; k + 1 < m; ++k) sigma[k] = std::sqrt(rng.uniform(kappa_a, 1.0));
  const double ell = 4.0;
  const auto h = make_logcosh(ClassParams::make(kappa_h * ell, ell), m, testing::random_vector(rng, m));
  auto problem = make_composed(h, testing::with_singular_values(rng, n, sigma));
  SolverOptions opts;
  opts.f_star = problem.f_star;
  opts.line_search_tol = ls_tol;
  auto traj = run_cauchy(problem.f, testing::random_vector(rng, n, 3.0), opts);
  return {std::move(problem), std::move(traj)};
}

bool all_pass(const std::array<Certificate, kFiveInequalities>& certs) {
  for (const auto& c : certs)
    if (!c.passed) return false;
  return true;
}

}  // namespace

TEST_CASE("certificate builder keeps the worst sample and its tolerance") {
  CertificateBuilder b("demo", 1e-3);
  b.add(0, 0.5, 1e-3);
  b.add(1, -1e-4, 1e-3);
  b.add(2, 0.1, 1e-3);
  auto c = b.finish();
  CHECK(c.passed);
  CHECK(c.worst_index == 1);
  CHECK(c.worst_margin == -1e-4);
  CHECK(c.passed == (c.worst_margin >= -c.tolerance_used));
  b.add(3, -1.0, 1e-3);
  c = b.finish();
  CHECK_FALSE(c.passed);
  CHECK(c.worst_index == 3);
  CHECK(c.passed == (c.worst_margin >= -c.tolerance_used));
}

TEST_CASE("zig-zag contraction is tight at 81/121") {
  const double x0[] = {10.0, 1.0};
  const auto t = run_cauchy(zigzag(), x0, {.f_star = 0.0});
  const auto r = check_contraction(t, 0.0, rate_classic({1.0, 10.0}), "eq3");
  CHECK(r.passed);
  CHECK_FALSE(r.too_short);
  CHECK(r.per_step_ratios.size() >= 20);
  for (double ratio : r.per_step_ratios) CHECK(std::abs(ratio - 81.0 / 121.0) <= 1e-12);
  const auto c = to_certificate(r);
  CHECK(c.check_name == "contraction_eq3");
  CHECK(c.passed);
  CHECK(c.passed == (c.worst_margin >= -c.tolerance_used));
}

TEST_CASE("eigenvector start converges in one step with ratio 0") {
  const double x0[] = {0.0, 3.0};
  const auto t = run_cauchy(zigzag(), x0, {.f_star = 0.0});
  REQUIRE(t.iterations() == 1);
  const auto r = check_contraction(t, 0.0, rate_classic({1.0, 10.0}), "eq3");
  REQUIRE(r.per_step_ratios.size() == 1);
  CHECK(r.per_step_ratios[0] == 0.0);
  CHECK(r.passed);
}

TEST_CASE("converged trajectory is too short but not a failure") {
  const Vector x0(2, 0.0);
  const auto t = run_cauchy(zigzag(), x0);
  const auto r = check_contraction(t, 0.0, 0.5, "eq3");
  CHECK(r.too_short);
  CHECK(r.passed);
  CHECK(check_orthogonality(t).passed);
}

TEST_CASE("wrong f* breaks contraction") {
  const double x0[] = {10.0, 1.0};
  const auto t = run_cauchy(zigzag(), x0, {.f_star = 0.0});
  CHECK_FALSE(check_contraction(t, -1e-3, rate_classic({1.0, 10.0}), "eq3").passed);
}

TEST_CASE("orthogonality on the closed-form path and its halved-step control") {
  const double x0[] = {10.0, 1.0};
  const auto t = run_cauchy(zigzag(), x0, {.max_iters = 1});
  // g0 = (10, 10), g1 = (90/11, -90/11).
  CHECK(std::abs(dot(t.records[0].g, t.records[1].g)) <= 1e-12);
  CHECK(check_orthogonality(t).passed);

  const auto full = run_cauchy(zigzag(), x0, {.f_star = 0.0});
  CHECK(check_orthogonality(full).passed);
  const auto half = testing::halve_steps(zigzag(), full);
  const auto c = check_orthogonality(half);
  CHECK_FALSE(c.passed);
  CHECK(c.worst_margin < -c.tolerance_used);
}

TEST_CASE("single-record trajectory passes orthogonality vacuously") {
  Trajectory t;
  t.records.push_back({0, {1.0}, 0.5, {1.0}, std::nullopt, std::nullopt});
  CHECK(check_orthogonality(t).passed);
}

TEST_CASE("five inequalities on composed log-cosh instances") {
  SplitMix64 rng(2024);
  for (int k = 0; k < 6; ++k) {
    const double ka = rng.uniform(0.05, 1.0);
    const double kh = rng.uniform(0.05, 0.95);
    const auto inst = logcosh_instance(rng, ka, kh, 3, 5);
    const auto pairs = check_five_inequalities(inst.problem, inst.traj);
    CHECK(pairs.size() + 1 == inst.traj.records.size());
    const auto certs = summarize(pairs);
    CHECK(all_pass(certs));
    CHECK(certs[4].check_name == "five_ineq_5");
    for (const auto& c : certs) CHECK(c.passed == (c.worst_margin >= -c.tolerance_used));

    // Soundness ordering: five inequalities passing implies the eq5 contraction.
    const auto rates = proof_chain(inst.problem);
    const auto contraction = check_contraction(inst.traj, inst.problem.f_star, rates.rate_main, "eq5");
    CHECK(contraction.passed);
  }
}

TEST_CASE("inequality 5 slack for kappa(A) = 0.25 matches a direct evaluation") {
  SplitMix64 rng(8);
  const double sigma[] = {1.0, 0.5};
  const auto h = make_quadratic(SymMatrix::diagonal(std::vector<double>{1.0, 3.0}),
                                testing::random_vector(rng, 2));
  const auto p = make_composed(h, testing::with_singular_values(rng, 4, sigma));
  CHECK(p.epsilon == doctest::Approx(0.75).epsilon(1e-12));
  const auto t = run_cauchy(p.f, testing::random_vector(rng, 4), {.f_star = p.f_star});
  const auto view = y_space_view(t, p);
  const auto pairs = check_five_inequalities(p, t);
  REQUIRE(!pairs.empty());
  for (const auto& pair : pairs) {
    const auto& g0 = view[pair.index].g;
    const auto& g1 = view[pair.index + 1].g;
    const double expected = 0.75 * norm(g0) * norm(g1) - dot(g0, g1);
    CHECK(std::abs(pair.margin[4] - expected) <= 1e-12 * norm(g0) * norm(g1) + 1e-300);
    CHECK(pair.margin[4] >= -pair.tolerance[4]);
  }
}

TEST_CASE("A = I: inequality 5 is orthogonality and weighted orthogonality matches") {
  SplitMix64 rng(9);
  const auto h = make_logcosh(ClassParams::make(1.0, 5.0), 4, testing::random_vector(rng, 4));
  const auto p = make_composed(h, Matrix::identity(4));
  CHECK(p.epsilon == 0.0);
  const auto t = run_cauchy(p.f, testing::random_vector(rng, 4), {.f_star = p.f_star});
  CHECK(all_pass(summarize(check_five_inequalities(p, t))));
  const auto w = check_weighted_orthogonality(p, t);
  const auto o = check_orthogonality(t);
  CHECK(w.passed);
  CHECK(o.passed);
  CHECK(w.worst_margin == doctest::Approx(o.worst_margin).epsilon(1e-9).scale(1e-18));
}

TEST_CASE("wrong epsilon breaks inequality 5") {
  SplitMix64 rng(10);
  const auto inst = logcosh_instance(rng, 0.25, 0.3, 3, 6);
  const auto view = y_space_view(inst.traj, inst.problem);
  const auto certs = summarize(check_five_inequalities(inst.problem, view, -0.5));
  CHECK_FALSE(certs[4].passed);
  CHECK(certs[0].passed);
}

TEST_CASE("five inequalities refuse epsilon == 1") {
  const auto h = make_quadratic(SymMatrix::identity(1), Vector(1, 0.0));
  const auto p = make_composed(h, Matrix::from_rows({{1.0, 2.0}}));
  Trajectory t;
  CHECK(p.epsilon == doctest::Approx(0.0).scale(1e-15));
  CHECK_NOTHROW(check_five_inequalities(p, t));
  ComposedProblem bad = p;
  bad.epsilon = 1.0;
  CHECK_THROWS_AS(check_five_inequalities(bad, t), DomainError);
}

TEST_CASE("weighted orthogonality tracks the line-search tolerance") {
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    SplitMix64 rng(11);
    const auto inst = logcosh_instance(rng, 0.3, 0.2, 3, 5, tol);
    const auto w = check_weighted_orthogonality(inst.problem, inst.traj);
    CHECK(w.passed);
    CHECK(w.tolerance_used == doctest::Approx(10 * tol));
    CHECK(check_orthogonality(inst.traj).passed);
  }
  SplitMix64 rng(11);
  const auto inst = logcosh_instance(rng, 0.3, 0.2, 3, 5);
  const auto half = testing::halve_steps(inst.problem.f, inst.traj);
  CHECK_FALSE(check_weighted_orthogonality(inst.problem, half).passed);
  CHECK_FALSE(check_orthogonality(half).passed);
}

TEST_CASE("RSC by hand: f = (x1² + 4 x2²)/2 on R³") {
  const auto h = make_quadratic(SymMatrix::identity(2), Vector(2, 0.0));
  const auto p = make_composed(h, Matrix::from_rows({{1, 0, 0}, {0, 2, 0}}));
  CHECK(p.nu == doctest::Approx(1.0).epsilon(1e-12));
  const auto t = testing::replay(p.f, {Vector{1.0, 1.0, 5.0}, Vector{0.0, 0.0, 5.0}});
  const auto r = check_rsc(p, t);
  CHECK(r.certificate.passed);
  REQUIRE(r.nu_hat.has_value());
  CHECK(*r.nu_hat == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(r.certificate.worst_index == 1);  // on the minimizer set: both sides 0
  CHECK(r.certificate.worst_margin == doctest::Approx(0.0).scale(1e-15));
}

TEST_CASE("RSC on log-cosh runs: nu_hat >= nu, overstated nu fails") {
  SplitMix64 rng(12);
  for (int k = 0; k < 4; ++k) {
    const auto inst = logcosh_instance(rng, rng.uniform(0.1, 1.0), rng.uniform(0.1, 0.9), 3, 6);
    const auto r = check_rsc(inst.problem, inst.traj);
    CHECK(r.certificate.passed);
    REQUIRE(r.nu_hat.has_value());
    CHECK(*r.nu_hat >= inst.problem.nu - 1e-8);
    ComposedProblem bad = inst.problem;
    bad.nu = 2.0 * *r.nu_hat + 1.0;
    CHECK_FALSE(check_rsc(bad, inst.traj).certificate.passed);
  }
}

TEST_CASE("certificates are bitwise reproducible") {
  SplitMix64 a(13), b(13);
  const auto i1 = logcosh_instance(a, 0.4, 0.5, 2, 4);
  const auto i2 = logcosh_instance(b, 0.4, 0.5, 2, 4);
  const auto c1 = summarize(check_five_inequalities(i1.problem, i1.traj));
  const auto c2 = summarize(check_five_inequalities(i2.problem, i2.traj));
  for (std::size_t k = 0; k < kFiveInequalities; ++k) {
    CHECK(c1[k].worst_margin == c2[k].worst_margin);
    CHECK(c1[k].worst_index == c2[k].worst_index);
  }
  CHECK(check_rsc(i1.problem, i1.traj).certificate.worst_margin ==
        check_rsc(i2.problem, i2.traj).certificate.worst_margin);
}
