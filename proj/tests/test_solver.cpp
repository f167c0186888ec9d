#include <cmath>

#include "cauchy/errors.hpp"
#include "cauchy/solver.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace cauchy;

namespace {

ObjectiveOracle zigzag() {
  const double d[] = {1.0, 10.0};
  return make_quadratic(SymMatrix::diagonal(d), Vector(2, 0.0));
}

}  // namespace

TEST_CASE("one closed-form step from (10, 1)") {
  const double x0[] = {10.0, 1.0};
  SolverOptions opts;
  opts.max_iters = 1;
  opts.f_star = 0.0;
  const auto t = run_cauchy(zigzag(), x0, opts);
  REQUIRE(t.records.size() == 2);
  CHECK(t.stop_reason == StopReason::max_iters);
  const auto& r1 = t.records[1];
  CHECK(r1.x[0] == doctest::Approx(90.0 / 11.0).epsilon(1e-15));
  CHECK(r1.x[1] == doctest::Approx(-9.0 / 11.0).epsilon(1e-15));
  CHECK(t.records[0].f == 55.0);
  CHECK(r1.f == doctest::Approx(4455.0 / 121.0).epsilon(1e-15));
  CHECK(*r1.gap / *t.records[0].gap == doctest::Approx(81.0 / 121.0).epsilon(1e-14));
  CHECK(t.records[0].gamma.has_value());
  CHECK_FALSE(r1.gamma.has_value());
}

TEST_CASE("stationary start returns a single record") {
  const Vector x0(2, 0.0);
  const auto t = run_cauchy(zigzag(), x0);
  CHECK(t.records.size() == 1);
  CHECK(t.stop_reason == StopReason::gradient_below_tol);
}

TEST_CASE("identity Hessian converges in one step") {
  SplitMix64 rng(1);
  const auto f = make_quadratic(SymMatrix::identity(5), Vector(5, 0.0));
  const auto t = run_cauchy(f, testing::random_vector(rng, 5));
  CHECK(t.iterations() == 1);
  CHECK(t.stop_reason == StopReason::gradient_below_tol);
}

TEST_CASE("gap stopping and monotone decrease") {
  const double x0[] = {10.0, 1.0};
  SolverOptions opts;
  opts.f_star = 0.0;
  opts.gap_tol = 1e-6;
  const auto t = run_cauchy(zigzag(), x0, opts);
  CHECK(t.stop_reason == StopReason::gap_below_tol);
  CHECK(*t.records.back().gap <= 1e-6);
  for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
    CHECK(t.records[i + 1].f < t.records[i].f);
    CHECK(t.records[i].index == i);
  }
}

TEST_CASE("geometric decrease on strongly convex quadratics obeys the classic rate") {
  SplitMix64 rng(77);
  for (int k = 0; k < 10; ++k) {
    const auto q = testing::random_psd(rng, 6, 6);
    const auto f = make_quadratic(q, Vector(6, 0.0));
    const auto p = *f.class_params();
    const double bound = std::pow((p.ell - p.mu) / (p.ell + p.mu), 2);
    SolverOptions opts;
    opts.f_star = 0.0;
    opts.gap_tol = 1e-10;
    const auto t = run_cauchy(f, testing::random_vector(rng, 6), opts);
    for (std::size_t i = 0; i + 1 < t.records.size(); ++i)
      CHECK(t.records[i + 1].f / t.records[i].f <= bound + 1e-9);
  }
}

TEST_CASE("general path: orthogonality, determinism, x_{i+1} = x_i - γ g_i") {
  SplitMix64 rng(31);
  const auto h = make_logcosh(ClassParams::make(1.0, 8.0), 3, testing::random_vector(rng, 3));
  const auto p = make_composed(h, testing::random_matrix(rng, 3, 6));
  const Vector x0 = testing::random_vector(rng, 6);
  SolverOptions opts;
  opts.f_star = p.f_star;
  opts.gap_tol = 1e-9;
  const auto a = run_cauchy(p.f, x0, opts);
  const auto b = run_cauchy(p.f, x0, opts);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].x == b.records[i].x);
    CHECK(a.records[i].f == b.records[i].f);
  }
  for (std::size_t i = 0; i + 1 < a.records.size(); ++i) {
    const auto& r = a.records[i];
    CHECK(a.records[i + 1].x == axpy(r.x, -*r.gamma, r.g));
    const double ip = std::abs(dot(a.records[i + 1].g, r.g)) /
                      (norm(a.records[i + 1].g) * norm(r.g));
    CHECK(ip <= 10 * a.line_search_tol);
  }
}

TEST_CASE("solver errors") {
  const Vector wrong(3, 1.0);
  CHECK_THROWS_AS(run_cauchy(zigzag(), wrong), DomainError);
}

TEST_CASE("y_space_view") {
  SplitMix64 rng(41);
  const auto h = make_logcosh(ClassParams::make(1.0, 3.0), 3, testing::random_vector(rng, 3));
  const auto p_id = make_composed(h, Matrix::identity(3));
  const auto t = run_cauchy(p_id.f, testing::random_vector(rng, 3), {.max_iters = 5});
  const auto view = y_space_view(t, p_id);
  for (std::size_t i = 0; i < view.size(); ++i)
    CHECK(testing::max_abs_diff(view[i].y, t.records[i].x) <= 1e-15);

  const auto p = make_composed(h, Matrix::from_rows({{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 1}}));
  SolverOptions opts;
  opts.max_iters = 30;
  const auto t2 = run_cauchy(p.f, testing::random_vector(rng, 4), opts);
  const auto v2 = y_space_view(t2, p);
  for (std::size_t i = 0; i < v2.size(); ++i)
    CHECK(std::abs(v2[i].h_value - t2.records[i].f) <= 1e-12 * std::max(1.0, std::abs(t2.records[i].f)));
  for (std::size_t i = 0; i + 1 < v2.size(); ++i) {
    const Vector dy = subtract(v2[i + 1].y, v2[i].y);
    CHECK(std::abs(dot(v2[i + 1].g, dy)) <= 10 * t2.line_search_tol * norm(v2[i].g) * norm(dy) + 1e-300);
  }
  CHECK_THROWS_AS(y_space_view(t, p), DomainError);
}

TEST_CASE("rounding noise ends a general run with precision_limit, never an error") {
  SplitMix64 rng(31);
  for (int k = 0; k < 4; ++k) {
    const auto h = make_logcosh(ClassParams::make(1.0, 20.0), 4, testing::random_vector(rng, 4));
    const auto p = make_composed(h, testing::random_matrix(rng, 4, 8));
    SolverOptions opts;
    opts.f_star = p.f_star;
    const auto t = run_cauchy(p.f, testing::random_vector(rng, 8), opts);
    CHECK(t.stop_reason == StopReason::precision_limit);
    CHECK(*t.records.back().gap <= 1e-4 * *t.records.front().gap);
    for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
      const auto& g0 = t.records[i].g;
      const auto& g1 = t.records[i + 1].g;
      CHECK(std::abs(dot(g0, g1)) <= t.line_search_tol * norm(g0) * norm(g1));
    }
  }
}

TEST_CASE("closed-form path stops at the noise floor when x* is far from the origin") {
  const double d[] = {1.0, 10.0};
  const double c[] = {-1e3, -2e3};
  const auto f = make_quadratic(SymMatrix::diagonal(d), c);
  const double x0[] = {0.0, 0.0};
  const auto t = run_cauchy(f, x0, {.grad_tol = 1e-300});
  CHECK(t.stop_reason == StopReason::precision_limit);
  CHECK(t.iterations() >= 20);
  CHECK(to_string(t.stop_reason) == "precision_limit");
}
