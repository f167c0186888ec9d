#include "cauchy/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "cauchy/errors.hpp"

namespace cauchy {

namespace {

constexpr std::int64_t kMaxDim = 64;
constexpr int kReductionSamples = 100;

[[noreturn]] void config_error(const std::string& what) { throw ConfigError("scenario: " + what); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out))
    config_error(std::string(key) + ": '" + std::string(v) + "' is not a finite number");
  return out;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    config_error(std::string(key) + ": '" + std::string(v) + "' is not an integer");
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse_real(key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

bool is_range(std::string_view v) { return v.find("..") != std::string_view::npos; }

RealRange parse_real_range(std::string_view key, std::string_view v) {
  const auto dots = v.find("..");
  if (dots == std::string_view::npos) {
    const double x = parse_real(key, v);
    return {x, x};
  }
  return {parse_real(key, v.substr(0, dots)), parse_real(key, v.substr(dots + 2))};
}

IntRange parse_int_range(std::string_view key, std::string_view v) {
  const auto dots = v.find("..");
  if (dots == std::string_view::npos) {
    const auto x = parse_int<std::int64_t>(key, v);
    return {x, x};
  }
  return {parse_int<std::int64_t>(key, v.substr(0, dots)),
          parse_int<std::int64_t>(key, v.substr(dots + 2))};
}

bool parse_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

ScenarioFamily parse_family(std::string_view v) {
  for (auto f : {ScenarioFamily::quadratic_pd, ScenarioFamily::quadratic_psd,
                 ScenarioFamily::composed_quadratic, ScenarioFamily::composed_logcosh})
    if (to_string(f) == v) return f;
  config_error("family: unknown family '" + std::string(v) + "'");
}

bool is_quadratic(ScenarioFamily f) {
  return f == ScenarioFamily::quadratic_pd || f == ScenarioFamily::quadratic_psd;
}

void check_unit_range(const char* key, const RealRange& r) {
  if (!(r.lo > 0.0 && r.lo <= r.hi && r.hi <= 1.0))
    config_error(std::string(key) + " must satisfy 0 < lo <= hi <= 1");
}

std::size_t fixed_n(const Scenario& s) {
  if (s.n.lo != s.n.hi) config_error("an explicit spectrum or x0 needs a fixed n");
  return static_cast<std::size_t>(s.n.lo);
}

Vector random_unit(SplitMix64& rng, std::size_t n, double radius) {
  Vector v(n);
  double nv = 0.0;
  while (nv == 0.0) {
    for (auto& x : v) x = rng.normal();
    nv = norm(v);
  }
  for (auto& x : v) x *= radius / nv;
  return v;
}

Vector start_point(const Scenario& s, SplitMix64& rng, const Matrix& basis, std::size_t n) {
  if (s.x0.empty()) return random_unit(rng, n, s.x0_radius);
  if (!s.x0_eigen) return s.x0;
  return multiply(basis, s.x0);
}

/// λmax = hi, λ_{r-1} = lo, the rest log-uniform in between; zeros after r.
std::vector<double> draw_spectrum(const Scenario& s, SplitMix64& rng, std::size_t n, std::size_t r) {
  if (!s.spectrum.empty()) return s.spectrum;
  std::vector<double> lam(n, 0.0);
  lam[0] = s.spectrum_range.hi;
  if (r >= 2) lam[r - 1] = s.spectrum_range.lo;
  for (std::size_t k = 1; k + 1 < r; ++k)
    lam[k] = rng.log_uniform(s.spectrum_range.lo, s.spectrum_range.hi);
  std::sort(lam.begin(), lam.begin() + static_cast<std::ptrdiff_t>(r), std::greater<>());
  return lam;
}

std::string pass_cell(const std::vector<Certificate>& certs) {
  if (certs.empty()) return {};
  const auto ok = std::count_if(certs.begin(), certs.end(), [](const Certificate& c) { return c.passed; });
  return std::to_string(ok) + "/" + std::to_string(certs.size());
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string_view to_string(ScenarioFamily f) {
  switch (f) {
    case ScenarioFamily::quadratic_pd: return "quadratic_pd";
    case ScenarioFamily::quadratic_psd: return "quadratic_psd";
    case ScenarioFamily::composed_quadratic: return "composed_quadratic";
    case ScenarioFamily::composed_logcosh: return "composed_logcosh";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::set<std::string, std::less<>> seen;
  bool n_set = false;
  bool m_set = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      config_error("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view v = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) config_error("duplicate key '" + key + "'");
    if (v.empty()) config_error(key + ": empty value");

    if (key == "name") {
      if (v.find_first_of(",\"") != std::string_view::npos) config_error("name must not contain ',' or '\"'");
      s.name = std::string(v);
    } else if (key == "family") {
      s.family = parse_family(v);
    } else if (key == "seed") {
      s.seed = parse_int<std::uint64_t>(key, v);
    } else if (key == "n") {
      s.n = parse_int_range(key, v);
      n_set = true;
    } else if (key == "m") {
      s.m = parse_int_range(key, v);
      m_set = true;
    } else if (key == "rank") {
      s.rank = parse_int<std::int64_t>(key, v);
    } else if (key == "spectrum") {
      if (is_range(v)) s.spectrum_range = parse_real_range(key, v);
      else s.spectrum = parse_list(key, v);
    } else if (key == "rotate") {
      s.rotate = parse_bool(key, v);
    } else if (key == "shift") {
      if (v == "zero") s.shift = ShiftKind::zero;
      else if (v == "random") s.shift = ShiftKind::random;
      else config_error("shift: expected zero or random");
    } else if (key == "ell") {
      s.ell = parse_real(key, v);
    } else if (key == "kappa_h") {
      s.kappa_h = parse_real_range(key, v);
    } else if (key == "kappa_a") {
      s.kappa_a = parse_real_range(key, v);
    } else if (key == "sigma") {
      s.sigma = parse_list(key, v);
    } else if (key == "x0") {
      s.x0 = parse_list(key, v);
    } else if (key == "x0_basis") {
      if (v == "eigen") s.x0_eigen = true;
      else if (v == "standard") s.x0_eigen = false;
      else config_error("x0_basis: expected standard or eigen");
    } else if (key == "x0_radius") {
      s.x0_radius = parse_real(key, v);
    } else if (key == "max_iters") {
      s.solver.max_iters = parse_int<int>(key, v);
    } else if (key == "grad_tol") {
      s.solver.grad_tol = parse_real(key, v);
    } else if (key == "gap_tol") {
      s.solver.gap_tol = parse_real(key, v);
    } else if (key == "line_search_tol") {
      s.solver.line_search_tol = parse_real(key, v);
    } else if (key == "output") {
      s.output = std::string(v);
    } else {
      config_error("unknown key '" + key + "'");
    }
  }
  if (!seen.contains("family")) config_error("missing key 'family'");
  if (!seen.contains("seed")) config_error("missing key 'seed' (seeds must be explicit)");
  if (!n_set) {
    if (!is_quadratic(s.family) || s.spectrum.empty()) config_error("missing key 'n'");
    s.n = {static_cast<std::int64_t>(s.spectrum.size()), static_cast<std::int64_t>(s.spectrum.size())};
  }
  if (!m_set && !is_quadratic(s.family)) {
    if (s.sigma.empty()) config_error("missing key 'm'");
    s.m = {static_cast<std::int64_t>(s.sigma.size()), static_cast<std::int64_t>(s.sigma.size())};
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void validate(const Scenario& s) {
  if (s.n.lo < 1 || s.n.hi < s.n.lo || s.n.hi > kMaxDim)
    config_error("n must satisfy 1 <= lo <= hi <= " + std::to_string(kMaxDim));
  if (s.solver.max_iters < 0) config_error("max_iters must be >= 0");
  if (!(s.solver.line_search_tol > 0.0)) config_error("line_search_tol must be positive");
  if (s.solver.grad_tol && !(*s.solver.grad_tol >= 0.0)) config_error("grad_tol must be >= 0");
  if (s.solver.gap_tol && !(*s.solver.gap_tol >= 0.0)) config_error("gap_tol must be >= 0");
  if (!(s.x0_radius > 0.0)) config_error("x0_radius must be positive");
  if (!s.x0.empty() && s.x0.size() != fixed_n(s)) config_error("x0 must have n entries");
  if (s.x0_eigen && s.x0.empty()) config_error("x0_basis = eigen needs an explicit x0");

  if (is_quadratic(s.family)) {
    const bool pd = s.family == ScenarioFamily::quadratic_pd;
    if (!s.spectrum.empty()) {
      if (s.spectrum.size() != fixed_n(s)) config_error("spectrum must have n entries");
      for (double v : s.spectrum) {
        if (v < 0.0) config_error("spectrum: negative eigenvalue " + format_double(v) + " for a PSD family");
        if (pd && v == 0.0) config_error("spectrum: quadratic_pd needs positive eigenvalues");
      }
      if (*std::max_element(s.spectrum.begin(), s.spectrum.end()) == 0.0)
        config_error("spectrum: Q must be nonzero");
    } else if (!(s.spectrum_range.lo > 0.0 && s.spectrum_range.lo <= s.spectrum_range.hi)) {
      config_error("spectrum range must satisfy 0 < lo <= hi");
    }
    if (s.rank) {
      if (pd) config_error("rank applies to quadratic_psd only");
      if (!s.spectrum.empty()) config_error("rank and an explicit spectrum are exclusive");
      if (*s.rank < 1 || *s.rank > s.n.lo) config_error("rank must lie in [1, n]");
    }
    return;
  }

  if (s.m.lo < 1 || s.m.hi < s.m.lo || s.m.lo > s.n.lo)
    config_error("m must satisfy 1 <= lo <= hi and lo <= n");
  if (!(s.ell > 0.0)) config_error("ell must be positive");
  check_unit_range("kappa_h", s.kappa_h);
  if (!s.sigma.empty()) {
    if (s.m.lo != s.m.hi || s.sigma.size() != static_cast<std::size_t>(s.m.lo))
      config_error("sigma must have m entries with m fixed");
    for (double v : s.sigma)
      if (!(v > 0.0)) config_error("sigma: singular values must be positive (full row rank)");
  } else {
    check_unit_range("kappa_a", s.kappa_a);
  }
}

std::uint64_t instance_seed(std::uint64_t scenario_seed, std::size_t index) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  return SplitMix64::mix(scenario_seed ^ SplitMix64::mix(index + kGolden));
}

Matrix random_orthogonal(SplitMix64& rng, std::size_t n) {
  Matrix q(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector v(n);
    double nv = 0.0;
    while (!(nv > 1e-8)) {
      for (auto& x : v) x = rng.normal();
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < k; ++j) {
          double d = 0.0;
          for (std::size_t i = 0; i < n; ++i) d += q(i, j) * v[i];
          for (std::size_t i = 0; i < n; ++i) v[i] -= d * q(i, j);
        }
      nv = norm(v);
    }
    for (std::size_t i = 0; i < n; ++i) q(i, k) = v[i] / nv;
  }
  return q;
}

Instance generate_instance(const Scenario& s, std::size_t index) {
  Instance inst;
  inst.index = index;
  inst.seed = instance_seed(s.seed, index);
  inst.family = s.family;
  SplitMix64 rng(inst.seed);
  const auto n = static_cast<std::size_t>(rng.integer(s.n.lo, s.n.hi));
  inst.n = n;

  if (is_quadratic(s.family)) {
    const std::size_t r = s.family == ScenarioFamily::quadratic_pd
                              ? n
                              : static_cast<std::size_t>(s.rank.value_or(std::max<std::int64_t>(1, static_cast<std::int64_t>(n) / 2)));
    const auto lam = draw_spectrum(s, rng, n, std::min(r, n));
    const Matrix v = s.rotate ? random_orthogonal(rng, n) : Matrix::identity(n);
    Matrix q(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) q(i, j) += v(i, k) * lam[k] * v(j, k);
    inst.q = SymMatrix(q);
    inst.c = Vector(n, 0.0);
    if (s.shift == ShiftKind::random) {
      Vector z(n);
      for (auto& x : z) x = rng.normal();
      inst.c = scale(multiply(inst.q->matrix(), z), -1.0);
    }
    inst.m = static_cast<std::size_t>(std::count_if(lam.begin(), lam.end(), [](double x) { return x > 0.0; }));
    inst.x0 = start_point(s, rng, v, n);
    return inst;
  }

  const std::size_t m = s.sigma.empty()
                            ? static_cast<std::size_t>(rng.integer(s.m.lo, std::min<std::int64_t>(s.m.hi, static_cast<std::int64_t>(n))))
                            : s.sigma.size();
  inst.m = m;
  const double mu = rng.uniform(s.kappa_h.lo, s.kappa_h.hi) * s.ell;
  Vector shift(m, 0.0);
  if (s.shift == ShiftKind::random)
    for (auto& x : shift) x = rng.normal();

  ObjectiveOracle h = [&] {
    if (s.family == ScenarioFamily::composed_quadratic) {
      Vector d(m, s.ell);
      if (m >= 2) d[m - 1] = mu;
      for (std::size_t k = 1; k + 1 < m; ++k) d[k] = rng.uniform(mu, s.ell);
      Vector c(m);
      for (std::size_t k = 0; k < m; ++k) c[k] = -d[k] * shift[k];
      return make_quadratic(SymMatrix::diagonal(d), c);
    }
    if (mu < s.ell) return make_logcosh(ClassParams::make(mu, s.ell), m, shift);
    // μ == L: the log-cosh term vanishes and h is the quadratic L/2||y - shift||².
    return make_quadratic(SymMatrix::identity(m).scaled(s.ell), scale(shift, -s.ell));
  }();

  Vector sigma = s.sigma;
  if (sigma.empty()) {
    const double ka = rng.uniform(s.kappa_a.lo, s.kappa_a.hi);
    sigma.assign(m, 1.0);
    if (m >= 2) sigma[m - 1] = std::sqrt(ka);
    for (std::size_t k = 1; k + 1 < m; ++k) sigma[k] = std::sqrt(rng.uniform(ka, 1.0));
  }
  const Matrix u = s.rotate ? random_orthogonal(rng, m) : Matrix::identity(m);
  const Matrix v = s.rotate ? random_orthogonal(rng, n) : Matrix::identity(n);
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k) a(i, j) += u(i, k) * sigma[k] * v(j, k);
  inst.composed = make_composed(h, a);
  inst.x0 = start_point(s, rng, v, n);
  return inst;
}

Solved solve_instance(const Scenario& s, Instance inst) {
  Solved out;
  if (inst.q) {
    CorollaryResult res = corollary_pipeline(*inst.q, inst.c, inst.x0, s.solver);
    out.trajectory = std::move(res.trajectory);
    out.rates = res.rates;
    out.f_star = res.reduced.f_star;
    out.reduced_view = res.reduced.composed();
    out.reduced = std::move(res.reduced);
    out.quadratic = make_quadratic(*inst.q, inst.c);
  } else {
    const ComposedProblem& p = *inst.composed;
    SolverOptions opts = s.solver;
    opts.f_star = p.f_star;
    out.trajectory = run_cauchy(p.f, inst.x0, opts);
    out.rates = proof_chain(p);
    out.f_star = p.f_star;
  }
  out.instance = std::move(inst);
  return out;
}

std::vector<Certificate> ResultRow::certificates() const {
  std::vector<Certificate> all;
  for (const auto* group : {&contraction, &orthogonality, &five_inequalities, &rsc, &reduction})
    all.insert(all.end(), group->begin(), group->end());
  return all;
}

bool ResultRow::passed() const {
  if (failure != FailureKind::none) return false;
  const auto all = certificates();
  return std::all_of(all.begin(), all.end(), [](const Certificate& c) { return c.passed; });
}

ResultRow evaluate_instance(const Scenario& s, std::size_t index, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.scenario = s.name;
  row.index = index;
  row.seed = instance_seed(s.seed, index);
  try {
    Instance inst = generate_instance(s, index);
    row.n = inst.n;
    row.m = inst.m;
    const Solved solved = solve_instance(s, std::move(inst));
    const Trajectory& traj = solved.trajectory;
    const ComposedProblem& view = solved.view();
    row.iterations = traj.iterations();
    row.stop_reason = traj.stop_reason;
    row.bound_eq3 = solved.rates.rate_classic;
    row.bound_eq5 = solved.rates.rate_main;
    row.bound_eq6 = solved.rates.rate_corollary;
    row.bound_conj = solved.rates.rate_conjectured;
    if (!solved.reduced) row.bound_eq3.reset();  // f = h(Ax) is not strongly convex in general

    const double f_used = solved.f_star - opts.corrupt_fstar;
    std::vector<ContractionReport> reports;
    if (solved.reduced) {
      if (row.bound_eq3) reports.push_back(check_contraction(traj, f_used, *row.bound_eq3, "eq3"));
      reports.push_back(check_contraction(traj, f_used, *row.bound_eq6, "eq6"));
    } else {
      reports.push_back(check_contraction(traj, f_used, *row.bound_eq5, "eq5"));
    }
    for (const auto& r : reports) row.contraction.push_back(to_certificate(r));
    if (!reports.front().too_short) row.max_ratio = reports.front().max_ratio;

    row.orthogonality.push_back(check_orthogonality(traj));
    row.orthogonality.push_back(check_weighted_orthogonality(view, traj));
    const auto five = summarize(check_five_inequalities(view, traj));
    row.five_inequalities.assign(five.begin(), five.end());
    RscReport rsc = check_rsc(view, traj);
    row.rsc.push_back(rsc.certificate);
    row.nu_hat = rsc.nu_hat;
    row.nu = view.nu;
    if (solved.reduced)
      row.reduction = check_reduction(*solved.reduced, *solved.instance.q, solved.instance.c, traj,
                                      kReductionSamples, row.seed ^ 0x5EED);
  } catch (const NumericalError& e) {
    row.failure = FailureKind::numerical;
    row.error = e.what();
  } catch (const Error& e) {
    row.failure = FailureKind::domain;
    row.error = e.what();
  } catch (const std::exception& e) {
    row.failure = FailureKind::other;
    row.error = e.what();
  }
  row.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ResultRow> run_scenario(const Scenario& s, std::size_t count, const RunOptions& opts,
                                    const RowSink& sink) {
  validate(s);
  std::vector<ResultRow> rows(count);
  const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for ordered schedule(dynamic, 1)
  for (std::int64_t i = 0; i < total; ++i) {
    const auto k = static_cast<std::size_t>(i);
    rows[k] = evaluate_instance(s, k, opts);
#pragma omp ordered
    {
      if (sink) sink(rows[k]);
    }
  }
  return rows;
}

std::vector<ResultRow> run_scenario_serial(const Scenario& s, std::size_t count,
                                           const RunOptions& opts, const RowSink& sink) {
  validate(s);
  std::vector<ResultRow> rows;
  rows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    rows.push_back(evaluate_instance(s, k, opts));
    if (sink) sink(rows.back());
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& out, const CsvHeader& header) {
  out << "# generator=" << SplitMix64::kName << " seed=" << header.seed << " seed_override="
      << (header.seed_override ? std::to_string(*header.seed_override) : std::string("none")) << '\n';
  out << "scenario,seed,n,m,iters,max_ratio,bound_eq3,bound_eq5,bound_eq6,bound_conj,"
         "orth_pass,five_ineq_pass,rsc_pass,reduction_pass,wall_ms\n";
}

void write_csv_row(std::ostream& out, const ResultRow& row, bool omit_timing) {
  out << row.scenario << ',' << row.seed << ',';
  if (row.failure != FailureKind::none) {
    out << ",,,,,,,,error,error,error,error,";
  } else {
    out << row.n << ',' << row.m << ',' << row.iterations << ',' << opt_cell(row.max_ratio) << ','
        << opt_cell(row.bound_eq3) << ',' << opt_cell(row.bound_eq5) << ','
        << opt_cell(row.bound_eq6) << ',' << opt_cell(row.bound_conj) << ','
        << pass_cell(row.orthogonality) << ',' << pass_cell(row.five_inequalities) << ','
        << pass_cell(row.rsc) << ',' << pass_cell(row.reduction) << ',';
  }
  if (!omit_timing) out << format_double(std::round(row.wall_ms * 1000.0) / 1000.0);
  out << '\n';
}

ConjectureSummary explore_conjecture(const Scenario& s, std::size_t count) {
  if (!is_quadratic(s.family))
    throw ConfigError("explore-conjecture: needs a quadratic_pd or quadratic_psd scenario");
  validate(s);
  ConjectureSummary summary;
  summary.rows.resize(count);
  std::exception_ptr failure;
  const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < total; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const Solved solved = solve_instance(s, generate_instance(s, k));
      const auto report =
          check_contraction(solved.trajectory, solved.f_star, *solved.rates.rate_corollary, "eq6");
      ConjectureRow& row = summary.rows[k];
      row.index = k;
      row.seed = solved.instance.seed;
      row.n = solved.instance.n;
      row.rank = solved.reduced->m;
      row.iterations = solved.trajectory.iterations();
      row.max_ratio = report.too_short ? 0.0 : report.max_ratio;
      row.bound_eq6 = *solved.rates.rate_corollary;
      row.bound_conj = *solved.rates.rate_conjectured;
      row.spectrum = eigendecompose(*solved.instance.q).eigenvalues;
    } catch (...) {
#pragma omp critical(cauchy_explore_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& row : summary.rows) {
    summary.max_observed = std::max(summary.max_observed, row.max_ratio);
    if (row.max_ratio > row.bound_conj * (1.0 + 1e-9)) ++summary.exceed_count;
    if (row.max_ratio - row.bound_conj > best) {
      best = row.max_ratio - row.bound_conj;
      summary.tightest = row.index;
    }
  }
  return summary;
}

void write_conjecture_csv(std::ostream& out, const Scenario& s, const ConjectureSummary& summary,
                          const CsvHeader& header) {
  out << "# generator=" << SplitMix64::kName << " seed=" << header.seed << " seed_override="
      << (header.seed_override ? std::to_string(*header.seed_override) : std::string("none")) << '\n';
  out << "scenario,seed,n,rank,iters,max_ratio,bound_eq6,bound_conj,spectrum\n";
  for (const auto& row : summary.rows) {
    out << s.name << ',' << row.seed << ',' << row.n << ',' << row.rank << ',' << row.iterations
        << ',' << format_double(row.max_ratio) << ',' << format_double(row.bound_eq6) << ','
        << format_double(row.bound_conj) << ',';
    for (std::size_t k = 0; k < row.spectrum.size(); ++k)
      out << (k ? ";" : "") << format_double(row.spectrum[k]);
    out << '\n';
  }
}

}  // namespace cauchy
