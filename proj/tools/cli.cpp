#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "cauchy/acceptance.hpp"
#include "cauchy/errors.hpp"
#include "cauchy/experiment.hpp"
#include "json.hpp"

namespace cauchy::cli {

namespace {

using nlohmann::json;

std::uint64_t parse_seed_override(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("SEED_OVERRIDE: '" + text + "' is not an unsigned 64-bit integer");
  return v;
}

struct Loaded {
  Scenario scenario;
  CsvHeader header;
};

Loaded load(const std::string& path, const std::optional<std::string>& seed_override) {
  Loaded l{load_scenario(path), {}};
  l.header.seed = l.scenario.seed;
  if (seed_override) {
    l.header.seed_override = parse_seed_override(*seed_override);
    l.scenario.seed = *l.header.seed_override;
  }
  return l;
}

/// "-" selects `fallback`; anything else is opened as a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ConfigError("cannot open '" + path + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string output_path(const std::string& flag, const Scenario& s) {
  if (!flag.empty()) return flag;
  return s.output.empty() ? "-" : s.output;
}

json to_json(const Certificate& c) {
  return {{"name", c.check_name},
          {"passed", c.passed},
          {"worst_margin", c.worst_margin},
          {"worst_index", c.worst_index},
          {"tolerance_used", c.tolerance_used}};
}

std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::none: return "none";
    case FailureKind::domain: return "domain";
    case FailureKind::numerical: return "numerical";
    case FailureKind::other: return "other";
  }
  return "unknown";
}

void report_row(std::ostream& err, const ResultRow& r, std::size_t count) {
  if (r.passed()) return;
  err << "instance " << r.index << "/" << count << " seed " << r.seed << ": ";
  if (r.failure != FailureKind::none) {
    err << to_string(r.failure) << " failure: " << r.error << '\n';
    return;
  }
  err << "failed";
  for (const auto& c : r.certificates())
    if (!c.passed) err << ' ' << c.check_name << " (margin " << format_double(c.worst_margin) << " at " << c.worst_index << ')';
  err << '\n';
}

struct RunArgs {
  std::string scenario;
  std::size_t count = 1;
  std::string out;
  bool omit_timing = false;
  double corrupt_fstar = 0.0;
  bool serial = false;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err,
            const std::optional<std::string>& seed_override) {
  const Loaded l = load(a.scenario, seed_override);
  Sink sink(output_path(a.out, l.scenario), out);
  write_csv_header(*sink, l.header);
  const auto on_row = [&](const ResultRow& r) {
    write_csv_row(*sink, r, a.omit_timing);
    report_row(err, r, a.count);
  };
  const RunOptions opts{a.corrupt_fstar};
  const auto rows = a.serial ? run_scenario_serial(l.scenario, a.count, opts, on_row)
                             : run_scenario(l.scenario, a.count, opts, on_row);
  const auto passed = std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return r.passed(); });
  err << l.scenario.name << ": " << passed << "/" << rows.size() << " instances passed every certificate\n";
  return exit_code(rows);
}

int cmd_certify(const std::string& path, std::size_t index, const std::string& report, std::ostream& out,
                std::ostream& err, const std::optional<std::string>& seed_override) {
  const Loaded l = load(path, seed_override);
  const ResultRow row = evaluate_instance(l.scenario, index);
  json doc = {{"scenario", row.scenario},
              {"index", row.index},
              {"seed", row.seed},
              {"generator", SplitMix64::kName},
              {"seed_override", l.header.seed_override ? json(*l.header.seed_override) : json(nullptr)},
              {"n", row.n},
              {"m", row.m},
              {"iterations", row.iterations},
              {"stop_reason", to_string(row.stop_reason)},
              {"failure", to_string(row.failure)},
              {"passed", row.passed()}};
  if (!row.error.empty()) doc["error"] = row.error;
  const auto put = [&](const char* key, const std::optional<double>& v) {
    doc[key] = v ? json(*v) : json(nullptr);
  };
  put("max_ratio", row.max_ratio);
  put("bound_eq3", row.bound_eq3);
  put("bound_eq5", row.bound_eq5);
  put("bound_eq6", row.bound_eq6);
  put("bound_conj", row.bound_conj);
  put("nu", row.nu);
  put("nu_hat", row.nu_hat);
  json certs = json::array();
  for (const auto& c : row.certificates()) certs.push_back(to_json(c));
  doc["certificates"] = std::move(certs);

  Sink sink(report.empty() ? "-" : report, out);
  *sink << doc.dump(2) << '\n';
  report_row(err, row, index + 1);
  return exit_code({row});
}

int cmd_explore(const std::string& path, std::size_t count, const std::string& csv_out, std::ostream& out,
                std::ostream& err, const std::optional<std::string>& seed_override) {
  const Loaded l = load(path, seed_override);
  const ConjectureSummary summary = explore_conjecture(l.scenario, count);
  Sink sink(output_path(csv_out, l.scenario), out);
  write_conjecture_csv(*sink, l.scenario, summary, l.header);

  json doc = {{"scenario", l.scenario.name},
              {"instances", summary.rows.size()},
              {"max_observed_ratio", summary.max_observed},
              {"instances_above_conjecture", summary.exceed_count}};
  if (!summary.rows.empty()) {
    const ConjectureRow& t = summary.rows[summary.tightest];
    doc["tightest"] = {{"index", t.index},     {"seed", t.seed},
                       {"max_ratio", t.max_ratio}, {"bound_conj", t.bound_conj},
                       {"bound_eq6", t.bound_eq6}, {"spectrum", t.spectrum}};
  }
  // The summary shares stdout only when the CSV went to a file.
  (sink.to_file() ? out : err) << doc.dump(2) << '\n';
  return kOk;
}

int cmd_selftest(std::ostream& out) {
  const auto results = run_acceptance([&](const CriterionResult& r) { out << format_result(r) << std::endl; });
  const bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
  return ok ? kOk : kCertificateFailed;
}

}  // namespace

int exit_code(const std::vector<ResultRow>& rows) {
  if (std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.failure == FailureKind::numerical; }))
    return kNumerical;
  if (std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.passed(); })) return kOk;
  return kCertificateFailed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& seed_override) {
  CLI::App app{"Cauchy algorithm (exact line search) with per-iteration rate certificates"};
  app.name("cauchycert");
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Solve and certify a batch of seeded instances; CSV out");
  run_cmd->add_option("scenario", run_args.scenario, "Scenario file")->required();
  run_cmd->add_option("--count", run_args.count, "Number of instances")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_args.out, "CSV path, '-' for stdout (default: the scenario's output key)");
  run_cmd->add_flag("--omit-timing", run_args.omit_timing, "Leave wall_ms empty for byte-identical output");
  run_cmd->add_option("--corrupt-fstar", run_args.corrupt_fstar,
                      "Debug: certify contraction against f* minus this value");
  run_cmd->add_flag("--serial", run_args.serial, "Use the single-threaded runner");

  std::string certify_path;
  std::size_t certify_index = 0;
  std::string certify_report;
  auto* certify_cmd = app.add_subcommand("certify", "Certify one instance; JSON report");
  certify_cmd->add_option("scenario", certify_path, "Scenario file")->required();
  certify_cmd->add_option("--index", certify_index, "Instance index")->required();
  certify_cmd->add_option("--report", certify_report, "JSON path, '-' for stdout (default)");

  std::string explore_path;
  std::size_t explore_count = 1;
  std::string explore_out;
  auto* explore_cmd = app.add_subcommand(
      "explore-conjecture", "Observed ratios against the conjectured rate on quadratics (descriptive only)");
  explore_cmd->add_option("scenario", explore_path, "Scenario file")->required();
  explore_cmd->add_option("--count", explore_count, "Number of instances")->required()->check(CLI::PositiveNumber);
  explore_cmd->add_option("--out", explore_out, "CSV path, '-' for stdout");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_args, out, err, seed_override);
    if (certify_cmd->parsed())
      return cmd_certify(certify_path, certify_index, certify_report, out, err, seed_override);
    if (explore_cmd->parsed())
      return cmd_explore(explore_path, explore_count, explore_out, out, err, seed_override);
    if (selftest_cmd->parsed()) return cmd_selftest(out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace cauchy::cli
