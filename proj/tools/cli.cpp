#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cheb/speclang.hpp"
#include "cheb/suites.hpp"

namespace cheb::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kReproTol = 1e-12;

/// Usage problems found after CLI11 has accepted the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunFlags {
  std::size_t trials = 1000;
  std::string dims = "2..6";
  std::string seed;
  std::string out;
  std::string format = "json";
  std::string form;
  bool no_hypotheses = false;
};

std::uint64_t parse_seed(const std::string &text, const char *origin) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size())
    throw UsageError(std::string("invalid seed '") + text + "' from " + origin);
  return v;
}

/// --seed, then CHEB_SEED, then 42.
std::uint64_t resolve_seed(const RunFlags &f) {
  if (!f.seed.empty())
    return parse_seed(f.seed, "--seed");
  if (const char *env = std::getenv("CHEB_SEED"); env && *env)
    return parse_seed(env, "CHEB_SEED");
  return kDefaultSeed;
}

int parse_dim(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || v < 1 || v > kMaxDim)
    throw UsageError("invalid dimension '" + std::string(s) + "' (expected 1..16)");
  return v;
}

/// "a..b" or a single dimension.
std::vector<int> parse_dims(const std::string &text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos)
    return {parse_dim(text)};
  const int lo = parse_dim(std::string_view(text).substr(0, dots));
  const int hi = parse_dim(std::string_view(text).substr(dots + 2));
  if (lo > hi)
    throw UsageError("empty dimension range '" + text + "'");
  std::vector<int> d;
  for (int n = lo; n <= hi; ++n)
    d.push_back(n);
  return d;
}

void write_out(const std::string &path, const std::string &content) {
  try {
    write_file_atomic(path, content);
  } catch (const std::exception &e) {
    throw IoError(e.what());
  }
}

std::string fmt(const char *spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string pretty_table(const std::vector<CheckReport> &reports) {
  std::vector<const CheckReport *> order;
  for (const auto &r : reports)
    order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const CheckReport *a, const CheckReport *b) { return a->suite_id < b->suite_id; });
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %7s %13s %13s %6s %8s %8s  %s\n", "suite", "trials",
                "min_margin", "max_margin", "viol", "printed", "time_s", "status");
  os << line;
  for (const CheckReport *r : order) {
    const std::string printed =
        r->printed_form_violations ? std::to_string(*r->printed_form_violations) : "-";
    std::snprintf(line, sizeof line, "%-22s %7zu %13.4e %13.4e %6zu %8s %8.3f  %s\n",
                  r->suite_id.c_str(), r->trials, r->min_margin, r->max_margin,
                  r->violations.size(), printed.c_str(), r->elapsed_s,
                  r->passed() ? "PASS" : "FAIL");
    os << line;
  }
  return os.str();
}

std::string csv_all(const std::vector<CheckReport> &reports) {
  std::ostringstream os;
  os.precision(17);
  os << "suite_id,trial,dim,margin\n";
  for (const auto &r : reports)
    for (const auto &t : r.records)
      os << r.suite_id << ',' << t.trial << ',' << t.dim << ',' << t.margin << '\n';
  return os.str();
}

/// Renders one or more reports in the requested format.
std::string render(const std::vector<CheckReport> &reports, const std::string &format,
                   const nlohmann::json &config, bool single) {
  if (format == "pretty")
    return pretty_table(reports);
  if (format == "csv")
    return single ? to_csv(reports.front()) : csv_all(reports);
  if (single)
    return to_json(reports.front()).dump(2) + "\n";
  nlohmann::json j;
  j["config"] = config;
  j["reports"] = nlohmann::json::array();
  bool passed = true;
  for (const auto &r : reports) {
    j["reports"].push_back(to_json(r));
    passed = passed && r.passed();
  }
  j["passed"] = passed;
  return j.dump(2) + "\n";
}

/// Report to --out (summary on `out`) or to `out` directly.
void emit(const std::vector<CheckReport> &reports, const RunFlags &f, const nlohmann::json &config,
          bool single, std::ostream &out) {
  const std::string body = render(reports, f.format, config, single);
  if (!f.out.empty()) {
    write_out(f.out, body);
    if (f.format != "pretty")
      out << pretty_table(reports);
    return;
  }
  out << body;
}

void add_run_flags(CLI::App *app, RunFlags &f) {
  app->add_option("--trials", f.trials, "Randomized trials per suite")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--dims", f.dims, "Dimensions, 'a..b' or a single n")->capture_default_str();
  app->add_option("--seed", f.seed, "Master seed (default: $CHEB_SEED, then 42)");
  app->add_option("--out", f.out, "Write the report to this path (atomically)");
  app->add_option("--format", f.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}))
      ->capture_default_str();
}

nlohmann::json base_config(const std::string &command, const RunFlags &f, std::uint64_t seed,
                           const std::vector<int> &dims) {
  return {{"command", command}, {"trials", f.trials}, {"dims", dims},
          {"seed", seed},       {"format", f.format}};
}

std::vector<std::string> selected_suites(const std::string &target) {
  std::vector<std::string> ids;
  if (target == "all") {
    for (const auto &s : suite_registry())
      ids.push_back(s.id);
  } else {
    suite_info(target); // throws UnknownName
    ids.push_back(target);
  }
  return ids;
}

int cmd_check(const std::string &target, const RunFlags &f, const std::string &command,
              std::ostream &out) {
  const auto ids = selected_suites(target);
  const std::uint64_t seed = resolve_seed(f);
  const auto dims = parse_dims(f.dims);
  RunOptions opt;
  if (!f.form.empty())
    opt.form = parse_form(f.form);
  opt.check_hypotheses = !f.no_hypotheses;
  std::vector<CheckReport> reports;
  for (const auto &id : ids) {
    reports.push_back(run_suite(id, f.trials, dims, seed, opt));
    reports.back().config["command"] = command;
    reports.back().config["format"] = f.format;
  }
  nlohmann::json config = base_config(command, f, seed, dims);
  config["target"] = target;
  emit(reports, f, config, target != "all", out);
  const bool passed =
      std::all_of(reports.begin(), reports.end(), [](const CheckReport &r) { return r.passed(); });
  return passed ? Exit::ok : Exit::violation;
}

struct Repro {
  CounterexampleValues values;
  double equality_residual = 0.0;
  std::vector<std::string> failures;
};

Repro compute_repro(double normalization) {
  Repro r;
  r.values = counterexample_values(normalization);
  r.equality_residual = singular_equality_residual();
  const double lhs_exact = 13.0 / 72.0;
  const double rhs_exact = 5.0 / 12.0;
  const double margin_exact = -17.0 / 72.0;
  if (std::abs(r.values.lhs - lhs_exact) > kReproTol)
    r.failures.push_back("lhs differs from 13/72 by " + fmt("%.3e", r.values.lhs - lhs_exact));
  if (std::abs(r.values.rhs - rhs_exact) > kReproTol)
    r.failures.push_back("rhs differs from 5/12 by " + fmt("%.3e", r.values.rhs - rhs_exact));
  if (!(r.values.lhs < r.values.rhs))
    r.failures.push_back("lhs is not below rhs");
  if (std::abs(r.values.margin - margin_exact) > kReproTol)
    r.failures.push_back("margin differs from -17/72 by " + fmt("%.3e", r.values.margin - margin_exact));
  if (std::abs(r.values.margin - (r.values.lhs - r.values.rhs)) > kReproTol)
    r.failures.push_back("margin is not lhs - rhs");
  if (r.equality_residual > kReproTol)
    r.failures.push_back("equality case A = B = I has |margin| " + fmt("%.3e", r.equality_residual));
  return r;
}

int cmd_repro(const std::string &format, double normalization, const std::string &out_path,
              std::ostream &out, std::ostream &err) {
  const Repro r = compute_repro(normalization);
  std::string body;
  if (format == "json") {
    nlohmann::json j = {{"lhs", r.values.lhs},
                        {"rhs", r.values.rhs},
                        {"margin", r.values.margin},
                        {"exact", {{"lhs", "13/72"}, {"rhs", "5/12"}, {"margin", "-17/72"}}},
                        {"equality_residual", r.equality_residual},
                        {"passed", r.failures.empty()},
                        {"failures", r.failures}};
    body = j.dump(2) + "\n";
  } else {
    char line[160];
    std::snprintf(line, sizeof line, "lhs=%.12f rhs=%.12f margin=%.12f\n", r.values.lhs,
                  r.values.rhs, r.values.margin);
    body = line;
    body += "equality A=B=I: max |margin| = " + fmt("%.3e", r.equality_residual) + "\n";
  }
  if (out_path.empty())
    out << body;
  else
    write_out(out_path, body);
  for (const auto &f : r.failures)
    err << "repro: " << f << "\n";
  return r.failures.empty() ? Exit::ok : Exit::violation;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cmd_spec(const std::string &path, const std::string &suite, bool canonical, const RunFlags &f,
             std::ostream &out) {
  const std::string text = read_file(path);
  spec::InequalitySpec s;
  try {
    s = spec::parse_spec(text);
  } catch (const spec::SpecError &e) {
    throw UsageError(path + ":" + e.what());
  }
  if (canonical) {
    out << spec::format_spec(s) << "\n";
    return Exit::ok;
  }
  spec::SpecSource src;
  if (!suite.empty()) {
    suite_info(suite);
    src.suite_id = suite;
  }
  const std::uint64_t seed = resolve_seed(f);
  const auto dims = parse_dims(f.dims);
  CheckReport r = spec::check_spec(s, f.trials, dims, seed, src);
  r.config["command"] = "spec";
  r.config["file"] = path;
  r.config["format"] = f.format;
  emit({r}, f, r.config, true, out);
  return r.passed() ? Exit::ok : Exit::violation;
}

int cmd_list(const std::string &format, std::ostream &out) {
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &s : suite_registry())
      j.push_back({{"id", s.id}, {"statement", s.statement}, {"form", to_string(scored_form(s.id))}});
    out << j.dump(2) << "\n";
    return Exit::ok;
  }
  for (const auto &s : suite_registry()) {
    char line[64];
    std::snprintf(line, sizeof line, "%-22s %-8s ", s.id.c_str(), to_string(scored_form(s.id)).c_str());
    out << line << s.statement << "\n";
  }
  return Exit::ok;
}

} // namespace

int run(int argc, char **argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Randomized checks of Chebyshev-type operator inequalities"};
  app.require_subcommand(1);

  std::string list_format = "pretty";
  auto *list = app.add_subcommand("list", "List the registered suites");
  list->add_option("--format", list_format)->check(CLI::IsMember({"json", "pretty"}));

  RunFlags check_flags;
  std::string target;
  auto *check = app.add_subcommand("check", "Run one suite or all of them");
  check->add_option("suite", target, "Suite id or 'all'")->required();
  add_run_flags(check, check_flags);
  check->add_option("--form", check_flags.form, "Score the printed or the proved statement")
      ->check(CLI::IsMember({"printed", "proved"}));
  check->add_flag("--no-hypotheses", check_flags.no_hypotheses,
                  "Skip hypothesis checks (counterexample exploration)");

  std::string repro_format = "pretty";
  std::string repro_out;
  double normalization = 0.5;
  auto *repro = app.add_subcommand("repro", "Reproduce the counterexample and equality case");
  repro->add_option("--format", repro_format)->check(CLI::IsMember({"json", "pretty"}));
  repro->add_option("--out", repro_out);
  // Negative-control hook: evaluates the counterexample with tau = c * tr.
  repro->add_option("--state-normalization", normalization)->group("");

  RunFlags spec_flags;
  std::string spec_path;
  std::string spec_suite;
  bool canonical = false;
  auto *specc = app.add_subcommand("spec", "Check an .ineq file");
  specc->add_option("file", spec_path, ".ineq file")->required();
  add_run_flags(specc, spec_flags);
  specc->add_option("--suite", spec_suite, "Evaluate on this suite's instances");
  specc->add_flag("--canonical", canonical, "Print the canonical form and exit");

  RunFlags all_flags;
  auto *all = app.add_subcommand("all", "repro followed by every suite");
  add_run_flags(all, all_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*list)
      return cmd_list(list_format, out);
    if (*check)
      return cmd_check(target, check_flags, "check", out);
    if (*repro)
      return cmd_repro(repro_format, normalization, repro_out, out, err);
    if (*specc)
      return cmd_spec(spec_path, spec_suite, canonical, spec_flags, out);
    if (*all) {
      const int r = cmd_repro("pretty", 0.5, "", out, err);
      const int c = cmd_check("all", all_flags, "all", out);
      return std::max(r, c);
    }
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return Exit::io;
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const UnknownName &e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  }
  return Exit::usage;
}

int run(int argc, char **argv) { return run(argc, argv, std::cout, std::cerr); }

} // namespace cheb::cli
