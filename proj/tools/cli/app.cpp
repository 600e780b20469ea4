#include "app.hpp"

#include <CLI11.hpp>

#include <ostream>

#include "commands.hpp"
#include "dfdr/error.hpp"

namespace dfdr::cli {
namespace {

std::filesystem::path absolute_path(const std::string& p) {
  return std::filesystem::absolute(p).lexically_normal();
}

// Count-table flags shared by analyze and tune.
struct SchemaFlags {
  std::string test = "fet";
  double size = 1.0;
  int group_reps = 0;
  std::int64_t min_total = 0;
  std::int64_t max_total = INT64_MAX;
  std::string filter_scope;
  std::string convention = "minlike";

  void attach(CLI::App& cmd) {
    cmd.add_option("--test", test, "Exact test: fet (successes, trials per group), bin, ent")
        ->check(CLI::IsMember({"fet", "bin", "ent"}))
        ->capture_default_str();
    cmd.add_option("--size", size, "ent: negative binomial size per replicate (1 / dispersion)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--group-reps", group_reps,
                   "ent: replicate columns per group (default: half the count columns)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--min-total", min_total, "Drop rows whose total is below this")
        ->capture_default_str();
    cmd.add_option("--max-total", max_total, "Drop rows whose total exceeds this");
    cmd.add_option("--filter-scope", filter_scope,
                   "Apply totals per group or to the row (default: per_group for fet)")
        ->check(CLI::IsMember({"per_group", "row"}));
    cmd.add_option("--convention", convention, "Two-sided p-value: minlike or doubling")
        ->check(CLI::IsMember({"minlike", "doubling"}))
        ->capture_default_str();
  }

  CountSchema schema() const {
    CountSchema s;
    s.test = parse_test_kind(test);
    s.nb_size = size;
    if (group_reps > 0) s.reps = group_reps;
    s.min_total = min_total;
    s.max_total = max_total;
    if (!filter_scope.empty()) {
      s.filter_scope = filter_scope == "row" ? FilterScope::row : FilterScope::per_group;
    }
    s.convention = parse_convention(convention);
    return s;
  }
};

int code_for(std::string_view category) {
  if (category == "parse") return exit_code::parse;
  if (category == "config") return exit_code::config;
  if (category == "domain") return exit_code::domain;
  if (category == "io") return exit_code::io;
  return exit_code::internal;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-p-value FDR analysis and simulation", "dfdr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Test a count table and threshold at alpha");
  std::string a_counts, a_out;
  AnalyzeOptions a;
  SchemaFlags a_schema;
  analyze->add_option("counts", a_counts, "Count table (CSV or TSV with header)")->required();
  a_schema.attach(*analyze);
  analyze->add_option("--lambda", a.lambda, "Tuning parameter lambda in [0, 1)")
      ->capture_default_str();
  analyze->add_option("--epsilon", a.epsilon, "Shared weight epsilon in [0, 1]")
      ->capture_default_str();
  std::vector<double> a_alphas;
  analyze->add_option("--alpha", a_alphas, "FDR level (repeatable; default 0.05)")
      ->delimiter(',');
  analyze->add_option("--out", a_out, "Directory for features.csv, report.json, manifest");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a simulation scenario");
  std::string s_config, s_out;
  std::size_t s_reps = 0;
  std::uint64_t s_seed = 0;
  unsigned s_threads = 1;
  std::vector<double> s_alphas;
  simulate->add_option("config", s_config, "Scenario file (key = value)")->required();
  simulate->add_option("--out", s_out, "Output directory")->required();
  auto* s_reps_opt = simulate->add_option("--reps", s_reps, "Override replications");
  auto* s_seed_opt = simulate->add_option("--seed", s_seed, "Override seed");
  auto* s_alpha_opt =
      simulate->add_option("--alpha", s_alphas, "Override FDR levels (repeatable)")->delimiter(',');
  auto* s_threads_opt = simulate->add_option("--threads", s_threads, "Worker threads")
                            ->check(CLI::PositiveNumber);

  // tune
  auto* tune = app.add_subcommand("tune", "Bootstrap choice of (lambda, epsilon)");
  std::string t_counts, t_out;
  TuneOptions t;
  SchemaFlags t_schema;
  tune->add_option("counts", t_counts, "Count table (CSV or TSV with header)")->required();
  t_schema.attach(*tune);
  tune->add_option("--lambda-grid", t.lambda_grid, "List a,b,c or range start:stop:step")
      ->capture_default_str();
  tune->add_option("--epsilon-grid", t.epsilon_grid, "List a,b,c or range start:stop:step")
      ->capture_default_str();
  tune->add_option("--bootstrap", t.bootstraps, "Bootstrap resamples B")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tune->add_option("--seed", t.seed, "Seed for the resamples")->capture_default_str();
  tune->add_option("--threads", t.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tune->add_option("--out", t_out, "Directory for tune.json and manifest");

  // rerun
  auto* rerun = app.add_subcommand("rerun", "Replay a run from its manifest.json");
  std::string r_manifest, r_out;
  rerun->add_option("manifest", r_manifest, "manifest.json of an earlier run")->required();
  rerun->add_option("--out", r_out, "Output directory")->required();

  try {
    // CLI11 consumes arguments in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return exit_code::ok;
    }
    err << "error[usage]: " << e.what() << '\n';
    return exit_code::usage;
  }

  if (analyze->parsed()) {
    a.counts = absolute_path(a_counts);
    a.schema = a_schema.schema();
    if (!a_alphas.empty()) a.alphas = a_alphas;
    if (!a_out.empty()) a.out = a_out;
    cmd_analyze(a, args, out);
  } else if (simulate->parsed()) {
    SimulateOptions s;
    s.config = absolute_path(s_config);
    s.out = s_out;
    if (s_reps_opt->count()) s.reps = s_reps;
    if (s_seed_opt->count()) s.seed = s_seed;
    if (s_alpha_opt->count()) s.alphas = s_alphas;
    if (s_threads_opt->count()) s.threads = s_threads;
    cmd_simulate(s, args, out);
  } else if (tune->parsed()) {
    t.counts = absolute_path(t_counts);
    t.schema = t_schema.schema();
    if (!t_out.empty()) t.out = t_out;
    cmd_tune(t, args, out);
  } else if (rerun->parsed()) {
    cmd_rerun(r_manifest, r_out, out);
  }
  return exit_code::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << "error[" << e.category() << "]: " << e.what() << '\n';
    return code_for(e.category());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
    return exit_code::internal;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace dfdr::cli
