#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "dfdr/dfdr.hpp"

namespace dfdr::cli {
namespace {

using nlohmann::json;

json schema_json(const CountSchema& s) {
  json j{{"test", to_string(s.test)},
         {"nb_size", s.nb_size},
         {"min_total", s.min_total},
         {"convention", to_string(s.convention)}};
  j["reps"] = s.reps ? json(*s.reps) : json(nullptr);
  j["max_total"] = s.max_total == INT64_MAX ? json(nullptr) : json(s.max_total);
  j["filter_scope"] = s.filter_scope
                          ? json(*s.filter_scope == FilterScope::row ? "row" : "per_group")
                          : json(nullptr);
  return j;
}

CountSchema schema_from_json(const json& j) {
  CountSchema s;
  s.test = parse_test_kind(j.at("test").get<std::string>());
  s.nb_size = j.at("nb_size").get<double>();
  s.min_total = j.at("min_total").get<std::int64_t>();
  s.convention = parse_convention(j.at("convention").get<std::string>());
  if (!j.at("reps").is_null()) s.reps = j.at("reps").get<int>();
  if (!j.at("max_total").is_null()) s.max_total = j.at("max_total").get<std::int64_t>();
  if (!j.at("filter_scope").is_null()) {
    s.filter_scope = j.at("filter_scope").get<std::string>() == "row" ? FilterScope::row
                                                                      : FilterScope::per_group;
  }
  return s;
}

template <class F>
auto from_json_guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest parameters: ") + e.what());
  }
}

std::filesystem::path absolute_path(const std::filesystem::path& p) {
  return std::filesystem::absolute(p).lexically_normal();
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RunManifest base_manifest(std::string command, const std::vector<std::string>& argv) {
  RunManifest m;
  m.command = std::move(command);
  m.argv = argv;
  m.version = tool_version();
  m.timestamp = utc_timestamp();
  return m;
}

Study load_study(const std::filesystem::path& counts, const CountSchema& schema,
                 std::size_t* dropped = nullptr, std::vector<std::string>* ids = nullptr) {
  const auto table = ingest_counts_file(counts.string(), schema);
  if (table.rows.empty()) {
    throw DomainError("no features left after filtering (m = 0) in " + counts.string());
  }
  if (dropped) *dropped = table.dropped;
  if (ids) {
    ids->clear();
    for (const auto& row : table.rows) ids->push_back(row.id);
  }
  return make_study(run_tests(table, schema));
}

// One line of the method table.
struct TableRow {
  std::string method;
  std::string lambda = "-";
  std::string epsilon = "-";
  double pi0 = 1.0;
  double alpha = 0.0;
  double t_hat = 0.0;
  double alpha_hat = 0.0;
  std::size_t rejections = 0;
};

// Estimated FDR at the threshold: pi0 t m / (R v 1), capped at 1 where the
// estimator is.
double estimated_fdr(const ThresholdResult& r, std::size_t m) {
  if (r.fdr_at_t) return *r.fdr_at_t;
  const double denom = static_cast<double>(std::max<std::size_t>(r.rejections, 1));
  return std::min(1.0, r.pi0 * r.t_alpha * static_cast<double>(m) / denom);
}

void print_table(std::ostream& out, const std::vector<TableRow>& rows) {
  out << std::left << std::setw(13) << "method" << std::setw(14) << "(lambda,eps)"
      << std::setw(8) << "alpha" << std::setw(16) << "pi0" << std::setw(16) << "t_hat"
      << std::setw(16) << "alpha_hat" << "R\n";
  for (const auto& r : rows) {
    const std::string le =
        r.lambda == "-" ? "-" : "(" + r.lambda + "," + r.epsilon + ")";
    out << std::left << std::setw(13) << r.method << std::setw(14) << le << std::setw(8)
        << format_number(r.alpha) << std::setw(16) << format_number(r.pi0) << std::setw(16)
        << format_number(r.t_hat) << std::setw(16) << format_number(r.alpha_hat)
        << r.rejections << '\n';
  }
}

std::string join_support(const std::vector<double>& support) {
  std::string s;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (k) s += ';';
    s += format_number(support[k]);
  }
  return s;
}

}  // namespace

// ---- option JSON ---------------------------------------------------------

json AnalyzeOptions::to_json() const {
  json j{{"counts", counts.string()}, {"schema", schema_json(schema)},
         {"lambda", lambda},          {"epsilon", epsilon},
         {"alphas", alphas}};
  j["out"] = out ? json(out->string()) : json(nullptr);
  return j;
}

AnalyzeOptions AnalyzeOptions::from_json(const json& j) {
  return from_json_guarded([&] {
    AnalyzeOptions o;
    o.counts = j.at("counts").get<std::string>();
    o.schema = schema_from_json(j.at("schema"));
    o.lambda = j.at("lambda").get<double>();
    o.epsilon = j.at("epsilon").get<double>();
    o.alphas = j.at("alphas").get<std::vector<double>>();
    return o;
  });
}

json SimulateOptions::to_json() const {
  json j{{"config", config.string()}, {"out", out.string()}};
  j["reps"] = reps ? json(*reps) : json(nullptr);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["alphas"] = alphas ? json(*alphas) : json(nullptr);
  j["threads"] = threads ? json(*threads) : json(nullptr);
  return j;
}

SimulateOptions SimulateOptions::from_json(const json& j) {
  return from_json_guarded([&] {
    SimulateOptions o;
    o.config = j.at("config").get<std::string>();
    if (!j.at("reps").is_null()) o.reps = j.at("reps").get<std::size_t>();
    if (!j.at("seed").is_null()) o.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("alphas").is_null()) o.alphas = j.at("alphas").get<std::vector<double>>();
    if (!j.at("threads").is_null()) o.threads = j.at("threads").get<unsigned>();
    return o;
  });
}

json TuneOptions::to_json() const {
  json j{{"counts", counts.string()},   {"schema", schema_json(schema)},
         {"lambda_grid", lambda_grid},  {"epsilon_grid", epsilon_grid},
         {"bootstraps", bootstraps},    {"seed", seed},
         {"threads", threads}};
  j["out"] = out ? json(out->string()) : json(nullptr);
  return j;
}

TuneOptions TuneOptions::from_json(const json& j) {
  return from_json_guarded([&] {
    TuneOptions o;
    o.counts = j.at("counts").get<std::string>();
    o.schema = schema_from_json(j.at("schema"));
    o.lambda_grid = j.at("lambda_grid").get<std::string>();
    o.epsilon_grid = j.at("epsilon_grid").get<std::string>();
    o.bootstraps = j.at("bootstraps").get<std::size_t>();
    o.seed = j.at("seed").get<std::uint64_t>();
    o.threads = j.at("threads").get<unsigned>();
    return o;
  });
}

// ---- analyze -------------------------------------------------------------

void cmd_analyze(const AnalyzeOptions& opt, const std::vector<std::string>& argv,
                 std::ostream& out) {
  if (opt.alphas.empty()) throw ConfigError("at least one --alpha is required");
  std::size_t dropped = 0;
  std::vector<std::string> ids;
  const Study study = load_study(opt.counts, opt.schema, &dropped, &ids);
  const auto p = study.pvalues();
  const std::size_t m = study.size();
  const RejectionProcess proc(p);

  const auto generalized = FdrEstimator::generalized(study, opt.lambda, opt.epsilon);
  const auto storey = FdrEstimator::storey(study, opt.lambda);
  const auto benjamini = benjamini_pi0(study);
  const std::vector<Pi0Estimate> estimates{storey_pi0(study, opt.lambda), generalized.source,
                                           pounds_tilde_pi0(study), pounds_hat_pi0(study),
                                           benjamini};

  std::vector<TableRow> rows;
  json thresholds = json::array();
  for (double alpha : opt.alphas) {
    const std::vector<ThresholdResult> results{
        threshold(generalized, proc, alpha), threshold(storey, proc, alpha),
        bh_procedure(p, alpha), adaptive_bh(p, alpha, benjamini)};
    for (const auto& r : results) {
      TableRow row;
      row.method = r.method;
      if (r.lambda) row.lambda = format_number(*r.lambda);
      if (r.epsilon) {
        row.epsilon = r.epsilon->is_shared() ? format_number(r.epsilon->at(0)) : "vector";
      } else if (r.lambda) {
        row.epsilon = "0";  // Storey is the eps = 0 member of the family
      }
      row.pi0 = r.pi0;
      row.alpha = alpha;
      row.t_hat = r.t_alpha;
      row.alpha_hat = estimated_fdr(r, m);
      row.rejections = r.rejections;
      rows.push_back(row);
      auto j = dfdr::to_json(r);
      j["alpha_hat"] = row.alpha_hat;
      thresholds.push_back(std::move(j));
    }
  }

  out << "m = " << m << " features (" << dropped << " filtered out), test "
      << to_string(opt.schema.test) << ", convention " << to_string(opt.schema.convention)
      << '\n';
  print_table(out, rows);

  if (!opt.out) return;
  ensure_dir(*opt.out);
  {
    auto f = open_output(*opt.out / "features.csv");
    f << "id,pvalue,support_size,support\n";
    for (std::size_t i = 0; i < m; ++i) {
      const auto& prof = study.profiles[i];
      f << ids[i] << ',' << format_number(prof.pvalue) << ',' << prof.support.size() << ','
        << join_support(prof.support) << '\n';
    }
    if (!f) throw IoError("write failed: features.csv");
  }
  json report{{"m", m}, {"dropped", dropped}, {"schema", schema_json(opt.schema)}};
  report["pi0"] = json::array();
  for (const auto& e : estimates) report["pi0"].push_back(dfdr::to_json(e));
  report["thresholds"] = std::move(thresholds);
  write_json(*opt.out / "report.json", report);

  auto manifest = base_manifest("analyze", argv);
  manifest.params = opt.to_json();
  manifest.inputs.push_back(digest_input(opt.counts));
  write_manifest(*opt.out, manifest);
}

// ---- simulate ------------------------------------------------------------

void cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv,
                  std::ostream& out) {
  ScenarioSpec spec = load_scenario(opt.config);
  if (opt.reps) spec.reps = *opt.reps;
  if (opt.seed) spec.seed = *opt.seed;
  if (opt.alphas) spec.alphas = *opt.alphas;
  if (opt.threads) spec.threads = *opt.threads;
  spec.validate();

  const auto summary = run_replications(spec);
  ensure_dir(opt.out);
  {
    auto f = open_output(opt.out / "replications.csv");
    write_replications_csv(f, summary);
    if (!f) throw IoError("write failed: replications.csv");
  }
  write_json(opt.out / "aggregate.json", aggregate_json(summary));

  auto manifest = base_manifest("simulate", argv);
  manifest.params = opt.to_json();
  manifest.params["scenario"] = dfdr::to_json(spec);
  manifest.seed = spec.seed;
  manifest.inputs.push_back(digest_input(opt.config));
  write_manifest(opt.out, manifest);

  out << "simulated " << spec.reps << " replications of " << to_string(spec.kind)
      << " (m = " << spec.m << ", pi0 = " << format_number(spec.pi0) << ") into "
      << opt.out.string() << '\n';
  for (Method method : spec.methods) {
    const auto ex = moments_of(summary.excess(method));
    out << "  " << std::left << std::setw(13) << to_string(method) << "mean excess "
        << format_number(ex.mean) << " (se " << format_number(ex.se) << ")\n";
  }
}

// ---- tune ----------------------------------------------------------------

void cmd_tune(const TuneOptions& opt, const std::vector<std::string>& argv,
              std::ostream& out) {
  auto grid = TuningGrid::product(parse_grid_axis(opt.lambda_grid, "lambda grid"),
                                  parse_grid_axis(opt.epsilon_grid, "epsilon grid"));
  grid.bootstraps = opt.bootstraps;
  grid.seed = opt.seed;
  grid.threads = opt.threads;
  const Study study = load_study(opt.counts, opt.schema);
  const auto result = bootstrap_tune(study, grid);

  out << "m = " << study.size() << ", " << result.points.size() << " grid points, B = "
      << grid.bootstraps << '\n'
      << "chosen (lambda, eps) = (" << format_number(result.chosen.lambda) << ", "
      << format_number(result.chosen.epsilon) << "), pi0G = "
      << format_number(result.estimate.value) << '\n';

  if (!opt.out) return;
  ensure_dir(*opt.out);
  auto report = dfdr::to_json(result);
  report["m"] = study.size();
  report["bootstraps"] = grid.bootstraps;
  report["seed"] = grid.seed;
  write_json(*opt.out / "tune.json", report);

  auto manifest = base_manifest("tune", argv);
  manifest.params = opt.to_json();
  manifest.seed = opt.seed;
  manifest.inputs.push_back(digest_input(opt.counts));
  write_manifest(*opt.out, manifest);
}

// ---- rerun ---------------------------------------------------------------

void cmd_rerun(const std::filesystem::path& manifest_path,
               const std::filesystem::path& out_dir, std::ostream& out) {
  const auto manifest = read_manifest(manifest_path);
  verify_inputs(manifest);
  std::vector<std::string> argv{"rerun", absolute_path(manifest_path).string(), "--out",
                                out_dir.string()};
  if (manifest.command == "analyze") {
    auto opt = AnalyzeOptions::from_json(manifest.params);
    opt.out = out_dir;
    cmd_analyze(opt, argv, out);
  } else if (manifest.command == "simulate") {
    auto opt = SimulateOptions::from_json(manifest.params);
    opt.out = out_dir;
    cmd_simulate(opt, argv, out);
  } else if (manifest.command == "tune") {
    auto opt = TuneOptions::from_json(manifest.params);
    opt.out = out_dir;
    cmd_tune(opt, argv, out);
  } else {
    throw ConfigError("manifest has unknown command '" + manifest.command + "'");
  }
}

}  // namespace dfdr::cli
