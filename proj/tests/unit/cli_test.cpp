#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "app.hpp"
#include "config.hpp"
#include "dfdr/dfdr.hpp"
#include "manifest.hpp"

namespace dfdr::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("dfdr_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& body) {
    const auto path = dir_ / name;
    std::ofstream(path) << body;
    return path;
  }

  int run(std::vector<std::string> args) {
    out_.str({});
    err_.str({});
    return run_cli(args, out_, err_);
  }

  // Fisher-format table: id, successes and trials for each group.
  fs::path counts_file(std::size_t rows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> trials(1, 12);
    std::ostringstream body;
    body << "id,m1,n1,m2,n2\n";
    for (std::size_t i = 0; i < rows; ++i) {
      const int n1 = trials(rng), n2 = trials(rng);
      const double p1 = i % 3 == 0 ? 0.9 : 0.4, p2 = 0.4;
      std::binomial_distribution<int> b1(n1, p1), b2(n2, p2);
      body << "f" << i << ',' << b1(rng) << ',' << n1 << ',' << b2(rng) << ',' << n2 << '\n';
    }
    return write("counts.csv", body.str());
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  static nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

constexpr const char* kSmoke =
    "# two tiny replications\n"
    "kind = poisson_bin\n"
    "m = 50\n"
    "pi0 = 0.8\n"
    "reps = 2\n"
    "alpha = 0.05, 0.1\n"
    "seed = 99\n";

TEST_F(CliTest, SimulateSmokeWritesAllFiles) {
  const auto config = write("smoke.cfg", kSmoke);
  ASSERT_EQ(run({"simulate", config.string(), "--out", (dir_ / "run").string()}), 0)
      << err_.str();
  for (const char* name : {"replications.csv", "aggregate.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / name)) << name;
  }
  std::istringstream csv(slurp(dir_ / "run" / "replications.csv"));
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  EXPECT_EQ(line, "rep,method,alpha,pi0,excess,threshold,rejections,false_discoveries,fdp");
  while (std::getline(csv, line)) ++rows;
  const auto methods = ScenarioSpec::defaults(ScenarioKind::poisson_bin).methods.size();
  EXPECT_EQ(rows, 2 * methods * 2);

  const auto manifest = read_json(dir_ / "run" / "manifest.json");
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["seed"], 99);
  ASSERT_EQ(manifest["inputs"].size(), 1u);
  EXPECT_EQ(manifest["inputs"][0]["sha256"], sha256_file(config));
  EXPECT_FALSE(manifest["version"].get<std::string>().empty());
}

TEST_F(CliTest, RerunFromManifestIsByteIdentical) {
  const auto config = write("smoke.cfg", kSmoke);
  ASSERT_EQ(run({"simulate", config.string(), "--out", (dir_ / "a").string(), "--threads", "2"}),
            0)
      << err_.str();
  ASSERT_EQ(run({"rerun", (dir_ / "a" / "manifest.json").string(), "--out",
                 (dir_ / "b").string()}),
            0)
      << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "replications.csv"), slurp(dir_ / "b" / "replications.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "aggregate.json"), slurp(dir_ / "b" / "aggregate.json"));
}

TEST_F(CliTest, RerunRefusesChangedInput) {
  const auto config = write("smoke.cfg", kSmoke);
  ASSERT_EQ(run({"simulate", config.string(), "--out", (dir_ / "a").string()}), 0);
  write("smoke.cfg", std::string(kSmoke) + "lambda = 0.4\n");
  EXPECT_EQ(run({"rerun", (dir_ / "a" / "manifest.json").string(), "--out",
                 (dir_ / "b").string()}),
            exit_code::config);
  EXPECT_NE(err_.str().find("changed"), std::string::npos);
}

TEST_F(CliTest, OverridesApply) {
  const auto config = write("smoke.cfg", kSmoke);
  ASSERT_EQ(run({"simulate", config.string(), "--out", (dir_ / "run").string(), "--reps", "3",
                 "--alpha", "0.05"}),
            0)
      << err_.str();
  std::istringstream csv(slurp(dir_ / "run" / "replications.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  const auto methods = ScenarioSpec::defaults(ScenarioKind::poisson_bin).methods.size();
  EXPECT_EQ(rows, 1 + 3 * methods);
}

TEST_F(CliTest, UnknownKindNamesValidKinds) {
  const auto config = write("bad.cfg", "kind = gamma_gamma\nm = 10\n");
  EXPECT_EQ(run({"simulate", config.string(), "--out", (dir_ / "run").string()}),
            exit_code::config);
  const auto msg = err_.str();
  EXPECT_EQ(msg.rfind("error[config]:", 0), 0u) << msg;
  for (const char* kind : {"poisson_bin", "binomial_fet", "negbinom_ent"}) {
    EXPECT_NE(msg.find(kind), std::string::npos) << msg;
  }
  EXPECT_EQ(std::count(msg.begin(), msg.end(), '\n'), 1);
}

TEST_F(CliTest, UnknownConfigKeyIsNamed) {
  const auto config = write("bad.cfg", "kind = poisson_bin\nlamda = 0.5\n");
  EXPECT_EQ(run({"simulate", config.string(), "--out", (dir_ / "run").string()}),
            exit_code::config);
  EXPECT_NE(err_.str().find("'lamda'"), std::string::npos) << err_.str();
}

TEST_F(CliTest, DuplicateAndMalformedConfigLines) {
  std::istringstream dup("kind = poisson_bin\nm = 10\nm = 20\n");
  EXPECT_THROW(parse_scenario(dup), ConfigError);
  std::istringstream no_eq("kind = poisson_bin\nm 10\n");
  EXPECT_THROW(parse_scenario(no_eq), ParseError);
  std::istringstream bad_number("kind = poisson_bin\npi0 = 0.8x\n");
  EXPECT_THROW(parse_scenario(bad_number), ConfigError);
  std::istringstream no_kind("m = 10\n");
  EXPECT_THROW(parse_scenario(no_kind), ConfigError);
}

TEST_F(CliTest, ConfigOverridesDefaults) {
  std::istringstream in(
      "kind = binomial_fet\nm = 40\nmethods = generalized, bh\ntheta2_rule = cap\n"
      "theta2_cap = 0.95\nrho_fixed = 3\nconvention = doubling\n");
  const auto spec = parse_scenario(in);
  EXPECT_EQ(spec.kind, ScenarioKind::binomial_fet);
  EXPECT_EQ(spec.m, 40u);
  EXPECT_EQ(spec.methods, (std::vector<Method>{Method::generalized, Method::bh}));
  EXPECT_EQ(spec.theta2_rule, Theta2Rule::cap);
  EXPECT_EQ(spec.theta2_cap, 0.95);
  ASSERT_TRUE(spec.rho_fixed.has_value());
  EXPECT_EQ(*spec.rho_fixed, 3.0);
  EXPECT_EQ(spec.convention, PValueConvention::doubling);
  EXPECT_EQ(spec.theta_min, ScenarioSpec::defaults(ScenarioKind::binomial_fet).theta_min);
}

TEST_F(CliTest, Theta1FileResolvesAgainstConfigDir) {
  write("theta.txt", "# per-feature means\n0.5\n2\n\n4.5\n");
  const auto config = write("nb.cfg", "kind = negbinom_ent\ntheta1_file = theta.txt\n");
  const auto spec = load_scenario(config);
  EXPECT_EQ(spec.theta1_values, (std::vector<double>{0.5, 2.0, 4.5}));
}

TEST_F(CliTest, GridAxisParsing) {
  EXPECT_EQ(parse_grid_axis("0.2, 0.5", "g"), (std::vector<double>{0.2, 0.5}));
  const auto range = parse_grid_axis("0:0.95:0.05", "g");
  ASSERT_EQ(range.size(), 20u);
  EXPECT_NEAR(range.back(), 0.95, 1e-12);
  EXPECT_THROW(parse_grid_axis("0:1", "g"), ConfigError);
  EXPECT_THROW(parse_grid_axis("0:1:0", "g"), ConfigError);
  EXPECT_THROW(parse_grid_axis("1:0:0.1", "g"), ConfigError);
  EXPECT_THROW(parse_grid_axis("a:b:c", "g"), ConfigError);
  EXPECT_THROW(parse_grid_axis("0.1,,0.2", "g"), ConfigError);
}

TEST_F(CliTest, AnalyzeWritesTableAndReports) {
  const auto counts = counts_file(120, 1);
  ASSERT_EQ(run({"analyze", counts.string(), "--alpha", "0.05", "--alpha", "0.1", "--out",
                 (dir_ / "an").string()}),
            0)
      << err_.str();
  const auto table = out_.str();
  for (const char* method : {"generalized", "storey", "bh", "adaptive_bh", "(0.5,1)", "(0.5,0)"}) {
    EXPECT_NE(table.find(method), std::string::npos) << method;
  }
  const auto report = read_json(dir_ / "an" / "report.json");
  EXPECT_EQ(report["m"], 120);
  EXPECT_EQ(report["thresholds"].size(), 8u);
  EXPECT_EQ(report["pi0"].size(), 5u);
  const auto features = slurp(dir_ / "an" / "features.csv");
  EXPECT_EQ(std::count(features.begin(), features.end(), '\n'), 121);

  // Report agrees with a direct library computation.
  CountSchema schema;
  const auto study = make_study(run_tests(ingest_counts_file(counts.string(), schema), schema));
  const auto g = FdrEstimator::generalized(study, 0.5, 1.0);
  const auto r = threshold(g, RejectionProcess(study.pvalues()), 0.05);
  EXPECT_EQ(report["thresholds"][0]["method"], "generalized");
  EXPECT_EQ(report["thresholds"][0]["pi0"].get<double>(), g.pi0);
  EXPECT_EQ(report["thresholds"][0]["rejections"].get<std::size_t>(), r.rejections);
}

TEST_F(CliTest, AnalyzeEpsilonZeroMatchesStorey) {
  const auto counts = counts_file(200, 2);
  ASSERT_EQ(run({"analyze", counts.string(), "--epsilon", "0", "--out", (dir_ / "an").string()}),
            0)
      << err_.str();
  const auto t = read_json(dir_ / "an" / "report.json")["thresholds"];
  ASSERT_EQ(t[0]["method"], "generalized");
  ASSERT_EQ(t[1]["method"], "storey");
  // Storey's pi0 is clipped; with eps = 0 the generalized one is the same number.
  EXPECT_EQ(t[0]["pi0"].get<double>(), t[1]["pi0"].get<double>());
  EXPECT_EQ(t[0]["t_alpha"].get<double>(), t[1]["t_alpha"].get<double>());
  EXPECT_EQ(t[0]["rejections"], t[1]["rejections"]);
}

TEST_F(CliTest, AnalyzeEmptyAfterFilterIsError) {
  const auto counts = counts_file(30, 3);
  EXPECT_EQ(run({"analyze", counts.string(), "--min-total", "1000"}), exit_code::domain);
  EXPECT_NE(err_.str().find("m = 0"), std::string::npos) << err_.str();
}

TEST_F(CliTest, AnalyzeParseErrorCarriesLine) {
  const auto counts = write("bad.csv", "id,m1,n1,m2,n2\nf0,1,2,1,2\nf1,1,x,1,2\n");
  EXPECT_EQ(run({"analyze", counts.string()}), exit_code::parse);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
  EXPECT_EQ(run({"analyze", (dir_ / "missing.csv").string()}), exit_code::io);
}

TEST_F(CliTest, TuneSinglePointPassesThrough) {
  const auto counts = counts_file(150, 4);
  ASSERT_EQ(run({"tune", counts.string(), "--lambda-grid", "0.4", "--epsilon-grid", "0.7",
                 "--bootstrap", "20", "--out", (dir_ / "t").string()}),
            0)
      << err_.str();
  const auto j = read_json(dir_ / "t" / "tune.json");
  EXPECT_EQ(j["chosen"]["lambda"], 0.4);
  EXPECT_EQ(j["chosen"]["epsilon"], 0.7);
  CountSchema schema;
  const auto study = make_study(run_tests(ingest_counts_file(counts.string(), schema), schema));
  EXPECT_EQ(j["estimate"]["value"].get<double>(), generalized_pi0(study, 0.4, 0.7).value);
}

TEST_F(CliTest, TuneFixedSeedIsReproducible) {
  const auto counts = counts_file(150, 5);
  const std::vector<std::string> common{"tune", counts.string(), "--lambda-grid", "0:0.8:0.2",
                                        "--epsilon-grid", "0,0.5,1", "--bootstrap", "30",
                                        "--seed", "17"};
  auto a = common, b = common;
  a.insert(a.end(), {"--out", (dir_ / "a").string()});
  b.insert(b.end(), {"--out", (dir_ / "b").string(), "--threads", "3"});
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0) << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "tune.json"), slurp(dir_ / "b" / "tune.json"));
  ASSERT_EQ(run({"rerun", (dir_ / "a" / "manifest.json").string(), "--out",
                 (dir_ / "c").string()}),
            0)
      << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "tune.json"), slurp(dir_ / "c" / "tune.json"));
}

TEST_F(CliTest, TuneMalformedGridIsError) {
  const auto counts = counts_file(20, 6);
  EXPECT_EQ(run({"tune", counts.string(), "--lambda-grid", "0:0.5"}), exit_code::config);
  EXPECT_EQ(err_.str().rfind("error[config]:", 0), 0u) << err_.str();
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), exit_code::usage);
  EXPECT_EQ(err_.str().rfind("error[usage]:", 0), 0u);
  EXPECT_EQ(run({"analyze"}), exit_code::usage);
  EXPECT_EQ(run({"analyze", "x.csv", "--test", "chisq"}), exit_code::usage);
  EXPECT_EQ(run({"frobnicate"}), exit_code::usage);
  EXPECT_EQ(run({"--help"}), exit_code::ok);
  EXPECT_NE(out_.str().find("simulate"), std::string::npos);
}

TEST(Manifest, Sha256KnownAnswer) {
  const auto path = fs::temp_directory_path() / "dfdr_sha_abc.txt";
  std::ofstream(path, std::ios::binary) << "abc";
  EXPECT_EQ(sha256_file(path),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove(path);
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m;
  m.command = "tune";
  m.argv = {"tune", "x.csv"};
  m.params = {{"seed", 3}};
  m.seed = 3;
  m.inputs = {{"/tmp/x.csv", "00ff"}};
  m.version = "1.2.3";
  m.timestamp = utc_timestamp();
  const auto back = RunManifest::from_json(m.to_json());
  EXPECT_EQ(back.to_json(), m.to_json());
  EXPECT_EQ(m.timestamp.size(), 20u);
  EXPECT_THROW(RunManifest::from_json(nlohmann::json::object()), ConfigError);
}

}  // namespace
}  // namespace dfdr::cli
