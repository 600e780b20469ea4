#include <gtest/gtest.h>

#include <sstream>

#include "dfdr/serialize.hpp"

namespace dfdr {
namespace {

TEST(Serialize, NineSignificantDigits) {
  EXPECT_EQ(format_number(0.59848861234), "0.598488612");
  EXPECT_EQ(format_number(0.05), "0.05");
  EXPECT_EQ(format_number(451), "451");
}

TEST(Serialize, Pi0EstimateRecord) {
  const auto s = uniform_study(std::vector<double>{0.2, 0.6, 0.8, 1.0});
  const auto j = to_json(generalized_pi0(s, 0.5, 1.0));
  EXPECT_EQ(j["method"], "generalized");
  EXPECT_EQ(j["raw"], 1.5);
  EXPECT_EQ(j["value"], 1.0);
  EXPECT_EQ(j["lambda"], 0.5);
  EXPECT_EQ(j["epsilon"], 1.0);
  const auto e = epsilon_json(Epsilon(std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(e["min"], 0.0);
  EXPECT_EQ(e["mean"], 0.5);
  EXPECT_EQ(e["max"], 1.0);
  EXPECT_TRUE(to_json(pounds_tilde_pi0(s))["lambda"].is_null());
}

TEST(Serialize, ThresholdRecordHasAllFields) {
  const std::vector<double> p{0.01, 0.02, 0.5, 1.0};
  const auto r = threshold(FdrEstimator::generalized(uniform_study(p), 0.5), RejectionProcess(p), 0.05);
  const auto j = to_json(r);
  for (const char* key : {"method", "lambda", "epsilon", "pi0", "alpha", "t_alpha", "fdr_at_t", "rejections"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(to_json(bh_procedure(p, 0.05))["fdr_at_t"].is_null());
}

TEST(Serialize, ReplicationCsvShape) {
  auto spec = ScenarioSpec::defaults(ScenarioKind::poisson_bin);
  spec.m = 30;
  spec.reps = 2;
  const auto summary = run_replications(spec);
  std::ostringstream out;
  write_replications_csv(out, summary);
  std::istringstream in(out.str());
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "rep,method,alpha,pi0,excess,threshold,rejections,false_discoveries,fdp");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, spec.reps * spec.methods.size() * spec.alphas.size());

  const auto agg = aggregate_json(summary);
  EXPECT_EQ(agg["replications"], 2);
  EXPECT_TRUE(agg["methods"].contains("generalized"));
}

}  // namespace
}  // namespace dfdr
