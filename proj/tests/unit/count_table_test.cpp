#include <gtest/gtest.h>

#include <sstream>

#include "dfdr/count_table.hpp"
#include "dfdr/error.hpp"

namespace dfdr {
namespace {

CountSchema fet_schema() {
  CountSchema s;
  s.test = TestKind::fet;
  return s;
}

TEST(CountTable, ParsesTwoRows) {
  std::istringstream in("id,m1,n1,m2,n2\nc1,3,4,1,4\nc2,0,5,2,6\n");
  const auto t = ingest_counts(in, fet_schema());
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].id, "c1");
  EXPECT_EQ(t.rows[1].group2, (std::vector<std::int64_t>{2, 6}));
  EXPECT_EQ(t.dropped, 0u);

  const auto results = run_tests(t, fet_schema());
  ASSERT_EQ(results.size(), 2u);
  EXPECT_NEAR(results[0].pvalue, 34.0 / 70.0, 1e-15);
}

TEST(CountTable, TabDelimitedAndCarriageReturns) {
  std::istringstream in("id\ta\tb\r\nx\t5\t0\r\n");
  CountSchema s;
  s.test = TestKind::bin;
  const auto t = ingest_counts(in, s);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_NEAR(run_tests(t, s)[0].pvalue, 0.0625, 1e-15);
}

TEST(CountTable, ZeroTotalRowDroppedByFilter) {
  std::istringstream in("id,a,b\nf1,0,0\nf2,3,1\n");
  CountSchema s;
  s.test = TestKind::bin;
  s.min_total = 1;
  const auto t = ingest_counts(in, s);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].id, "f2");
  EXPECT_EQ(t.dropped, 1u);
}

TEST(CountTable, FetFiltersEachGroupTotal) {
  // Second row: group-2 trials 30 exceed max_total; third: group-1 trials 0.
  std::istringstream in("id,m1,n1,m2,n2\na,1,10,2,12\nb,1,10,2,30\nc,0,0,2,5\n");
  auto s = fet_schema();
  s.min_total = 1;
  s.max_total = 25;
  const auto t = ingest_counts(in, s);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.dropped, 2u);

  std::istringstream again("id,m1,n1,m2,n2\na,1,10,2,12\nb,1,10,2,30\nc,0,0,2,5\n");
  // Row scope: grand totals 22, 40 and 5 all lie in [1, 40].
  s.filter_scope = FilterScope::row;
  s.max_total = 40;
  EXPECT_EQ(ingest_counts(again, s).rows.size(), 3u);
}

TEST(CountTable, NonIntegerTokenNamesLine) {
  std::istringstream in("id,a,b\nf1,1,2\nf2,x3,1\n");
  CountSchema s;
  s.test = TestKind::bin;
  try {
    ingest_counts(in, s);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("x3"), std::string::npos);
  }
}

TEST(CountTable, RejectsNegativeRaggedAndInconsistentRows) {
  CountSchema s;
  s.test = TestKind::bin;
  std::istringstream neg("id,a,b\nf1,-1,2\n");
  EXPECT_THROW(ingest_counts(neg, s), ParseError);
  std::istringstream ragged("id,a,b\nf1,1\n");
  EXPECT_THROW(ingest_counts(ragged, s), ParseError);
  std::istringstream odd("id,a,b,c\nf1,1,2,3\n");
  EXPECT_THROW(ingest_counts(odd, s), ParseError);
  std::istringstream over("id,m1,n1,m2,n2\nf,5,4,1,4\n");
  EXPECT_THROW(ingest_counts(over, fet_schema()), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(ingest_counts(empty, s), ParseError);
}

TEST(CountTable, EntSumsReplicates) {
  std::istringstream in("id,a1,a2,a3,b1,b2,b3\ng,2,2,2,2,2,2\nh,1,0,0,3,2,4\n");
  CountSchema s;
  s.test = TestKind::ent;
  s.nb_size = 2.0;
  const auto t = ingest_counts(in, s);
  EXPECT_EQ(t.columns_per_group, 3u);
  const auto r = run_tests(t, s);
  EXPECT_EQ(r[0].pvalue, 1.0);
  EXPECT_EQ(r[1].pvalue, nb_exact_test(1, 9, 2.0, 3).pvalue);

  std::istringstream mismatch("id,a1,a2,b1,b2\ng,1,1,1,1\n");
  s.reps = 3;
  EXPECT_THROW(ingest_counts(mismatch, s), ParseError);
}

TEST(CountTable, MissingFileIsIoError) {
  EXPECT_THROW(ingest_counts_file("/nonexistent/counts.csv", fet_schema()), IoError);
}

}  // namespace
}  // namespace dfdr
