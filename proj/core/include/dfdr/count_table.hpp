#pragma once

// Delimited count-table ingestion.
//
// Input is comma- or tab-separated text with a header row. The first column is
// a feature id; the remaining columns are split evenly between group 1 and
// group 2 (first half, second half). How a group's columns are read depends
// on the test:
//
//   bin  any number of replicate counts per group, summed
//   fet  exactly two columns per group: successes, trials
//   ent  `reps` replicate counts per group, summed
//
// Rows can be filtered on a total count. With FilterScope::per_group every
// group's total (trials for fet, summed counts otherwise) must lie in
// [min_total, max_total]; with FilterScope::row the grand total must.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfdr/discrete_tests.hpp"

namespace dfdr {

enum class TestKind { bin, fet, ent };

TestKind parse_test_kind(std::string_view name);
std::string_view to_string(TestKind kind);

enum class FilterScope { per_group, row };

struct CountSchema {
  TestKind test = TestKind::fet;
  double nb_size = 1.0;         // ent only
  std::optional<int> reps;      // ent: replicates per group; inferred if empty
  std::int64_t min_total = 0;
  std::int64_t max_total = INT64_MAX;
  // Empty means the test's natural scope: per_group for fet, row otherwise.
  std::optional<FilterScope> filter_scope;
  PValueConvention convention = PValueConvention::minimum_likelihood;

  FilterScope effective_scope() const {
    return filter_scope.value_or(test == TestKind::fet ? FilterScope::per_group
                                                       : FilterScope::row);
  }
};

struct FeatureCounts {
  std::string id;
  std::vector<std::int64_t> group1;
  std::vector<std::int64_t> group2;
};

struct CountTable {
  std::vector<std::string> header;
  std::vector<FeatureCounts> rows;
  std::size_t dropped = 0;      // rows removed by the total-count filter
  std::size_t columns_per_group = 0;
};

// Parses `in` according to `schema`. Throws ParseError (with the 1-based line
// number) on malformed rows, non-integer or negative tokens, and ragged rows.
CountTable ingest_counts(std::istream& in, const CountSchema& schema);
CountTable ingest_counts_file(const std::string& path,
                              const CountSchema& schema);

// Runs the schema's test on every row.
std::vector<TestResult> run_tests(const CountTable& table,
                                  const CountSchema& schema);

}  // namespace dfdr
