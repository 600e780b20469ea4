#include "dfdr/count_table.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>

#include "dfdr/error.hpp"

namespace dfdr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_count(std::string_view token, std::size_t line) {
  std::int64_t v = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "expected an integer count, got '" +
                               std::string(token) + "'");
  }
  if (v < 0) {
    throw ParseError(line, "negative count " + std::to_string(v));
  }
  return v;
}

std::int64_t sum(const std::vector<std::int64_t>& v) {
  return std::accumulate(v.begin(), v.end(), std::int64_t{0});
}

std::int64_t group_total(const std::vector<std::int64_t>& g, TestKind test) {
  return test == TestKind::fet ? g[1] : sum(g);
}

bool keep(const FeatureCounts& row, const CountSchema& schema) {
  auto in_range = [&](std::int64_t v) {
    return v >= schema.min_total && v <= schema.max_total;
  };
  if (schema.effective_scope() == FilterScope::per_group) {
    return in_range(group_total(row.group1, schema.test)) &&
           in_range(group_total(row.group2, schema.test));
  }
  std::int64_t total = schema.test == TestKind::fet
                           ? row.group1[1] + row.group2[1]
                           : sum(row.group1) + sum(row.group2);
  return in_range(total);
}

}  // namespace

TestKind parse_test_kind(std::string_view name) {
  if (name == "bin") return TestKind::bin;
  if (name == "fet") return TestKind::fet;
  if (name == "ent") return TestKind::ent;
  throw DomainError("unknown test kind '" + std::string(name) +
                    "' (expected one of: bin, fet, ent)");
}

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::bin: return "bin";
    case TestKind::fet: return "fet";
    case TestKind::ent: return "ent";
  }
  return "?";
}

CountTable ingest_counts(std::istream& in, const CountSchema& schema) {
  CountTable table;
  std::string line;
  std::size_t lineno = 0;
  char delim = ',';

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    delim = line.find('\t') != std::string::npos ? '\t' : ',';
    for (auto f : split(line, delim)) table.header.emplace_back(f);
    break;
  }
  if (table.header.empty()) throw ParseError(lineno, "missing header row");

  const std::size_t count_columns = table.header.size() - 1;
  if (count_columns == 0 || count_columns % 2 != 0) {
    throw ParseError(lineno, "expected an id column followed by an even number "
                             "of count columns, got " +
                                 std::to_string(count_columns));
  }
  const std::size_t per_group = count_columns / 2;
  if (schema.test == TestKind::fet && per_group != 2) {
    throw ParseError(lineno, "fet expects two columns per group (successes, "
                             "trials), got " + std::to_string(per_group));
  }
  if (schema.test == TestKind::ent && schema.reps &&
      static_cast<std::size_t>(*schema.reps) != per_group) {
    throw ParseError(lineno, "ent reps=" + std::to_string(*schema.reps) +
                                 " but header has " + std::to_string(per_group) +
                                 " columns per group");
  }
  table.columns_per_group = per_group;

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, delim);
    if (fields.size() != table.header.size()) {
      throw ParseError(lineno, "expected " + std::to_string(table.header.size()) +
                                   " fields, got " +
                                   std::to_string(fields.size()));
    }
    FeatureCounts row;
    row.id = std::string(fields[0]);
    for (std::size_t c = 0; c < per_group; ++c) {
      row.group1.push_back(parse_count(fields[1 + c], lineno));
      row.group2.push_back(parse_count(fields[1 + per_group + c], lineno));
    }
    if (schema.test == TestKind::fet &&
        (row.group1[0] > row.group1[1] || row.group2[0] > row.group2[1])) {
      throw ParseError(lineno, "successes exceed trials for feature '" +
                                   row.id + "'");
    }
    if (keep(row, schema)) {
      table.rows.push_back(std::move(row));
    } else {
      ++table.dropped;
    }
  }
  return table;
}

CountTable ingest_counts_file(const std::string& path,
                              const CountSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open count table '" + path + "'");
  return ingest_counts(in, schema);
}

std::vector<TestResult> run_tests(const CountTable& table,
                                  const CountSchema& schema) {
  std::vector<TestResult> out;
  out.reserve(table.rows.size());
  const int reps = schema.reps.value_or(static_cast<int>(table.columns_per_group));
  for (const auto& row : table.rows) {
    switch (schema.test) {
      case TestKind::bin:
        out.push_back(binomial_test(sum(row.group1), sum(row.group2),
                                    schema.convention));
        break;
      case TestKind::fet:
        out.push_back(fisher_test(row.group1[0], row.group1[1], row.group2[0],
                                  row.group2[1], schema.convention));
        break;
      case TestKind::ent:
        out.push_back(nb_exact_test(sum(row.group1), sum(row.group2),
                                    schema.nb_size, reps, schema.convention));
        break;
    }
  }
  return out;
}

}  // namespace dfdr
