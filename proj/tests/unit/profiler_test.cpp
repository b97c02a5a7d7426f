#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "xplain/core/error.hpp"
#include "xplain/core/random.hpp"
#include "xplain/platform/serialization.hpp"
#include "xplain/profiler/profile.hpp"

namespace xplain {
namespace {

using Values = std::vector<std::optional<std::string>>;

RawTable table(std::vector<std::string> header, std::vector<Values> columns) {
  RawTable t;
  t.header = std::move(header);
  for (std::size_t r = 0; r < columns.front().size(); ++r) {
    std::vector<std::optional<std::string>> row;
    for (const auto& c : columns) row.push_back(c[r]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Values numbers(const std::vector<double>& xs) {
  Values out;
  for (double x : xs) out.push_back(std::to_string(x));
  return out;
}

const ProfileWarning* find_warning(const DatasetProfile& p, const std::string& column, WarningKind kind) {
  for (const auto& w : p.warnings) {
    if (w.column == column && w.kind == kind) return &w;
  }
  return nullptr;
}

TEST(InferKind, RecognizesTheThreeKinds) {
  EXPECT_EQ(infer_kind({"1.5", "2", "3"}), ColumnKind::numeric);
  EXPECT_EQ(infer_kind({"Yes", "No", "Yes"}), ColumnKind::boolean);
  EXPECT_EQ(infer_kind({"N", "NNE", "SW"}), ColumnKind::categorical);
  EXPECT_EQ(infer_kind({"true", std::nullopt, "FALSE"}), ColumnKind::boolean);
  EXPECT_EQ(infer_kind({"1", "x"}), ColumnKind::categorical);
  EXPECT_THROW(infer_kind({std::nullopt, std::nullopt}), Error);
}

TEST(InferKind, ParsersRejectNonFiniteAndGarbage) {
  EXPECT_EQ(parse_number(" 2.5 "), 2.5);
  EXPECT_FALSE(parse_number("nan").has_value());
  EXPECT_FALSE(parse_number("inf").has_value());
  EXPECT_FALSE(parse_number("2.5x").has_value());
  EXPECT_EQ(parse_boolean("YES"), 1.0);
  EXPECT_EQ(parse_boolean("0"), 0.0);
  EXPECT_FALSE(parse_boolean("maybe").has_value());
}

TEST(Profile, HandComputedNumericStats) {
  const DatasetProfile p = profile(table({"x"}, {numbers({4, 1, 3, 2})}));
  const NumericStats& s = *p.columns[0].numeric;
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_EQ(s.q2, 2.5);
  EXPECT_EQ(s.q1, 1.75);
  EXPECT_EQ(s.q3, 3.25);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_NEAR(s.std, std::sqrt(1.25), 1e-15);
}

TEST(Profile, CorrelationOfColumnWithItselfAndNegation) {
  Rng rng(1);
  std::vector<double> x, neg;
  for (int i = 0; i < 40; ++i) {
    x.push_back(rng.uniform() * 10 - 5);
    neg.push_back(-x.back());
  }
  const DatasetProfile p = profile(table({"x", "y", "z"}, {numbers(x), numbers(x), numbers(neg)}));
  const auto& c = p.correlation;
  ASSERT_EQ(c.columns.size(), 3u);
  EXPECT_NEAR(*c.values[0][1], 1.0, 1e-12);
  EXPECT_NEAR(*c.values[0][2], -1.0, 1e-12);
  EXPECT_EQ(*c.values[1][1], 1.0);
}

TEST(Profile, HighMissingFiresAboveTenPercent) {
  Values three = numbers(std::vector<double>(20, 1.0));
  for (int i = 0; i < 20; ++i) three[i] = std::to_string(i);
  Values two = three;
  three[0] = three[1] = three[2] = std::nullopt;
  two[0] = two[1] = std::nullopt;
  const DatasetProfile p = profile(table({"three", "two"}, {three, two}));
  EXPECT_EQ(p.columns[0].missing_count, 3u);
  EXPECT_NE(find_warning(p, "three", WarningKind::high_missing), nullptr);
  // Exactly 10% does not exceed the threshold.
  EXPECT_EQ(find_warning(p, "two", WarningKind::high_missing), nullptr);
}

TEST(Profile, ConstantAndHighCardinalityThresholds) {
  Values constant(60, std::string("same"));
  Values fifty, fifty_one;
  for (int i = 0; i < 60; ++i) {
    fifty.push_back("v" + std::to_string(i % 50));
    fifty_one.push_back("v" + std::to_string(i % 51));
  }
  const DatasetProfile p = profile(table({"constant", "fifty", "fifty_one"}, {constant, fifty, fifty_one}));
  EXPECT_NE(find_warning(p, "constant", WarningKind::constant), nullptr);
  EXPECT_EQ(find_warning(p, "fifty", WarningKind::high_cardinality), nullptr);
  EXPECT_NE(find_warning(p, "fifty_one", WarningKind::high_cardinality), nullptr);
}

TEST(Profile, ConstantNumericColumnsLeaveTheMatrix) {
  const DatasetProfile p = profile(table({"a", "k", "b"}, {numbers({1, 2, 3}), numbers({5, 5, 5}), numbers({3, 1, 2})}));
  EXPECT_EQ(p.correlation.columns, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(p.correlation.excluded.size(), 1u);
  EXPECT_EQ(p.correlation.excluded[0].first, "k");
}

TEST(Profile, AllMissingColumnIsReportedNotThrown) {
  const DatasetProfile p = profile(table({"a", "gone"}, {numbers({1, 2}), Values{std::nullopt, std::nullopt}}));
  EXPECT_FALSE(p.columns[1].inferred_kind.has_value());
  EXPECT_NE(find_warning(p, "gone", WarningKind::all_missing), nullptr);
}

TEST(Profile, RejectsEmptyTable) {
  RawTable t;
  t.header = {"a"};
  EXPECT_THROW(profile(t), Error);
}

// Property: histogram totals reconcile, correlation is symmetric with unit
// diagonal and entries in [-1, 1], and row order does not matter.
TEST(Profile, InvariantsOnRandomTables) {
  Rng rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = 3 + static_cast<int>(rng.below(60));
    std::vector<Values> columns(4);
    for (int r = 0; r < rows; ++r) {
      auto maybe = [&](std::string v) -> std::optional<std::string> {
        return rng.uniform() < 0.15 ? std::nullopt : std::optional<std::string>(std::move(v));
      };
      columns[0].push_back(maybe(std::to_string(rng.uniform() * 100)));
      columns[1].push_back(maybe(std::to_string(static_cast<int>(rng.below(5)))));
      columns[2].push_back(maybe(rng.below(2) ? "yes" : "no"));
      columns[3].push_back(maybe("c" + std::to_string(rng.below(15))));
    }
    for (auto& c : columns) c[0] = "0";  // keep every column non-empty
    columns[2][0] = "no";
    const RawTable t = table({"num", "int", "flag", "cat"}, columns);
    const DatasetProfile p = profile(t);
    for (const auto& c : p.columns) {
      std::size_t total = 0;
      for (const auto& bin : c.histogram) total += bin.count;
      ASSERT_EQ(total, c.count - c.missing_count) << c.name;
      ASSERT_LE(c.missing_count, c.count);
      if (c.numeric) ASSERT_GE(c.numeric->std, 0.0);
    }
    const auto& m = p.correlation.values;
    for (std::size_t i = 0; i < m.size(); ++i) {
      ASSERT_EQ(*m[i][i], 1.0);
      for (std::size_t j = 0; j < m.size(); ++j) {
        ASSERT_EQ(m[i][j].has_value(), m[j][i].has_value());
        if (!m[i][j]) continue;
        ASSERT_NEAR(*m[i][j], *m[j][i], 1e-12);
        ASSERT_LE(std::abs(*m[i][j]), 1.0);
      }
    }
    RawTable shuffled = t;
    rng.shuffle(shuffled.rows);
    ASSERT_EQ(canonical_dump(to_json(profile(shuffled))), canonical_dump(to_json(p)));
  }
}

TEST(Profile, NumericHistogramHasTenBinsAndClosedLastBin) {
  std::vector<double> xs;
  for (int i = 0; i <= 100; ++i) xs.push_back(i);
  const DatasetProfile p = profile(table({"x"}, {numbers(xs)}));
  const auto& h = p.columns[0].histogram;
  ASSERT_EQ(h.size(), 10u);
  EXPECT_EQ(h.front().lower, 0.0);
  EXPECT_EQ(h.back().upper, 100.0);
  EXPECT_EQ(h.back().count, 11u);  // 90..100 inclusive
  EXPECT_EQ(h.front().count, 10u);
}

TEST(Profile, CategoricalHistogramKeepsTopValuesAndOther) {
  Values v;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j <= i; ++j) v.push_back("k" + std::to_string(i));
  const DatasetProfile p = profile(table({"c"}, {v}));
  const auto& h = p.columns[0].histogram;
  ASSERT_EQ(h.size(), 11u);
  EXPECT_EQ(h[0].label, "k11");
  EXPECT_EQ(h[0].count, 12u);
  EXPECT_EQ(h.back().label, "(other)");
  EXPECT_EQ(h.back().count, 3u);  // k0 (1) + k1 (2)
}

}  // namespace
}  // namespace xplain
