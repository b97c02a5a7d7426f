#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "xplain/core/types.hpp"

namespace xplain {

// Untyped table as read from CSV: std::nullopt marks an empty cell.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<std::string>>> rows;

  std::vector<std::optional<std::string>> column(std::size_t index) const;
};

// numeric if every present value parses as a finite number; boolean if there
// are exactly two distinct present values drawn from true/false/0/1/yes/no
// (case-insensitive); categorical otherwise. Throws on an all-missing column.
ColumnKind infer_kind(const std::vector<std::optional<std::string>>& values);

std::optional<double> parse_number(const std::string& text);
// Maps true/yes/1 -> 1 and false/no/0 -> 0 (case-insensitive).
std::optional<double> parse_boolean(const std::string& text);

struct ProfileOptions {
  double missing_threshold = 0.10;
  std::size_t cardinality_threshold = 50;
  std::size_t histogram_bins = 10;
  std::size_t top_values = 10;
};

struct NumericStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // population
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

struct HistogramBin {
  std::string label;  // "[lo, hi)" for numeric bins, the value for categories
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

struct ColumnProfile {
  std::string name;
  std::optional<ColumnKind> inferred_kind;  // empty when every cell is missing
  std::size_t count = 0;
  std::size_t missing_count = 0;
  std::size_t distinct_count = 0;
  std::optional<NumericStats> numeric;
  // Numeric: equal-width bins over [min, max], last bin right-closed.
  // Categorical/boolean: top values by count, then an "(other)" bin when
  // more values exist, so bin counts always sum to count - missing_count.
  std::vector<HistogramBin> histogram;
};

enum class WarningKind { high_missing, constant, high_cardinality, all_missing };
std::string_view to_string(WarningKind kind);

struct ProfileWarning {
  std::string column;
  WarningKind kind;
  std::string detail;
};

// Pearson correlations over rows where both values are present. Constant
// columns are excluded and listed with a reason. Pairs with fewer than two
// shared rows or no shared variance hold std::nullopt.
struct CorrelationMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> values;
  std::vector<std::pair<std::string, std::string>> excluded;
  std::string method = "pearson_pairwise_complete";
};

struct DatasetProfile {
  std::size_t row_count = 0;
  std::vector<ColumnProfile> columns;
  std::vector<ProfileWarning> warnings;
  CorrelationMatrix correlation;
  ProfileOptions options;
};

// Linear-interpolation quantile of sorted values (position p * (n - 1)).
double quantile_sorted(const std::vector<double>& sorted, double p);

DatasetProfile profile(const RawTable& table, const ProfileOptions& options = {});

}  // namespace xplain
