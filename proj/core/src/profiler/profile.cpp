#include "xplain/profiler/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "xplain/core/error.hpp"

namespace xplain {

std::vector<std::optional<std::string>> RawTable::column(std::size_t index) const {
  std::vector<std::optional<std::string>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(index < row.size() ? row[index] : std::nullopt);
  return out;
}

namespace {

std::string trim_lower(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::optional<double> parse_number(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  std::size_t end = text.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return std::nullopt;
  const char* first = text.data() + begin;
  const char* last = text.data() + end + 1;
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<double> parse_boolean(const std::string& text) {
  const std::string t = trim_lower(text);
  if (t == "true" || t == "yes" || t == "1") return 1.0;
  if (t == "false" || t == "no" || t == "0") return 0.0;
  return std::nullopt;
}

ColumnKind infer_kind(const std::vector<std::optional<std::string>>& values) {
  bool any = false;
  bool all_numeric = true;
  bool all_boolean_tokens = true;
  std::set<std::string> distinct;
  for (const auto& value : values) {
    if (!value) continue;
    any = true;
    if (all_numeric && !parse_number(*value)) all_numeric = false;
    if (all_boolean_tokens && !parse_boolean(*value)) all_boolean_tokens = false;
    distinct.insert(trim_lower(*value));
  }
  require(any, ErrorCode::invalid_argument, "cannot infer the kind of an all-missing column");
  if (all_boolean_tokens && distinct.size() == 2) {
    std::set<double> parsed;
    for (const auto& v : distinct) parsed.insert(*parse_boolean(v));
    // "yes"/"1" are the same value, so two spellings of one value is not boolean.
    if (parsed.size() == 2) return ColumnKind::boolean;
  }
  if (all_numeric) return ColumnKind::numeric;
  return ColumnKind::categorical;
}

std::string_view to_string(WarningKind kind) {
  switch (kind) {
    case WarningKind::high_missing: return "high_missing";
    case WarningKind::constant: return "constant";
    case WarningKind::high_cardinality: return "high_cardinality";
    case WarningKind::all_missing: return "all_missing";
  }
  return "high_missing";
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  require(!sorted.empty(), ErrorCode::invalid_argument, "quantile of empty data");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

namespace {

std::string format_edge(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

NumericStats numeric_stats(const std::vector<double>& sorted) {
  NumericStats stats;
  stats.min = sorted.front();
  stats.max = sorted.back();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double n = static_cast<double>(sorted.size());
  stats.mean = sum / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - stats.mean) * (v - stats.mean);
  stats.std = std::sqrt(ss / n);
  stats.q1 = quantile_sorted(sorted, 0.25);
  stats.q2 = quantile_sorted(sorted, 0.5);
  stats.q3 = quantile_sorted(sorted, 0.75);
  return stats;
}

std::vector<HistogramBin> numeric_histogram(const std::vector<double>& sorted, std::size_t bins) {
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lower = lo + width * static_cast<double>(b);
    out[b].upper = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    out[b].label = "[" + format_edge(out[b].lower) + ", " + format_edge(out[b].upper) +
                   (b + 1 == bins ? "]" : ")");
  }
  for (double v : sorted) {
    std::size_t index = 0;
    if (width > 0.0) {
      index = static_cast<std::size_t>(std::floor((v - lo) / width));
      index = std::min(index, bins - 1);
    }
    ++out[index].count;
  }
  return out;
}

std::vector<HistogramBin> value_histogram(const std::map<std::string, std::size_t>& counts,
                                          std::size_t top) {
  std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(), counts.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<HistogramBin> out;
  std::size_t other = 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i < top) {
      HistogramBin bin;
      bin.label = ordered[i].first;
      bin.count = ordered[i].second;
      out.push_back(bin);
    } else {
      other += ordered[i].second;
    }
  }
  if (other > 0) {
    HistogramBin bin;
    bin.label = "(other)";
    bin.count = other;
    out.push_back(bin);
  }
  return out;
}

std::optional<double> pearson(std::vector<std::pair<double, double>> pairs) {
  if (pairs.size() < 2) return std::nullopt;
  // Sorted accumulation makes the result independent of row order.
  std::sort(pairs.begin(), pairs.end());
  const double n = static_cast<double>(pairs.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pairs) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

DatasetProfile profile(const RawTable& table, const ProfileOptions& options) {
  require(!table.header.empty(), ErrorCode::invalid_argument, "dataset has no columns");
  require(!table.rows.empty(), ErrorCode::invalid_argument, "dataset has no rows");
  require(options.histogram_bins >= 1, ErrorCode::invalid_argument, "need >= 1 histogram bin");

  DatasetProfile result;
  result.row_count = table.rows.size();
  result.options = options;

  // Parsed numeric columns, kept for the correlation pass.
  std::vector<std::pair<std::size_t, std::vector<std::optional<double>>>> numeric_columns;

  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto values = table.column(c);
    ColumnProfile col;
    col.name = table.header[c];
    col.count = values.size();
    for (const auto& v : values) {
      if (!v) ++col.missing_count;
    }

    if (col.missing_count == col.count) {
      result.warnings.push_back({col.name, WarningKind::all_missing, "every value is missing"});
      result.columns.push_back(std::move(col));
      continue;
    }
    col.inferred_kind = infer_kind(values);

    if (*col.inferred_kind == ColumnKind::numeric) {
      std::vector<std::optional<double>> parsed;
      std::vector<double> present;
      for (const auto& v : values) {
        parsed.push_back(v ? parse_number(*v) : std::nullopt);
        if (parsed.back()) present.push_back(*parsed.back());
      }
      std::sort(present.begin(), present.end());
      std::vector<double> unique_values = present;
      unique_values.erase(std::unique(unique_values.begin(), unique_values.end()),
                          unique_values.end());
      col.distinct_count = unique_values.size();
      col.numeric = numeric_stats(present);
      col.histogram = numeric_histogram(present, options.histogram_bins);
      numeric_columns.emplace_back(c, std::move(parsed));
    } else {
      std::map<std::string, std::size_t> counts;
      for (const auto& v : values) {
        if (!v) continue;
        if (*col.inferred_kind == ColumnKind::boolean) {
          ++counts[*parse_boolean(*v) == 1.0 ? "true" : "false"];
        } else {
          ++counts[*v];
        }
      }
      col.distinct_count = counts.size();
      col.histogram = value_histogram(counts, options.top_values);
    }

    const double missing_fraction =
        static_cast<double>(col.missing_count) / static_cast<double>(col.count);
    if (missing_fraction > options.missing_threshold) {
      char detail[96];
      std::snprintf(detail, sizeof detail, "%zu of %zu values missing (%.1f%%)", col.missing_count,
                    col.count, 100.0 * missing_fraction);
      result.warnings.push_back({col.name, WarningKind::high_missing, detail});
    }
    if (col.distinct_count == 1) {
      result.warnings.push_back({col.name, WarningKind::constant, "single distinct value"});
    }
    if (*col.inferred_kind == ColumnKind::categorical &&
        col.distinct_count > options.cardinality_threshold) {
      result.warnings.push_back({col.name, WarningKind::high_cardinality,
                                 std::to_string(col.distinct_count) + " distinct values"});
    }
    result.columns.push_back(std::move(col));
  }

  CorrelationMatrix& corr = result.correlation;
  std::vector<const std::vector<std::optional<double>>*> included;
  for (const auto& [index, parsed] : numeric_columns) {
    if (result.columns[index].distinct_count <= 1) {
      corr.excluded.emplace_back(table.header[index], "constant column");
      continue;
    }
    corr.columns.push_back(table.header[index]);
    included.push_back(&parsed);
  }
  const std::size_t k = included.size();
  corr.values.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    corr.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& x = (*included[i])[r];
        const auto& y = (*included[j])[r];
        if (x && y) pairs.emplace_back(*x, *y);
      }
      corr.values[i][j] = pearson(std::move(pairs));
      corr.values[j][i] = corr.values[i][j];
    }
  }
  return result;
}

}  // namespace xplain
