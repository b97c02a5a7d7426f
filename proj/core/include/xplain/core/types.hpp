#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xplain {

enum class TaskKind { tabular, text, image };
enum class ColumnKind { numeric, categorical, boolean };

std::string_view to_string(TaskKind kind);
std::string_view to_string(ColumnKind kind);
TaskKind parse_task_kind(std::string_view text);
ColumnKind parse_column_kind(std::string_view text);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  // Ordered category list; only meaningful for categorical columns.
  std::vector<std::string> categories;
  bool operator==(const Column&) const = default;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  std::size_t size() const { return columns_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<Column> columns_;
};

// A tabular cell: missing, a number (numeric and boolean columns, booleans as
// 0/1), or a category string.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& cell) {
  return std::holds_alternative<std::monostate>(cell);
}

struct TabularSample {
  std::vector<Cell> values;
  bool operator==(const TabularSample&) const = default;
};

struct TextSample {
  std::string raw;
  bool operator==(const TextSample&) const = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

class ImageSample {
 public:
  ImageSample(int height, int width, std::vector<Rgb> pixels);
  ImageSample(int height, int width, Rgb fill);

  int height() const { return height_; }
  int width() const { return width_; }
  const std::vector<Rgb>& pixels() const { return pixels_; }
  std::vector<Rgb>& pixels() { return pixels_; }
  const Rgb& at(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  Rgb& at(int row, int col) {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }

  bool operator==(const ImageSample&) const = default;

 private:
  int height_;
  int width_;
  std::vector<Rgb> pixels_;
};

using Sample = std::variant<TabularSample, TextSample, ImageSample>;

TaskKind task_of(const Sample& sample);

// Checks value count against the schema and cell types against column kinds.
// Missing cells are allowed unless `require_complete` is set.
void validate_tabular(const TabularSample& sample, const FeatureSchema& schema,
                      bool require_complete);

class Prediction {
 public:
  // Validates labels/probabilities (same length, nonnegative, sum to 1
  // within 1e-9) and computes the argmax with ties to the lowest index.
  Prediction(std::vector<std::string> class_labels,
             std::vector<double> probabilities);

  const std::vector<std::string>& class_labels() const { return labels_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  std::size_t predicted_index() const { return predicted_; }
  const std::string& predicted_label() const { return labels_[predicted_]; }
  double probability_of(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> probabilities_;
  std::size_t predicted_ = 0;
};

std::string argmax_class(const Prediction& prediction);

enum class Method { lime, kernel_shap, exact_shapley, lrp, permutation_importance };
enum class UnitKind { feature, token, segment };

std::string_view to_string(Method method);
std::string_view to_string(UnitKind kind);
Method parse_method(std::string_view text);
UnitKind parse_unit_kind(std::string_view text);

struct Attribution {
  Method method = Method::lime;
  std::string target_class;
  UnitKind unit_kind = UnitKind::feature;
  std::vector<std::string> units;
  std::vector<double> scores;
  std::optional<double> baseline_value;
  double prediction_value = 0.0;
  std::optional<std::uint64_t> seed;
  // Method-specific numbers, e.g. LRP's absorbed relevance.
  std::map<std::string, double> diagnostics;

  // Throws if units and scores differ in length or units repeat.
  void validate() const;
};

struct SegmentMap {
  int rows = 0;
  int cols = 0;
  int height = 0;
  int width = 0;
  std::vector<int> assignment;  // row-major, one id per pixel

  int segment_count() const { return rows * cols; }
  int segment_of(int row, int col) const {
    return assignment[static_cast<std::size_t>(row) * width + col];
  }
};

struct HumanAnnotation {
  std::string sample_id;
  std::set<std::string> relevant_units;
};

// Labelled samples of a single task kind. `schema` is set for tabular data.
struct Dataset {
  std::string id;
  TaskKind task = TaskKind::tabular;
  std::optional<FeatureSchema> schema;
  std::vector<Sample> samples;
  std::vector<std::string> labels;
  std::vector<std::string> class_labels;

  std::size_t size() const { return samples.size(); }
  std::size_t label_index(std::size_t row) const;
  void validate() const;
};

// Sorted distinct labels.
std::vector<std::string> distinct_labels(const std::vector<std::string>& labels);

// Deterministic holdout split: rows are shuffled with `seed` and the first
// ceil(fraction * n) become the holdout set.
struct DatasetSplit {
  Dataset train;
  Dataset holdout;
};
DatasetSplit split_holdout(const Dataset& dataset, double fraction, std::uint64_t seed);

}  // namespace xplain
