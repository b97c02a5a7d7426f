#include "xplain/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "xplain/core/error.hpp"
#include "xplain/core/random.hpp"

namespace xplain {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::tabular: return "tabular";
    case TaskKind::text: return "text";
    case TaskKind::image: return "image";
  }
  return "tabular";
}

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::boolean: return "boolean";
  }
  return "numeric";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "tabular") return TaskKind::tabular;
  if (text == "text") return TaskKind::text;
  if (text == "image") return TaskKind::image;
  fail(ErrorCode::invalid_argument, "unknown task kind '" + std::string(text) + "'");
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::numeric;
  if (text == "categorical") return ColumnKind::categorical;
  if (text == "boolean") return ColumnKind::boolean;
  fail(ErrorCode::invalid_argument, "unknown column kind '" + std::string(text) + "'");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::lime: return "lime";
    case Method::kernel_shap: return "kernel_shap";
    case Method::exact_shapley: return "exact_shapley";
    case Method::lrp: return "lrp";
    case Method::permutation_importance: return "permutation_importance";
  }
  return "lime";
}

std::string_view to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::feature: return "feature";
    case UnitKind::token: return "token";
    case UnitKind::segment: return "segment";
  }
  return "feature";
}

Method parse_method(std::string_view text) {
  if (text == "lime") return Method::lime;
  if (text == "kernel_shap" || text == "shap") return Method::kernel_shap;
  if (text == "exact_shapley") return Method::exact_shapley;
  if (text == "lrp") return Method::lrp;
  if (text == "permutation_importance") return Method::permutation_importance;
  fail(ErrorCode::invalid_argument, "unknown method '" + std::string(text) + "'");
}

UnitKind parse_unit_kind(std::string_view text) {
  if (text == "feature") return UnitKind::feature;
  if (text == "token") return UnitKind::token;
  if (text == "segment") return UnitKind::segment;
  fail(ErrorCode::invalid_argument, "unknown unit kind '" + std::string(text) + "'");
}

FeatureSchema::FeatureSchema(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::unordered_set<std::string> seen;
  for (const Column& column : columns_) {
    require(!column.name.empty(), ErrorCode::invalid_argument, "column name must not be empty");
    require(seen.insert(column.name).second, ErrorCode::invalid_argument,
            "duplicate column name '" + column.name + "'");
    if (column.kind == ColumnKind::categorical) {
      require(!column.categories.empty(), ErrorCode::invalid_argument,
              "categorical column '" + column.name + "' has no categories");
      std::unordered_set<std::string> cats(column.categories.begin(), column.categories.end());
      require(cats.size() == column.categories.size(), ErrorCode::invalid_argument,
              "categorical column '" + column.name + "' repeats a category");
    }
  }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

ImageSample::ImageSample(int height, int width, std::vector<Rgb> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  require(height >= 1 && width >= 1, ErrorCode::invalid_argument,
          "image height and width must be >= 1");
  require(pixels_.size() == static_cast<std::size_t>(height) * width,
          ErrorCode::invalid_argument,
          "image pixel count " + std::to_string(pixels_.size()) + " != " +
              std::to_string(height) + "x" + std::to_string(width));
}

ImageSample::ImageSample(int height, int width, Rgb fill)
    : ImageSample(height, width,
                  std::vector<Rgb>(static_cast<std::size_t>(std::max(height, 0)) *
                                       static_cast<std::size_t>(std::max(width, 0)),
                                   fill)) {}

TaskKind task_of(const Sample& sample) {
  switch (sample.index()) {
    case 0: return TaskKind::tabular;
    case 1: return TaskKind::text;
    default: return TaskKind::image;
  }
}

void validate_tabular(const TabularSample& sample, const FeatureSchema& schema,
                      bool require_complete) {
  require(sample.values.size() == schema.size(), ErrorCode::invalid_argument,
          "tabular sample has " + std::to_string(sample.values.size()) +
              " values but the schema has " + std::to_string(schema.size()) + " columns");
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const Column& column = schema.column(i);
    const Cell& cell = sample.values[i];
    if (is_missing(cell)) {
      require(!require_complete, ErrorCode::invalid_argument,
              "missing value in column '" + column.name + "'");
      continue;
    }
    if (column.kind == ColumnKind::categorical) {
      require(std::holds_alternative<std::string>(cell), ErrorCode::invalid_argument,
              "column '" + column.name + "' expects a category");
    } else {
      require(std::holds_alternative<double>(cell), ErrorCode::invalid_argument,
              "column '" + column.name + "' expects a number");
    }
  }
}

Prediction::Prediction(std::vector<std::string> class_labels, std::vector<double> probabilities)
    : labels_(std::move(class_labels)), probabilities_(std::move(probabilities)) {
  require(!labels_.empty(), ErrorCode::internal, "prediction without classes");
  require(labels_.size() == probabilities_.size(), ErrorCode::internal,
          "prediction labels/probabilities length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    const double p = probabilities_[i];
    require(std::isfinite(p) && p >= 0.0, ErrorCode::internal,
            "prediction probability is negative or non-finite");
    total += p;
    if (p > probabilities_[predicted_]) predicted_ = i;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::internal,
          "prediction probabilities do not sum to 1");
}

double Prediction::probability_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return probabilities_[i];
  }
  fail(ErrorCode::invalid_argument, "unknown class label '" + std::string(label) + "'");
}

std::string argmax_class(const Prediction& prediction) { return prediction.predicted_label(); }

void Attribution::validate() const {
  require(units.size() == scores.size(), ErrorCode::internal,
          "attribution units and scores differ in length");
  std::unordered_set<std::string> seen(units.begin(), units.end());
  require(seen.size() == units.size(), ErrorCode::internal,
          "attribution unit identifiers are not unique");
}

std::size_t Dataset::label_index(std::size_t row) const {
  const std::string& label = labels.at(row);
  auto it = std::find(class_labels.begin(), class_labels.end(), label);
  require(it != class_labels.end(), ErrorCode::invalid_argument,
          "label '" + label + "' is not a known class");
  return static_cast<std::size_t>(it - class_labels.begin());
}

void Dataset::validate() const {
  require(samples.size() == labels.size(), ErrorCode::invalid_argument,
          "dataset samples and labels differ in length");
  for (const Sample& sample : samples) {
    require(task_of(sample) == task, ErrorCode::invalid_argument,
            "dataset '" + id + "' mixes sample kinds");
    if (task == TaskKind::tabular) {
      require(schema.has_value(), ErrorCode::invalid_argument, "tabular dataset without schema");
      validate_tabular(std::get<TabularSample>(sample), *schema, false);
    }
  }
  std::unordered_set<std::string> classes(class_labels.begin(), class_labels.end());
  for (const std::string& label : labels) {
    require(classes.count(label) > 0, ErrorCode::invalid_argument,
            "label '" + label + "' missing from class list");
  }
}

std::vector<std::string> distinct_labels(const std::vector<std::string>& labels) {
  std::vector<std::string> out(labels.begin(), labels.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DatasetSplit split_holdout(const Dataset& dataset, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::invalid_argument,
          "holdout fraction must be in (0, 1)");
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, {0x686f6c64u});
  rng.shuffle(order);
  const auto holdout_n =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(dataset.size())));

  DatasetSplit split;
  for (Dataset* part : {&split.train, &split.holdout}) {
    part->id = dataset.id;
    part->task = dataset.task;
    part->schema = dataset.schema;
    part->class_labels = dataset.class_labels;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    Dataset& part = i < holdout_n ? split.holdout : split.train;
    part.samples.push_back(dataset.samples[order[i]]);
    part.labels.push_back(dataset.labels[order[i]]);
  }
  return split;
}

}  // namespace xplain
