#include "xplain/models/featurizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "xplain/core/error.hpp"
#include "xplain/core/image.hpp"
#include "xplain/core/text.hpp"

namespace xplain {

std::string_view to_string(FeaturizationKind kind) {
  switch (kind) {
    case FeaturizationKind::tabular_standardized: return "tabular_standardized";
    case FeaturizationKind::tabular_raw: return "tabular_raw";
    case FeaturizationKind::bag_of_words: return "bag_of_words";
    case FeaturizationKind::image_patch_means: return "image_patch_means";
  }
  return "tabular_standardized";
}

FeaturizationKind parse_featurization_kind(std::string_view text) {
  if (text == "tabular_standardized") return FeaturizationKind::tabular_standardized;
  if (text == "tabular_raw") return FeaturizationKind::tabular_raw;
  if (text == "bag_of_words") return FeaturizationKind::bag_of_words;
  if (text == "image_patch_means") return FeaturizationKind::image_patch_means;
  fail(ErrorCode::invalid_argument, "unknown featurization '" + std::string(text) + "'");
}

Featurizer Featurizer::fit_tabular(const Dataset& dataset, bool raw) {
  require(dataset.task == TaskKind::tabular && dataset.schema.has_value(),
          ErrorCode::invalid_argument, "tabular featurization needs a tabular dataset");
  const FeatureSchema& schema = *dataset.schema;
  TabularState state;
  state.schema = schema;
  state.means.assign(schema.size(), 0.0);
  state.stds.assign(schema.size(), 1.0);
  state.fill.assign(schema.size(), Cell{});

  for (std::size_t c = 0; c < schema.size(); ++c) {
    const Column& column = schema.column(c);
    if (column.kind == ColumnKind::categorical) {
      std::vector<std::size_t> counts(column.categories.size(), 0);
      for (const Sample& sample : dataset.samples) {
        const Cell& cell = std::get<TabularSample>(sample).values[c];
        if (const auto* s = std::get_if<std::string>(&cell)) {
          auto it = std::find(column.categories.begin(), column.categories.end(), *s);
          if (it != column.categories.end()) ++counts[it - column.categories.begin()];
        }
      }
      const auto mode = std::max_element(counts.begin(), counts.end()) - counts.begin();
      state.fill[c] = column.categories[mode];
      continue;
    }
    std::vector<double> values;
    for (const Sample& sample : dataset.samples) {
      const Cell& cell = std::get<TabularSample>(sample).values[c];
      if (const auto* v = std::get_if<double>(&cell)) values.push_back(*v);
    }
    require(!values.empty(), ErrorCode::invalid_argument,
            "column '" + column.name + "' has no observed values");
    // Sorted accumulation keeps the fitted state independent of row order.
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double std = std::sqrt(ss / static_cast<double>(values.size()));
    state.means[c] = mean;
    state.stds[c] = std > 0.0 ? std : 1.0;
    if (column.kind == ColumnKind::boolean) {
      const auto ones = std::count(values.begin(), values.end(), 1.0);
      state.fill[c] = 2 * static_cast<std::size_t>(ones) > values.size() ? 1.0 : 0.0;
    } else {
      state.fill[c] = mean;
    }
  }
  return tabular(raw ? FeaturizationKind::tabular_raw : FeaturizationKind::tabular_standardized,
                 std::move(state));
}

Featurizer Featurizer::fit_text(const Dataset& dataset) {
  require(dataset.task == TaskKind::text, ErrorCode::invalid_argument,
          "bag-of-words featurization needs a text dataset");
  std::set<std::string> vocabulary;
  for (const Sample& sample : dataset.samples) {
    for (Token& token : tokenize(std::get<TextSample>(sample).raw)) {
      vocabulary.insert(std::move(token.text));
    }
  }
  return text(std::vector<std::string>(vocabulary.begin(), vocabulary.end()));
}

Featurizer Featurizer::fit_image(const Dataset& dataset, int grid_rows, int grid_cols) {
  require(dataset.task == TaskKind::image, ErrorCode::invalid_argument,
          "patch-mean featurization needs an image dataset");
  double sums[3] = {0.0, 0.0, 0.0};
  double count = 0.0;
  for (const Sample& sample : dataset.samples) {
    for (const Rgb& px : std::get<ImageSample>(sample).pixels()) {
      sums[0] += px.r;
      sums[1] += px.g;
      sums[2] += px.b;
      count += 1.0;
    }
  }
  require(count > 0.0, ErrorCode::invalid_argument, "image dataset is empty");
  auto channel = [&](int i) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(sums[i] / count), 0L, 255L));
  };
  ImageState state;
  state.grid_rows = grid_rows;
  state.grid_cols = grid_cols;
  state.mean_color = {channel(0), channel(1), channel(2)};
  return image(state);
}

Featurizer Featurizer::fit(const Dataset& dataset, FeaturizationKind kind, int image_grid) {
  switch (kind) {
    case FeaturizationKind::tabular_standardized: return fit_tabular(dataset, false);
    case FeaturizationKind::tabular_raw: return fit_tabular(dataset, true);
    case FeaturizationKind::bag_of_words: return fit_text(dataset);
    case FeaturizationKind::image_patch_means: return fit_image(dataset, image_grid, image_grid);
  }
  fail(ErrorCode::internal, "unreachable featurization kind");
}

Featurizer Featurizer::tabular(FeaturizationKind kind, TabularState state) {
  require(kind == FeaturizationKind::tabular_standardized || kind == FeaturizationKind::tabular_raw,
          ErrorCode::invalid_argument, "not a tabular featurization");
  const std::size_t n = state.schema.size();
  require(n >= 1, ErrorCode::invalid_argument, "tabular featurization needs >= 1 column");
  require(state.means.size() == n && state.stds.size() == n && state.fill.size() == n,
          ErrorCode::invalid_argument, "tabular featurization state has wrong length");
  for (double s : state.stds) {
    require(std::isfinite(s) && s > 0.0, ErrorCode::invalid_argument,
            "standardization std must be positive");
  }
  TabularSample fill{state.fill};
  validate_tabular(fill, state.schema, true);
  Featurizer f;
  f.kind_ = kind;
  f.tabular_ = std::move(state);
  f.compute_dimension();
  // Imputation values must themselves be encodable.
  for (std::size_t c = 0; c < n; ++c) {
    const Column& column = f.tabular_.schema.column(c);
    if (column.kind == ColumnKind::categorical) {
      const auto& s = std::get<std::string>(f.tabular_.fill[c]);
      require(std::find(column.categories.begin(), column.categories.end(), s) !=
                  column.categories.end(),
              ErrorCode::invalid_argument, "fill category not in column '" + column.name + "'");
    }
  }
  return f;
}

Featurizer Featurizer::text(std::vector<std::string> vocabulary) {
  require(!vocabulary.empty(), ErrorCode::invalid_argument, "vocabulary must not be empty");
  require(std::is_sorted(vocabulary.begin(), vocabulary.end()) &&
              std::adjacent_find(vocabulary.begin(), vocabulary.end()) == vocabulary.end(),
          ErrorCode::invalid_argument, "vocabulary must be sorted and unique");
  Featurizer f;
  f.kind_ = FeaturizationKind::bag_of_words;
  f.text_.vocabulary = std::move(vocabulary);
  f.compute_dimension();
  return f;
}

Featurizer Featurizer::image(ImageState state) {
  require(state.grid_rows >= 1 && state.grid_cols >= 1, ErrorCode::invalid_argument,
          "image grid must be at least 1x1");
  Featurizer f;
  f.kind_ = FeaturizationKind::image_patch_means;
  f.image_ = state;
  f.compute_dimension();
  return f;
}

void Featurizer::compute_dimension() {
  switch (kind_) {
    case FeaturizationKind::tabular_standardized: {
      std::size_t d = 0;
      for (const Column& column : tabular_.schema.columns()) {
        d += column.kind == ColumnKind::categorical ? column.categories.size() : 1;
      }
      dimension_ = d;
      break;
    }
    case FeaturizationKind::tabular_raw: dimension_ = tabular_.schema.size(); break;
    case FeaturizationKind::bag_of_words: dimension_ = text_.vocabulary.size(); break;
    case FeaturizationKind::image_patch_means:
      dimension_ = static_cast<std::size_t>(image_.grid_rows) * image_.grid_cols * 3;
      break;
  }
}

TaskKind Featurizer::task() const {
  switch (kind_) {
    case FeaturizationKind::bag_of_words: return TaskKind::text;
    case FeaturizationKind::image_patch_means: return TaskKind::image;
    default: return TaskKind::tabular;
  }
}

const Featurizer::TabularState& Featurizer::tabular_state() const {
  require(task() == TaskKind::tabular, ErrorCode::internal, "not a tabular featurizer");
  return tabular_;
}

const Featurizer::TextState& Featurizer::text_state() const {
  require(task() == TaskKind::text, ErrorCode::internal, "not a text featurizer");
  return text_;
}

const Featurizer::ImageState& Featurizer::image_state() const {
  require(task() == TaskKind::image, ErrorCode::internal, "not an image featurizer");
  return image_;
}

Eigen::VectorXd Featurizer::transform(const Sample& sample) const {
  require(task_of(sample) == task(), ErrorCode::invalid_argument,
          "sample kind '" + std::string(to_string(task_of(sample))) +
              "' does not match model input kind '" + std::string(to_string(task())) + "'");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));

  switch (kind_) {
    case FeaturizationKind::tabular_standardized:
    case FeaturizationKind::tabular_raw: {
      const auto& row = std::get<TabularSample>(sample);
      validate_tabular(row, tabular_.schema, true);
      const bool raw = kind_ == FeaturizationKind::tabular_raw;
      Eigen::Index offset = 0;
      for (std::size_t c = 0; c < tabular_.schema.size(); ++c) {
        const Column& column = tabular_.schema.column(c);
        if (column.kind == ColumnKind::categorical) {
          const auto& value = std::get<std::string>(row.values[c]);
          auto it = std::find(column.categories.begin(), column.categories.end(), value);
          require(it != column.categories.end(), ErrorCode::invalid_argument,
                  "unknown category '" + value + "' in column '" + column.name + "'");
          const auto index = it - column.categories.begin();
          if (raw) {
            x[offset++] = static_cast<double>(index);
          } else {
            x[offset + index] = 1.0;
            offset += static_cast<Eigen::Index>(column.categories.size());
          }
          continue;
        }
        const double value = std::get<double>(row.values[c]);
        require(std::isfinite(value), ErrorCode::invalid_argument,
                "non-finite value in column '" + column.name + "'");
        if (column.kind == ColumnKind::boolean) {
          require(value == 0.0 || value == 1.0, ErrorCode::invalid_argument,
                  "boolean column '" + column.name + "' expects 0/1");
        }
        x[offset++] = raw ? value : (value - tabular_.means[c]) / tabular_.stds[c];
      }
      break;
    }
    case FeaturizationKind::bag_of_words: {
      const auto& vocab = text_.vocabulary;
      for (const Token& token : tokenize(std::get<TextSample>(sample).raw)) {
        auto it = std::lower_bound(vocab.begin(), vocab.end(), token.text);
        if (it != vocab.end() && *it == token.text) x[it - vocab.begin()] += 1.0;
      }
      break;
    }
    case FeaturizationKind::image_patch_means: {
      const auto& img = std::get<ImageSample>(sample);
      const SegmentMap map = segment_grid(img, image_.grid_rows, image_.grid_cols);
      std::vector<double> counts(static_cast<std::size_t>(map.segment_count()), 0.0);
      for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
          const int s = map.segment_of(r, c);
          const Rgb& px = img.at(r, c);
          x[3 * s] += px.r;
          x[3 * s + 1] += px.g;
          x[3 * s + 2] += px.b;
          counts[s] += 1.0;
        }
      }
      for (int s = 0; s < map.segment_count(); ++s) {
        for (int ch = 0; ch < 3; ++ch) x[3 * s + ch] /= counts[s] * 255.0;
      }
      break;
    }
  }
  return x;
}

std::vector<std::string> Featurizer::feature_names() const {
  std::vector<std::string> names;
  names.reserve(dimension_);
  switch (kind_) {
    case FeaturizationKind::tabular_standardized:
      for (const Column& column : tabular_.schema.columns()) {
        if (column.kind == ColumnKind::categorical) {
          for (const std::string& cat : column.categories) names.push_back(column.name + "=" + cat);
        } else {
          names.push_back(column.name);
        }
      }
      break;
    case FeaturizationKind::tabular_raw:
      for (const Column& column : tabular_.schema.columns()) names.push_back(column.name);
      break;
    case FeaturizationKind::bag_of_words: names = text_.vocabulary; break;
    case FeaturizationKind::image_patch_means: {
      const int segments = image_.grid_rows * image_.grid_cols;
      for (int s = 0; s < segments; ++s) {
        for (const char* ch : {".r", ".g", ".b"}) names.push_back(segment_unit_id(s) + ch);
      }
      break;
    }
  }
  return names;
}

TabularSample Featurizer::impute(const TabularSample& sample) const {
  const TabularState& state = tabular_state();
  validate_tabular(sample, state.schema, false);
  TabularSample out = sample;
  for (std::size_t c = 0; c < out.values.size(); ++c) {
    if (is_missing(out.values[c])) out.values[c] = state.fill[c];
  }
  return out;
}

Dataset Featurizer::impute(const Dataset& dataset) const {
  Dataset out = dataset;
  for (Sample& sample : out.samples) sample = impute(std::get<TabularSample>(sample));
  return out;
}

bool Featurizer::operator==(const Featurizer& other) const {
  if (kind_ != other.kind_) return false;
  switch (task()) {
    case TaskKind::tabular:
      return tabular_.schema == other.tabular_.schema && tabular_.means == other.tabular_.means &&
             tabular_.stds == other.tabular_.stds && tabular_.fill == other.tabular_.fill;
    case TaskKind::text: return text_.vocabulary == other.text_.vocabulary;
    case TaskKind::image:
      return image_.grid_rows == other.image_.grid_rows &&
             image_.grid_cols == other.image_.grid_cols &&
             image_.mean_color == other.image_.mean_color;
  }
  return false;
}

}  // namespace xplain
