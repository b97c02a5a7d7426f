#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xplain/core/types.hpp"

namespace xplain {

enum class FeaturizationKind {
  tabular_standardized,  // standardized numerics + one-hot categoricals
  tabular_raw,           // raw numerics, booleans as 0/1, category indices (trees)
  bag_of_words,
  image_patch_means,
};

std::string_view to_string(FeaturizationKind kind);
FeaturizationKind parse_featurization_kind(std::string_view text);

// Maps samples of one task kind to dense feature vectors. Fitted on training
// data only; carries the imputation values that also serve as the tabular
// explanation baseline.
class Featurizer {
 public:
  struct TabularState {
    FeatureSchema schema;
    std::vector<double> means;  // numeric/boolean columns; 0 for categorical
    std::vector<double> stds;   // zero stds replaced by 1
    std::vector<Cell> fill;     // per-column training mean (numeric) / mode
  };
  struct TextState {
    std::vector<std::string> vocabulary;  // sorted
  };
  struct ImageState {
    int grid_rows = 4;
    int grid_cols = 4;
    Rgb mean_color;  // dataset mean, rounded per channel
  };

  static Featurizer fit_tabular(const Dataset& dataset, bool raw);
  static Featurizer fit_text(const Dataset& dataset);
  static Featurizer fit_image(const Dataset& dataset, int grid_rows, int grid_cols);
  static Featurizer fit(const Dataset& dataset, FeaturizationKind kind, int image_grid = 4);

  // Direct construction, used by deserialization and handcrafted models.
  static Featurizer tabular(FeaturizationKind kind, TabularState state);
  static Featurizer text(std::vector<std::string> vocabulary);
  static Featurizer image(ImageState state);

  FeaturizationKind kind() const { return kind_; }
  TaskKind task() const;
  std::size_t dimension() const { return dimension_; }

  const TabularState& tabular_state() const;
  const TextState& text_state() const;
  const ImageState& image_state() const;

  Eigen::VectorXd transform(const Sample& sample) const;

  // Names of the feature coordinates, e.g. "WindDir=N" or "seg3.g".
  std::vector<std::string> feature_names() const;

  // For tabular data: fills missing cells with the stored imputation values.
  Dataset impute(const Dataset& dataset) const;
  TabularSample impute(const TabularSample& sample) const;

  bool operator==(const Featurizer&) const;

 private:
  Featurizer() = default;
  void compute_dimension();

  FeaturizationKind kind_ = FeaturizationKind::tabular_standardized;
  TabularState tabular_;
  TextState text_;
  ImageState image_;
  std::size_t dimension_ = 0;
};

}  // namespace xplain
