#pragma once

// Shared builders for handcrafted models, datasets and temporary data roots.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "xplain/core/random.hpp"
#include "xplain/core/types.hpp"
#include "xplain/models/featurizer.hpp"
#include "xplain/models/model.hpp"

namespace xplain::testing {

inline FeatureSchema numeric_schema(int columns) {
  std::vector<Column> cols;
  for (int i = 0; i < columns; ++i) cols.push_back({"x" + std::to_string(i), ColumnKind::numeric, {}});
  return FeatureSchema(std::move(cols));
}

// Identity featurization (means 0, stds 1) so model weights act on raw values.
inline Featurizer identity_featurizer(int columns, FeaturizationKind kind = FeaturizationKind::tabular_standardized,
                                      double fill = 0.0) {
  Featurizer::TabularState state;
  state.schema = numeric_schema(columns);
  state.means.assign(columns, 0.0);
  state.stds.assign(columns, 1.0);
  state.fill.assign(columns, Cell{fill});
  return Featurizer::tabular(kind, std::move(state));
}

inline std::vector<std::string> class_names(int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

inline double gaussian(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * gaussian(rng);
  return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  return random_matrix(rng, n, 1, scale).col(0);
}

inline LinearModel random_logistic(Rng& rng, int columns, int classes) {
  return LinearModel(identity_featurizer(columns), class_names(classes),
                     random_matrix(rng, classes, columns), random_vector(rng, classes, 0.5));
}

inline MLPModel random_mlp(Rng& rng, int columns, int classes, std::vector<int> hidden, bool zero_bias = false) {
  std::vector<DenseLayer> layers;
  int in = columns;
  hidden.push_back(classes);
  for (int out : hidden) {
    DenseLayer layer;
    layer.weights = random_matrix(rng, out, in, 1.0 / std::sqrt(static_cast<double>(in)));
    layer.biases = zero_bias ? Eigen::VectorXd::Zero(out) : random_vector(rng, out, 0.3);
    layers.push_back(std::move(layer));
    in = out;
  }
  return MLPModel(identity_featurizer(columns), class_names(classes), std::move(layers));
}

inline std::vector<double> random_distribution(Rng& rng, int classes) {
  std::vector<double> p(classes);
  double total = 0.0;
  for (double& v : p) total += (v = 0.05 + rng.uniform());
  for (double& v : p) v /= total;
  return p;
}

// Complete binary tree of the given depth with random splits on raw values.
inline TreeModel random_tree(Rng& rng, int columns, int classes, int depth) {
  std::vector<TreeNode> nodes;
  // Breadth-first layout: children of node i are 2i+1 and 2i+2.
  const int internal = (1 << depth) - 1;
  const int total = (1 << (depth + 1)) - 1;
  for (int i = 0; i < total; ++i) {
    TreeNode node;
    if (i < internal) {
      node.feature = static_cast<int>(rng.below(columns));
      node.threshold = gaussian(rng) * 0.7;
      node.left = 2 * i + 1;
      node.right = 2 * i + 2;
    } else {
      node.distribution = random_distribution(rng, classes);
    }
    nodes.push_back(std::move(node));
  }
  return TreeModel(identity_featurizer(columns, FeaturizationKind::tabular_raw), class_names(classes),
                   std::move(nodes));
}

inline TabularSample random_row(Rng& rng, int columns) {
  TabularSample s;
  for (int i = 0; i < columns; ++i) s.values.push_back(Cell{gaussian(rng)});
  return s;
}

inline Dataset numeric_dataset(std::string id, const std::vector<std::vector<double>>& rows,
                               const std::vector<std::string>& labels) {
  Dataset d;
  d.id = std::move(id);
  d.task = TaskKind::tabular;
  d.schema = numeric_schema(static_cast<int>(rows.front().size()));
  for (const auto& row : rows) {
    TabularSample s;
    for (double v : row) s.values.push_back(Cell{v});
    d.samples.push_back(std::move(s));
  }
  d.labels = labels;
  d.class_labels = distinct_labels(labels);
  return d;
}

// Two-class probe whose class-"on" probability is exactly linear in the raw
// feature values: p = 0.5 + sum_i coef_i * x_i.
class LinearProbe final : public Classifier {
 public:
  explicit LinearProbe(std::vector<double> coefficients)
      : coefficients_(std::move(coefficients)),
        featurizer_(identity_featurizer(static_cast<int>(coefficients_.size()))),
        labels_{"off", "on"} {}

  TaskKind task() const override { return TaskKind::tabular; }
  const std::vector<std::string>& class_labels() const override { return labels_; }
  Prediction predict_proba(const Sample& sample) const override {
    const Eigen::VectorXd x = featurizer_.transform(sample);
    double p = 0.5;
    for (std::size_t i = 0; i < coefficients_.size(); ++i) p += coefficients_[i] * x[static_cast<Eigen::Index>(i)];
    return Prediction(labels_, {1.0 - p, p});
  }

 private:
  std::vector<double> coefficients_;
  Featurizer featurizer_;
  std::vector<std::string> labels_;
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("xplain-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Copy of the bundled data root, so tests may add models freely.
inline std::unique_ptr<TempDir> copy_data_root(const std::string& tag) {
  auto dir = std::make_unique<TempDir>(tag);
  std::filesystem::copy(XPLAIN_TEST_DATA_DIR, dir->path() / "data",
                        std::filesystem::copy_options::recursive);
  return dir;
}

}  // namespace xplain::testing
