#include "xplain/models/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xplain/core/error.hpp"
#include "xplain/core/random.hpp"

namespace xplain {

void TrainConfig::validate() const {
  require(std::isfinite(learning_rate) && learning_rate > 0.0, ErrorCode::invalid_argument,
          "learning_rate must be > 0");
  require(epochs >= 1, ErrorCode::invalid_argument, "epochs must be >= 1");
  for (int h : hidden_sizes) {
    require(h >= 1, ErrorCode::invalid_argument, "hidden sizes must be >= 1");
  }
  require(max_depth >= 1, ErrorCode::invalid_argument, "max_depth must be >= 1");
  require(min_leaf >= 1, ErrorCode::invalid_argument, "min_leaf must be >= 1");
  require(image_grid >= 1, ErrorCode::invalid_argument, "image_grid must be >= 1");
}

namespace {

struct Prepared {
  Featurizer featurizer;
  Eigen::MatrixXd features;  // N x F
  std::vector<int> labels;
};

void check_trainable(const Dataset& dataset) {
  require(dataset.size() > 0, ErrorCode::invalid_argument, "training dataset is empty");
  dataset.validate();
  require(dataset.class_labels.size() >= 2, ErrorCode::invalid_argument,
          "training needs at least two classes");
  std::vector<std::size_t> counts(dataset.class_labels.size(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) ++counts[dataset.label_index(i)];
  for (std::size_t c = 0; c < counts.size(); ++c) {
    require(counts[c] > 0, ErrorCode::invalid_argument,
            "class '" + dataset.class_labels[c] + "' has no training samples");
  }
}

Prepared prepare(const Dataset& dataset, FeaturizationKind kind, int image_grid) {
  check_trainable(dataset);
  Featurizer featurizer = Featurizer::fit(dataset, kind, image_grid);
  const Dataset* source = &dataset;
  Dataset imputed;
  if (dataset.task == TaskKind::tabular) {
    imputed = featurizer.impute(dataset);
    source = &imputed;
  }
  Eigen::MatrixXd features(static_cast<Eigen::Index>(source->size()),
                           static_cast<Eigen::Index>(featurizer.dimension()));
  std::vector<int> labels(source->size());
  for (std::size_t i = 0; i < source->size(); ++i) {
    features.row(static_cast<Eigen::Index>(i)) = featurizer.transform(source->samples[i]).transpose();
    labels[i] = static_cast<int>(source->label_index(i));
  }
  return {std::move(featurizer), std::move(features), std::move(labels)};
}

FeaturizationKind default_featurization(TaskKind task) {
  switch (task) {
    case TaskKind::text: return FeaturizationKind::bag_of_words;
    case TaskKind::image: return FeaturizationKind::image_patch_means;
    default: return FeaturizationKind::tabular_standardized;
  }
}

// Row-wise softmax in place; returns mean cross-entropy against `labels`.
double softmax_rows(Eigen::MatrixXd& logits, const std::vector<int>& labels) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(i).array() - top).exp().matrix();
    const double total = e.sum();
    loss += std::log(total) + top - logits(i, labels[static_cast<std::size_t>(i)]);
    logits.row(i) = e / total;
  }
  return loss / static_cast<double>(logits.rows());
}

Eigen::MatrixXd one_hot(const std::vector<int>& labels, Eigen::Index classes) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return y;
}

}  // namespace

LinearModel train_logistic(const Dataset& dataset, const TrainConfig& config, TrainingLog* log) {
  config.validate();
  Prepared data = prepare(dataset, default_featurization(dataset.task), config.image_grid);
  const auto classes = static_cast<Eigen::Index>(dataset.class_labels.size());
  const Eigen::MatrixXd& x = data.features;
  const Eigen::MatrixXd y = one_hot(data.labels, classes);
  const double n = static_cast<double>(x.rows());

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(classes, x.cols());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(classes);
  if (log) log->loss.clear();

  for (int epoch = 0; epoch <= config.epochs; ++epoch) {
    Eigen::MatrixXd p = x * w.transpose();
    p.rowwise() += b.transpose();
    const double loss = softmax_rows(p, data.labels);
    if (log) log->loss.push_back(loss);
    if (epoch == config.epochs) break;
    const Eigen::MatrixXd g = (p - y) / n;
    w -= config.learning_rate * (g.transpose() * x);
    b -= config.learning_rate * g.colwise().sum().transpose();
  }
  return LinearModel(std::move(data.featurizer), dataset.class_labels, std::move(w), std::move(b));
}

LossGradient mlp_loss_gradient(const std::vector<DenseLayer>& layers,
                               const Eigen::MatrixXd& features, const std::vector<int>& labels) {
  require(!layers.empty(), ErrorCode::invalid_argument, "MLP needs at least one layer");
  require(static_cast<std::size_t>(features.rows()) == labels.size() && features.rows() > 0,
          ErrorCode::invalid_argument, "features and labels differ in length");
  const std::size_t depth = layers.size();
  std::vector<Eigen::MatrixXd> inputs;   // input of each layer, N x in
  std::vector<Eigen::MatrixXd> pre;      // N x out
  inputs.reserve(depth);
  pre.reserve(depth);
  Eigen::MatrixXd a = features;
  for (std::size_t l = 0; l < depth; ++l) {
    inputs.push_back(a);
    Eigen::MatrixXd z = a * layers[l].weights.transpose();
    z.rowwise() += layers[l].biases.transpose();
    pre.push_back(z);
    a = (l + 1 < depth) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  LossGradient result;
  Eigen::MatrixXd p = a;
  result.loss = softmax_rows(p, labels);
  const double n = static_cast<double>(features.rows());
  Eigen::MatrixXd delta = (p - one_hot(labels, p.cols())) / n;

  result.gradient.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    result.gradient[l].weights = delta.transpose() * inputs[l];
    result.gradient[l].biases = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd upstream = delta * layers[l].weights;
      delta = upstream.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return result;
}

MLPModel train_mlp(const Dataset& dataset, const TrainConfig& config, TrainingLog* log) {
  config.validate();
  require(!config.hidden_sizes.empty(), ErrorCode::invalid_argument,
          "train_mlp needs at least one hidden layer");
  Prepared data = prepare(dataset, default_featurization(dataset.task), config.image_grid);
  const auto classes = static_cast<Eigen::Index>(dataset.class_labels.size());

  Rng rng(config.seed, {0x6d6c70u});
  std::vector<DenseLayer> layers;
  Eigen::Index fan_in = data.features.cols();
  std::vector<int> widths = config.hidden_sizes;
  widths.push_back(static_cast<int>(classes));
  for (int width : widths) {
    DenseLayer layer;
    layer.weights.resize(width, fan_in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = (2.0 * rng.uniform() - 1.0) * scale;
      }
    }
    layer.biases = Eigen::VectorXd::Zero(width);
    layers.push_back(std::move(layer));
    fan_in = width;
  }

  if (log) log->loss.clear();
  for (int epoch = 0; epoch <= config.epochs; ++epoch) {
    LossGradient step = mlp_loss_gradient(layers, data.features, data.labels);
    if (log) log->loss.push_back(step.loss);
    if (epoch == config.epochs) break;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].weights -= config.learning_rate * step.gradient[l].weights;
      layers[l].biases -= config.learning_rate * step.gradient[l].biases;
    }
  }
  return MLPModel(std::move(data.featurizer), dataset.class_labels, std::move(layers));
}

namespace {

constexpr double kGainEpsilon = 1e-12;
constexpr int kMaxExhaustiveCategories = 10;

double gini(const std::vector<double>& counts, double total) {
  if (total <= 0.0) return 0.0;
  double sum_sq = 0.0;
  for (double c : counts) sum_sq += (c / total) * (c / total);
  return 1.0 - sum_sq;
}

struct SplitCandidate {
  bool found = false;
  double impurity = 0.0;  // weighted child impurity
  int feature = -1;
  bool categorical = false;
  double threshold = 0.0;
  std::vector<int> left_categories;
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<int>& y, std::size_t classes,
              std::vector<int> category_counts, const TrainConfig& config)
      : x_(x), y_(y), classes_(classes), category_counts_(std::move(category_counts)),
        config_(config) {}

  int build(const std::vector<int>& rows, int depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::vector<double> counts = class_counts(rows);
    const double n = static_cast<double>(rows.size());
    const double parent = gini(counts, n);

    SplitCandidate split;
    const bool pure = parent <= 0.0;
    if (!pure && depth < config_.max_depth &&
        rows.size() >= 2 * static_cast<std::size_t>(config_.min_leaf)) {
      split = best_split(rows, parent);
    }
    if (!split.found) {
      TreeNode& leaf = nodes_[index];
      leaf.distribution.resize(classes_);
      for (std::size_t c = 0; c < classes_; ++c) leaf.distribution[c] = counts[c] / n;
      return index;
    }

    std::vector<int> left_rows, right_rows;
    for (int r : rows) (goes_left(split, r) ? left_rows : right_rows).push_back(r);
    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    TreeNode& node = nodes_[index];
    node.feature = split.feature;
    node.categorical = split.categorical;
    node.threshold = split.threshold;
    node.left_categories = std::move(split.left_categories);
    node.left = left;
    node.right = right;
    return index;
  }

  std::vector<TreeNode> take_nodes() { return std::move(nodes_); }

 private:
  std::vector<double> class_counts(const std::vector<int>& rows) const {
    std::vector<double> counts(classes_, 0.0);
    for (int r : rows) counts[y_[r]] += 1.0;
    return counts;
  }

  bool goes_left(const SplitCandidate& split, int row) const {
    const double value = x_(row, split.feature);
    if (split.categorical) {
      return std::binary_search(split.left_categories.begin(), split.left_categories.end(),
                                static_cast<int>(value));
    }
    return value <= split.threshold;
  }

  // Features are scanned in ascending order and candidates in ascending
  // threshold (or subset) order; a candidate replaces the incumbent only when
  // strictly better, so ties go to the lowest feature then lowest threshold.
  SplitCandidate best_split(const std::vector<int>& rows, double parent) const {
    SplitCandidate best;
    best.impurity = parent - kGainEpsilon;
    for (Eigen::Index f = 0; f < x_.cols(); ++f) {
      if (category_counts_[f] > 0) {
        scan_categorical(rows, static_cast<int>(f), best);
      } else {
        scan_numeric(rows, static_cast<int>(f), best);
      }
    }
    return best;
  }

  void consider(SplitCandidate& best, double impurity, int feature, bool categorical,
                double threshold, std::vector<int> left_categories) const {
    if (impurity < best.impurity - (best.found ? kGainEpsilon : 0.0)) {
      best.found = true;
      best.impurity = impurity;
      best.feature = feature;
      best.categorical = categorical;
      best.threshold = threshold;
      best.left_categories = std::move(left_categories);
    }
  }

  void scan_numeric(const std::vector<int>& rows, int feature, SplitCandidate& best) const {
    std::vector<int> order = rows;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return x_(a, feature) < x_(b, feature); });
    const double n = static_cast<double>(order.size());
    std::vector<double> left(classes_, 0.0);
    std::vector<double> right = class_counts(rows);
    const auto min_leaf = static_cast<std::size_t>(config_.min_leaf);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      left[y_[order[i]]] += 1.0;
      right[y_[order[i]]] -= 1.0;
      const double lo = x_(order[i], feature);
      const double hi = x_(order[i + 1], feature);
      if (!(lo < hi)) continue;
      const std::size_t n_left = i + 1;
      if (n_left < min_leaf || order.size() - n_left < min_leaf) continue;
      const double nl = static_cast<double>(n_left);
      const double nr = n - nl;
      const double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
      consider(best, impurity, feature, false, lo + (hi - lo) / 2.0, {});
    }
  }

  void scan_categorical(const std::vector<int>& rows, int feature, SplitCandidate& best) const {
    const int total_categories = category_counts_[feature];
    std::vector<std::vector<double>> per_category(
        static_cast<std::size_t>(total_categories), std::vector<double>(classes_, 0.0));
    std::vector<double> sizes(static_cast<std::size_t>(total_categories), 0.0);
    for (int r : rows) {
      const int c = static_cast<int>(x_(r, feature));
      per_category[c][y_[r]] += 1.0;
      sizes[c] += 1.0;
    }
    std::vector<int> present;
    for (int c = 0; c < total_categories; ++c) {
      if (sizes[c] > 0.0) present.push_back(c);
    }
    const int k = static_cast<int>(present.size());
    if (k < 2) return;
    const double n = static_cast<double>(rows.size());

    auto evaluate = [&](const std::vector<int>& left_set) {
      std::vector<double> left(classes_, 0.0), right(classes_, 0.0);
      double nl = 0.0;
      for (int c : present) {
        const bool is_left = std::binary_search(left_set.begin(), left_set.end(), c);
        auto& side = is_left ? left : right;
        for (std::size_t j = 0; j < classes_; ++j) side[j] += per_category[c][j];
        if (is_left) nl += sizes[c];
      }
      const double nr = n - nl;
      if (nl < config_.min_leaf || nr < config_.min_leaf) return;
      const double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
      consider(best, impurity, feature, true, 0.0, left_set);
    };

    if (k <= kMaxExhaustiveCategories) {
      // Subsets containing the first present category; each partition once.
      const std::uint32_t limit = 1u << (k - 1);
      for (std::uint32_t m = 0; m + 1 < limit; ++m) {
        std::vector<int> left_set{present[0]};
        for (int bit = 0; bit < k - 1; ++bit) {
          if (m & (1u << bit)) left_set.push_back(present[bit + 1]);
        }
        evaluate(left_set);
      }
      return;
    }
    // Many categories: order by the share of the first class and try prefixes.
    std::vector<int> ordered = present;
    std::stable_sort(ordered.begin(), ordered.end(), [&](int a, int b) {
      return per_category[a][0] / sizes[a] < per_category[b][0] / sizes[b];
    });
    for (int prefix = 1; prefix < k; ++prefix) {
      std::vector<int> left_set(ordered.begin(), ordered.begin() + prefix);
      std::sort(left_set.begin(), left_set.end());
      evaluate(left_set);
    }
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& y_;
  std::size_t classes_;
  std::vector<int> category_counts_;
  const TrainConfig& config_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

TreeModel train_tree(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  const FeaturizationKind kind = dataset.task == TaskKind::tabular
                                     ? FeaturizationKind::tabular_raw
                                     : default_featurization(dataset.task);
  Prepared data = prepare(dataset, kind, config.image_grid);
  std::vector<int> category_counts(static_cast<std::size_t>(data.features.cols()), 0);
  if (kind == FeaturizationKind::tabular_raw) {
    const FeatureSchema& schema = data.featurizer.tabular_state().schema;
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema.column(c).kind == ColumnKind::categorical) {
        category_counts[c] = static_cast<int>(schema.column(c).categories.size());
      }
    }
  }
  TreeBuilder builder(data.features, data.labels, dataset.class_labels.size(),
                      std::move(category_counts), config);
  std::vector<int> rows(data.labels.size());
  std::iota(rows.begin(), rows.end(), 0);
  builder.build(rows, 0);
  return TreeModel(std::move(data.featurizer), dataset.class_labels, builder.take_nodes());
}

Model train_model(ModelKind kind, const Dataset& dataset, const TrainConfig& config) {
  switch (kind) {
    case ModelKind::logistic: return train_logistic(dataset, config);
    case ModelKind::mlp: return train_mlp(dataset, config);
    case ModelKind::tree: return train_tree(dataset, config);
  }
  fail(ErrorCode::internal, "unreachable model kind");
}

double evaluate_accuracy(const Classifier& model, const Dataset& dataset) {
  require(dataset.size() > 0, ErrorCode::invalid_argument, "cannot score an empty dataset");
  require(dataset.samples.size() == dataset.labels.size(), ErrorCode::invalid_argument,
          "dataset samples and labels differ in length");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (argmax_class(model.predict_proba(dataset.samples[i])) == dataset.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace xplain
