#include "xplain/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xplain/core/error.hpp"

namespace xplain {

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  require(logits.size() > 0, ErrorCode::internal, "softmax of empty vector");
  require(logits.allFinite(), ErrorCode::invalid_argument, "non-finite logits");
  const double top = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

Prediction make_prediction(const std::vector<std::string>& labels, const Eigen::VectorXd& probs) {
  return Prediction(labels, std::vector<double>(probs.data(), probs.data() + probs.size()));
}

namespace {

void check_labels(const std::vector<std::string>& labels) {
  require(labels.size() >= 2, ErrorCode::invalid_argument, "a classifier needs >= 2 classes");
  std::set<std::string> unique(labels.begin(), labels.end());
  require(unique.size() == labels.size(), ErrorCode::invalid_argument,
          "class labels must be unique");
}

}  // namespace

LinearModel::LinearModel(Featurizer featurizer, std::vector<std::string> class_labels,
                         Eigen::MatrixXd weights, Eigen::VectorXd bias)
    : featurizer_(std::move(featurizer)),
      labels_(std::move(class_labels)),
      weights_(std::move(weights)),
      bias_(std::move(bias)) {
  check_labels(labels_);
  const auto classes = static_cast<Eigen::Index>(labels_.size());
  require(weights_.rows() == classes && bias_.size() == classes, ErrorCode::invalid_argument,
          "linear model rows must equal the class count");
  require(weights_.cols() == static_cast<Eigen::Index>(featurizer_.dimension()),
          ErrorCode::invalid_argument, "linear model columns must equal the feature count");
  require(weights_.allFinite() && bias_.allFinite(), ErrorCode::invalid_argument,
          "linear model parameters must be finite");
}

Eigen::VectorXd LinearModel::logits(const Sample& sample) const {
  return weights_ * featurizer_.transform(sample) + bias_;
}

Prediction LinearModel::predict_proba(const Sample& sample) const {
  return make_prediction(labels_, softmax(logits(sample)));
}

MLPModel::MLPModel(Featurizer featurizer, std::vector<std::string> class_labels,
                   std::vector<DenseLayer> layers)
    : featurizer_(std::move(featurizer)),
      labels_(std::move(class_labels)),
      layers_(std::move(layers)) {
  check_labels(labels_);
  require(!layers_.empty(), ErrorCode::invalid_argument, "MLP needs at least one layer");
  auto width = static_cast<Eigen::Index>(featurizer_.dimension());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    require(layer.weights.cols() == width, ErrorCode::invalid_argument,
            "MLP layer " + std::to_string(l) + " input width does not chain");
    require(layer.biases.size() == layer.weights.rows(), ErrorCode::invalid_argument,
            "MLP layer " + std::to_string(l) + " bias length mismatch");
    require(layer.weights.allFinite() && layer.biases.allFinite(), ErrorCode::invalid_argument,
            "MLP parameters must be finite");
    width = layer.weights.rows();
  }
  require(width == static_cast<Eigen::Index>(labels_.size()), ErrorCode::invalid_argument,
          "MLP output width must equal the class count");
}

ActivationTrace MLPModel::trace_features(const Eigen::VectorXd& features) const {
  ActivationTrace trace;
  trace.input = features;
  Eigen::VectorXd a = features;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    trace.layer_inputs.push_back(a);
    Eigen::VectorXd z = layers_[l].weights * a + layers_[l].biases;
    trace.pre_activations.push_back(z);
    if (l + 1 < layers_.size()) {
      a = z.cwiseMax(0.0);
    } else {
      a = z;
    }
    trace.post_activations.push_back(a);
  }
  trace.logits = a;
  return trace;
}

Eigen::VectorXd MLPModel::logits_from_features(const Eigen::VectorXd& features) const {
  Eigen::VectorXd a = features;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd z = layers_[l].weights * a + layers_[l].biases;
    a = (l + 1 < layers_.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

std::pair<Prediction, ActivationTrace> MLPModel::forward_with_trace(const Sample& sample) const {
  ActivationTrace trace = trace_features(featurizer_.transform(sample));
  require(trace.logits.allFinite(), ErrorCode::invalid_argument, "non-finite activations");
  Prediction prediction = make_prediction(labels_, softmax(trace.logits));
  return {std::move(prediction), std::move(trace)};
}

Prediction MLPModel::predict_proba(const Sample& sample) const {
  return make_prediction(labels_, softmax(logits_from_features(featurizer_.transform(sample))));
}

TreeModel::TreeModel(Featurizer featurizer, std::vector<std::string> class_labels,
                     std::vector<TreeNode> nodes)
    : featurizer_(std::move(featurizer)),
      labels_(std::move(class_labels)),
      nodes_(std::move(nodes)) {
  check_labels(labels_);
  require(!nodes_.empty(), ErrorCode::invalid_argument, "tree has no nodes");
  const auto n = static_cast<int>(nodes_.size());
  const auto dim = static_cast<int>(featurizer_.dimension());
  // Every non-root node must be referenced exactly once, and only by a lower
  // index (children are emitted after their parents), which rules out cycles.
  std::vector<int> parents(nodes_.size(), 0);
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) {
      require(node.distribution.size() == labels_.size(), ErrorCode::invalid_argument,
              "leaf " + std::to_string(i) + " distribution has wrong length");
      double total = 0.0;
      for (double p : node.distribution) {
        require(std::isfinite(p) && p >= 0.0, ErrorCode::invalid_argument,
                "leaf distribution entries must be nonnegative");
        total += p;
      }
      require(std::abs(total - 1.0) <= 1e-9, ErrorCode::invalid_argument,
              "leaf " + std::to_string(i) + " distribution does not sum to 1");
      continue;
    }
    require(node.feature < dim, ErrorCode::invalid_argument,
            "node " + std::to_string(i) + " splits on an unknown feature");
    for (int child : {node.left, node.right}) {
      require(child > i && child < n, ErrorCode::invalid_argument,
              "node " + std::to_string(i) + " has an invalid child");
      ++parents[child];
    }
    if (node.categorical) {
      require(featurizer_.kind() == FeaturizationKind::tabular_raw &&
                  featurizer_.tabular_state().schema.column(node.feature).kind ==
                      ColumnKind::categorical,
              ErrorCode::invalid_argument, "categorical split on a non-categorical feature");
    }
  }
  require(parents[0] == 0, ErrorCode::invalid_argument, "root must not have a parent");
  for (int i = 1; i < n; ++i) {
    require(parents[i] == 1, ErrorCode::invalid_argument,
            "node " + std::to_string(i) + " is not reachable exactly once");
  }
}

int TreeModel::leaf_for(const Eigen::VectorXd& features) const {
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const TreeNode& node = nodes_[index];
    const double value = features[node.feature];
    bool go_left;
    if (node.categorical) {
      const int category = static_cast<int>(value);
      go_left = std::binary_search(node.left_categories.begin(), node.left_categories.end(),
                                   category);
    } else {
      go_left = value <= node.threshold;
    }
    index = go_left ? node.left : node.right;
  }
  return index;
}

Prediction TreeModel::predict_proba(const Sample& sample) const {
  const TreeNode& leaf = nodes_[leaf_for(featurizer_.transform(sample))];
  return Prediction(labels_, leaf.distribution);
}

std::vector<int> TreeModel::used_features() const {
  std::set<int> used;
  for (const TreeNode& node : nodes_) {
    if (!node.is_leaf()) used.insert(node.feature);
  }
  return {used.begin(), used.end()};
}

int TreeModel::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes_[i].is_leaf()) {
      depth[nodes_[i].left] = depth[i] + 1;
      depth[nodes_[i].right] = depth[i] + 1;
    }
  }
  return deepest;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic: return "logistic";
    case ModelKind::mlp: return "mlp";
    case ModelKind::tree: return "tree";
  }
  return "logistic";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "logistic") return ModelKind::logistic;
  if (text == "mlp") return ModelKind::mlp;
  if (text == "tree") return ModelKind::tree;
  fail(ErrorCode::invalid_argument, "unknown model kind '" + std::string(text) + "'");
}

ModelKind kind_of(const Model& model) {
  switch (model.index()) {
    case 0: return ModelKind::logistic;
    case 1: return ModelKind::mlp;
    default: return ModelKind::tree;
  }
}

const Classifier& as_classifier(const Model& model) {
  return std::visit([](const auto& m) -> const Classifier& { return m; }, model);
}

const Featurizer& featurizer_of(const Model& model) {
  return std::visit([](const auto& m) -> const Featurizer& { return m.featurizer(); }, model);
}

}  // namespace xplain
