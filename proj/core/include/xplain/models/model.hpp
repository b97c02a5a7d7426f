#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "xplain/core/types.hpp"
#include "xplain/models/featurizer.hpp"

namespace xplain {

// Anything that maps a sample to class probabilities. The explainers only
// depend on this interface, so handcrafted probe models work with them too.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual TaskKind task() const = 0;
  virtual const std::vector<std::string>& class_labels() const = 0;
  virtual Prediction predict_proba(const Sample& sample) const = 0;
};

// Numerically stable softmax; strictly positive for finite logits.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

Prediction make_prediction(const std::vector<std::string>& labels, const Eigen::VectorXd& probs);

class LinearModel final : public Classifier {
 public:
  // weights: classes x features, bias: classes.
  LinearModel(Featurizer featurizer, std::vector<std::string> class_labels,
              Eigen::MatrixXd weights, Eigen::VectorXd bias);

  TaskKind task() const override { return featurizer_.task(); }
  const std::vector<std::string>& class_labels() const override { return labels_; }
  Prediction predict_proba(const Sample& sample) const override;

  Eigen::VectorXd logits(const Sample& sample) const;
  const Featurizer& featurizer() const { return featurizer_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }

 private:
  Featurizer featurizer_;
  std::vector<std::string> labels_;
  Eigen::MatrixXd weights_;
  Eigen::VectorXd bias_;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd biases;   // out
};

// Activations recorded by a forward pass. Layer l maps inputs[l] to
// pre_activations[l]; post_activations[l] is the rectified value for hidden
// layers and equals pre_activations[l] for the output layer.
struct ActivationTrace {
  Eigen::VectorXd input;
  std::vector<Eigen::VectorXd> layer_inputs;
  std::vector<Eigen::VectorXd> pre_activations;
  std::vector<Eigen::VectorXd> post_activations;
  Eigen::VectorXd logits;
};

class MLPModel final : public Classifier {
 public:
  // Rectifier hidden layers, softmax output. Zero hidden layers is accepted
  // (plain softmax regression) so single-layer networks can be explained.
  MLPModel(Featurizer featurizer, std::vector<std::string> class_labels,
           std::vector<DenseLayer> layers);

  TaskKind task() const override { return featurizer_.task(); }
  const std::vector<std::string>& class_labels() const override { return labels_; }
  Prediction predict_proba(const Sample& sample) const override;

  std::pair<Prediction, ActivationTrace> forward_with_trace(const Sample& sample) const;
  ActivationTrace trace_features(const Eigen::VectorXd& features) const;
  Eigen::VectorXd logits_from_features(const Eigen::VectorXd& features) const;

  const Featurizer& featurizer() const { return featurizer_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

 private:
  Featurizer featurizer_;
  std::vector<std::string> labels_;
  std::vector<DenseLayer> layers_;
};

struct TreeNode {
  // Internal nodes: `feature` >= 0. Numeric splits send x <= threshold left;
  // categorical splits send categories listed in `left_categories` left.
  int feature = -1;
  bool categorical = false;
  double threshold = 0.0;
  std::vector<int> left_categories;
  int left = -1;
  int right = -1;
  // Leaves only.
  std::vector<double> distribution;

  bool is_leaf() const { return feature < 0; }
};

// CART tree over the raw tabular encoding (or any numeric featurization).
// Node 0 is the root.
class TreeModel final : public Classifier {
 public:
  TreeModel(Featurizer featurizer, std::vector<std::string> class_labels,
            std::vector<TreeNode> nodes);

  TaskKind task() const override { return featurizer_.task(); }
  const std::vector<std::string>& class_labels() const override { return labels_; }
  Prediction predict_proba(const Sample& sample) const override;

  int leaf_for(const Eigen::VectorXd& features) const;
  // Feature indices used by at least one split.
  std::vector<int> used_features() const;

  const Featurizer& featurizer() const { return featurizer_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;

 private:
  Featurizer featurizer_;
  std::vector<std::string> labels_;
  std::vector<TreeNode> nodes_;
};

using Model = std::variant<LinearModel, MLPModel, TreeModel>;

enum class ModelKind { logistic, mlp, tree };
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

ModelKind kind_of(const Model& model);
const Classifier& as_classifier(const Model& model);
const Featurizer& featurizer_of(const Model& model);

}  // namespace xplain
