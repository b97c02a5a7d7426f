#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "xplain/core/types.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  std::uint64_t seed = 0;
  std::vector<int> hidden_sizes{16};
  int max_depth = 5;
  int min_leaf = 2;
  // Patch grid for image featurization (grid x grid cells).
  int image_grid = 4;

  void validate() const;
};

// Mean cross-entropy at the start of every epoch plus the final value, so
// loss.size() == epochs + 1.
struct TrainingLog {
  std::vector<double> loss;
};

LinearModel train_logistic(const Dataset& dataset, const TrainConfig& config,
                           TrainingLog* log = nullptr);
MLPModel train_mlp(const Dataset& dataset, const TrainConfig& config,
                   TrainingLog* log = nullptr);
TreeModel train_tree(const Dataset& dataset, const TrainConfig& config);

Model train_model(ModelKind kind, const Dataset& dataset, const TrainConfig& config);

double evaluate_accuracy(const Classifier& model, const Dataset& dataset);

// Mean cross-entropy of a rectifier network over rows of `features` and its
// gradient with respect to every layer parameter.
struct LossGradient {
  double loss = 0.0;
  std::vector<DenseLayer> gradient;
};
LossGradient mlp_loss_gradient(const std::vector<DenseLayer>& layers,
                               const Eigen::MatrixXd& features,
                               const std::vector<int>& labels);

}  // namespace xplain
