#include <gtest/gtest.h>

#include <cmath>

#include "xplain/core/error.hpp"
#include "xplain/models/featurizer.hpp"
#include "xplain/models/model.hpp"
#include "xplain/models/training.hpp"
#include "xplain/platform/serialization.hpp"

#include "support/fixtures.hpp"

namespace xplain {
namespace {

using testing::gaussian;
using testing::numeric_dataset;

Dataset xor_dataset() {
  return numeric_dataset("xor", {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {"zero", "one", "one", "zero"});
}

Dataset blobs(std::uint64_t seed, double separation, int n) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    const bool right = i % 2 == 0;
    rows.push_back({gaussian(rng) + (right ? separation / 2 : -separation / 2), gaussian(rng)});
    labels.push_back(right ? "right" : "left");
  }
  return numeric_dataset("blobs", rows, labels);
}

TEST(Featurizer, BagOfWordsCounts) {
  const Featurizer f = Featurizer::text({"bus", "late", "stop"});
  const Eigen::VectorXd x = f.transform(TextSample{"late late bus"});
  ASSERT_EQ(x.size(), 3);
  EXPECT_EQ(x[0], 1.0);
  EXPECT_EQ(x[1], 2.0);
  EXPECT_EQ(x[2], 0.0);
}

TEST(Featurizer, ConstantImageGivesConstantPatchMeans) {
  Featurizer::ImageState state;
  state.mean_color = {128, 128, 128};
  const Featurizer f = Featurizer::image(state);
  const Eigen::VectorXd x = f.transform(ImageSample(32, 32, Rgb{128, 128, 128}));
  ASSERT_EQ(x.size(), 48);
  for (Eigen::Index i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], 128.0 / 255.0, 1e-12);
}

TEST(Featurizer, TrainingMeanStandardizesToZero) {
  const Dataset d = numeric_dataset("d", {{1.0, 5.0}, {3.0, 5.0}}, {"a", "b"});
  const Featurizer f = Featurizer::fit_tabular(d, false);
  const Eigen::VectorXd x = f.transform(TabularSample{{2.0, 5.0}});
  EXPECT_EQ(x[0], 0.0);
  // Zero std is replaced by one.
  EXPECT_EQ(f.tabular_state().stds[1], 1.0);
  EXPECT_EQ(x[1], 0.0);
}

TEST(Featurizer, RejectsUnknownCategoryAndMissingCells) {
  Dataset d;
  d.id = "c";
  d.task = TaskKind::tabular;
  d.schema = FeatureSchema({{"color", ColumnKind::categorical, {"blue", "red"}}});
  d.samples = {TabularSample{{std::string("red")}}, TabularSample{{std::string("blue")}}};
  d.labels = {"a", "b"};
  d.class_labels = {"a", "b"};
  const Featurizer f = Featurizer::fit_tabular(d, false);
  const Eigen::VectorXd x = f.transform(TabularSample{{std::string("red")}});
  ASSERT_EQ(x.size(), 2);
  EXPECT_EQ(x[1], 1.0);
  EXPECT_THROW(f.transform(TabularSample{{std::string("green")}}), Error);
  EXPECT_THROW(f.transform(TabularSample{{Cell{}}}), Error);
  EXPECT_THROW(f.transform(TextSample{"red"}), Error);
}

TEST(Featurizer, ImputeUsesTrainingFill) {
  const Dataset d = numeric_dataset("d", {{1.0}, {3.0}}, {"a", "b"});
  const Featurizer f = Featurizer::fit_tabular(d, false);
  const TabularSample filled = f.impute(TabularSample{{Cell{}}});
  EXPECT_EQ(std::get<double>(filled.values[0]), 2.0);
}

TEST(Logistic, SeparatedBlobsReachHighAccuracy) {
  const Dataset d = blobs(1, 6.0, 100);
  const LinearModel model = train_logistic(d, {});
  EXPECT_GE(evaluate_accuracy(model, d), 0.99);
}

TEST(Logistic, LossIsNonIncreasing) {
  const Dataset d = blobs(2, 3.0, 120);
  TrainingLog log;
  train_logistic(d, {}, &log);
  ASSERT_EQ(log.loss.size(), 201u);
  for (std::size_t i = 1; i < log.loss.size(); ++i) ASSERT_LE(log.loss[i], log.loss[i - 1]);
}

TEST(Logistic, RandomLabelsStayNearChance) {
  Rng rng(9);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (int i = 0; i < 200; ++i) {
    rows.push_back({gaussian(rng), gaussian(rng)});
    labels.push_back(rng.below(2) ? "a" : "b");
  }
  const Dataset d = numeric_dataset("noise", rows, labels);
  EXPECT_NEAR(evaluate_accuracy(train_logistic(d, {}), d), 0.5, 0.1);
}

TEST(Logistic, LearnsPositiveWeightForThresholdFeature) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (int i = -10; i <= 10; ++i) {
    if (i == 0) continue;
    rows.push_back({i > 0 ? i * 0.3 + 1.0 : i * 0.3 - 1.0});
    labels.push_back(i > 0 ? "pos" : "neg");
  }
  const LinearModel model = train_logistic(numeric_dataset("t", rows, labels), {});
  // Classes are sorted: "neg" then "pos".
  EXPECT_GT(model.weights()(1, 0) - model.weights()(0, 0), 0.0);
}

TEST(Logistic, RejectsSingleClass) {
  EXPECT_THROW(train_logistic(numeric_dataset("s", {{1.0}, {2.0}}, {"a", "a"}), {}), Error);
}

TEST(Mlp, LearnsXor) {
  TrainConfig config;
  config.hidden_sizes = {8};
  config.epochs = 5000;
  config.learning_rate = 0.5;
  const MLPModel model = train_mlp(xor_dataset(), config);
  EXPECT_EQ(evaluate_accuracy(model, xor_dataset()), 1.0);
}

TEST(Mlp, TrainingIsBitReproducible) {
  TrainConfig config;
  config.epochs = 50;
  config.seed = 4;
  const Dataset d = blobs(3, 4.0, 60);
  EXPECT_EQ(canonical_dump(to_json(Model(train_mlp(d, config)))),
            canonical_dump(to_json(Model(train_mlp(d, config)))));
}

TEST(Mlp, ZeroWeightsGiveUniformProbabilities) {
  std::vector<DenseLayer> layers(2);
  layers[0].weights = Eigen::MatrixXd::Zero(4, 2);
  layers[0].biases = Eigen::VectorXd::Zero(4);
  layers[1].weights = Eigen::MatrixXd::Zero(3, 4);
  layers[1].biases = Eigen::VectorXd::Zero(3);
  const MLPModel model(testing::identity_featurizer(2), testing::class_names(3), layers);
  const Prediction p = model.predict_proba(TabularSample{{0.3, -2.0}});
  for (double v : p.probabilities()) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Mlp, TraceReproducesLogits) {
  Rng rng(5);
  const MLPModel model = testing::random_mlp(rng, 4, 3, {6, 5});
  const TabularSample s = testing::random_row(rng, 4);
  const auto [prediction, trace] = model.forward_with_trace(s);
  EXPECT_EQ(trace.logits, model.logits_from_features(trace.input));
  EXPECT_EQ(trace.pre_activations.size(), 3u);
  EXPECT_EQ(prediction.probabilities(), model.predict_proba(s).probabilities());
  // Replaying each layer from its recorded input matches bit for bit.
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    const Eigen::VectorXd z = model.layers()[l].weights * trace.layer_inputs[l] + model.layers()[l].biases;
    EXPECT_EQ(z, trace.pre_activations[l]);
  }
}

TEST(Mlp, SingleLayerTraceHasOneApplication) {
  Rng rng(6);
  const MLPModel model = testing::random_mlp(rng, 3, 2, {});
  EXPECT_EQ(model.forward_with_trace(testing::random_row(rng, 3)).second.pre_activations.size(), 1u);
}

TEST(Mlp, AnalyticGradientMatchesFiniteDifferences) {
  Rng rng(42);
  const MLPModel model = testing::random_mlp(rng, 3, 3, {5});
  std::vector<DenseLayer> layers = model.layers();
  const Eigen::MatrixXd x = testing::random_matrix(rng, 7, 3);
  const std::vector<int> y{0, 1, 2, 0, 1, 2, 1};
  const LossGradient analytic = mlp_loss_gradient(layers, x, y);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto check = [&](double& param, double grad) {
      const double saved = param;
      param = saved + h;
      const double up = mlp_loss_gradient(layers, x, y).loss;
      param = saved - h;
      const double down = mlp_loss_gradient(layers, x, y).loss;
      param = saved;
      const double numeric = (up - down) / (2 * h);
      const double rel = std::abs(numeric - grad) / std::max(1e-8, std::abs(numeric) + std::abs(grad));
      worst = std::max(worst, rel);
    };
    for (Eigen::Index i = 0; i < layers[l].weights.size(); ++i) {
      check(layers[l].weights.data()[i], analytic.gradient[l].weights.data()[i]);
    }
    for (Eigen::Index i = 0; i < layers[l].biases.size(); ++i) {
      check(layers[l].biases[i], analytic.gradient[l].biases[i]);
    }
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Tree, SplitsAtMidpoint) {
  const Dataset d = numeric_dataset("t", {{1}, {2}, {3}, {4}}, {"lo", "lo", "hi", "hi"});
  TrainConfig config;
  config.min_leaf = 1;
  const TreeModel tree = train_tree(d, config);
  ASSERT_FALSE(tree.nodes()[0].is_leaf());
  EXPECT_EQ(tree.nodes()[0].threshold, 2.5);
  EXPECT_EQ(evaluate_accuracy(tree, d), 1.0);
}

TEST(Tree, PureNodesBecomeLeaves) {
  const Dataset d = numeric_dataset("t", {{1}, {2}, {3}, {10}, {11}, {12}}, {"a", "a", "a", "b", "b", "b"});
  TrainConfig config;
  config.min_leaf = 1;
  const TreeModel tree = train_tree(d, config);
  ASSERT_EQ(tree.nodes().size(), 3u);
  EXPECT_TRUE(tree.nodes()[1].is_leaf());
  EXPECT_TRUE(tree.nodes()[2].is_leaf());
}

TEST(Tree, RejectsSingleClass) {
  EXPECT_THROW(train_tree(numeric_dataset("t", {{1}, {2}, {3}}, {"a", "a", "a"}), {}), Error);
}

TEST(Tree, ConstantFeatureNeverSplits) {
  const Dataset d = numeric_dataset("t", {{7, 1}, {7, 2}, {7, 3}, {7, 4}, {7, 5}, {7, 6}},
                                    {"a", "a", "b", "b", "a", "b"});
  const TreeModel tree = train_tree(d, {});
  for (int f : tree.used_features()) EXPECT_NE(f, 0);
}

TEST(Tree, MemorizesTrainingSetWhenUnbounded) {
  Rng rng(8);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (int i = 0; i < 60; ++i) {
    rows.push_back({gaussian(rng), gaussian(rng), gaussian(rng)});
    labels.push_back(rng.below(3) == 0 ? "a" : (rng.below(2) ? "b" : "c"));
  }
  const Dataset d = numeric_dataset("m", rows, labels);
  TrainConfig config;
  config.max_depth = 64;
  config.min_leaf = 1;
  EXPECT_EQ(evaluate_accuracy(train_tree(d, config), d), 1.0);
}

TEST(Tree, SingleLeafReturnsItsDistribution) {
  TreeNode leaf;
  leaf.distribution = {0.8, 0.2};
  const TreeModel tree(testing::identity_featurizer(1, FeaturizationKind::tabular_raw), {"a", "b"}, {leaf});
  EXPECT_EQ(tree.predict_proba(TabularSample{{123.0}}).probabilities(), (std::vector<double>{0.8, 0.2}));
}

TEST(Accuracy, ConstantPredictorScoresClassShare) {
  TreeNode leaf;
  leaf.distribution = {1.0, 0.0};
  const TreeModel tree(testing::identity_featurizer(1, FeaturizationKind::tabular_raw), {"a", "b"}, {leaf});
  const Dataset d = numeric_dataset("d", {{1}, {2}, {3}, {4}, {5}}, {"a", "a", "b", "b", "b"});
  EXPECT_DOUBLE_EQ(evaluate_accuracy(tree, d), 0.4);
}

// Probabilities of every model kind are positive where softmax applies and
// sum to one.
TEST(Models, ProbabilitiesSumToOne) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(6));
    const int k = 2 + static_cast<int>(rng.below(3));
    const TabularSample s = testing::random_row(rng, m);
    const std::vector<Model> models{testing::random_logistic(rng, m, k), testing::random_mlp(rng, m, k, {4}),
                                    testing::random_tree(rng, m, k, 3)};
    for (const Model& model : models) {
      const Prediction p = as_classifier(model).predict_proba(s);
      double total = 0.0;
      for (double v : p.probabilities()) total += v;
      ASSERT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(TrainConfig, ValidateRejectsNonPositiveValues) {
  TrainConfig config;
  config.learning_rate = 0.0;
  EXPECT_THROW(config.validate(), Error);
  config = {};
  config.epochs = 0;
  EXPECT_THROW(config.validate(), Error);
  config = {};
  config.hidden_sizes = {0};
  EXPECT_THROW(config.validate(), Error);
}

}  // namespace
}  // namespace xplain
