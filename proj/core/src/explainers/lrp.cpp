#include "xplain/explainers/lrp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xplain/core/error.hpp"
#include "xplain/core/image.hpp"
#include "xplain/core/text.hpp"

namespace xplain {

RelevanceResult propagate_relevance(const MLPModel& model, const ActivationTrace& trace,
                                    std::size_t target_index, double epsilon) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::invalid_argument,
          "LRP epsilon must be >= 0");
  const auto& layers = model.layers();
  require(trace.layer_inputs.size() == layers.size(), ErrorCode::invalid_argument,
          "activation trace does not match the model");
  require(target_index < static_cast<std::size_t>(trace.logits.size()),
          ErrorCode::invalid_argument, "LRP target index out of range");
  require(trace.logits.allFinite(), ErrorCode::invalid_argument, "non-finite activations");

  RelevanceResult result;
  result.target_index = target_index;
  result.target_logit = trace.logits[static_cast<Eigen::Index>(target_index)];

  Eigen::VectorXd relevance = Eigen::VectorXd::Zero(trace.logits.size());
  relevance[static_cast<Eigen::Index>(target_index)] = result.target_logit;

  // Rectifiers pass relevance through unchanged, so each step only has to
  // redistribute through one affine map.
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Eigen::MatrixXd& w = layers[l].weights;  // out x in
    const Eigen::VectorXd& a = trace.layer_inputs[l];
    const Eigen::VectorXd& z = trace.pre_activations[l];
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(w.cols());
    for (Eigen::Index k = 0; k < w.rows(); ++k) {
      const double r = relevance[k];
      if (r == 0.0) continue;
      const double denom = z[k] + epsilon * (z[k] >= 0.0 ? 1.0 : -1.0);
      if (denom == 0.0) {
        result.absorbed += r;
        continue;
      }
      const double scale = r / denom;
      double passed = 0.0;
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double share = a[j] * w(k, j) * scale;
        lower[j] += share;
        passed += share;
      }
      result.absorbed += r - passed;
    }
    relevance = std::move(lower);
    require(relevance.allFinite(), ErrorCode::invalid_argument, "non-finite relevance");
  }
  result.input_relevance = std::move(relevance);
  return result;
}

Attribution lrp_explain(const MLPModel& model, const Sample& sample, double epsilon,
                        const std::optional<std::string>& target) {
  auto [prediction, trace] = model.forward_with_trace(sample);
  std::size_t target_index = prediction.predicted_index();
  if (target) {
    const auto& labels = model.class_labels();
    auto it = std::find(labels.begin(), labels.end(), *target);
    require(it != labels.end(), ErrorCode::invalid_argument,
            "unknown target class '" + *target + "'");
    target_index = static_cast<std::size_t>(it - labels.begin());
  }
  const RelevanceResult rel = propagate_relevance(model, trace, target_index, epsilon);
  const Eigen::VectorXd& r = rel.input_relevance;
  const Featurizer& featurizer = model.featurizer();

  Attribution out;
  out.method = Method::lrp;
  out.target_class = model.class_labels()[target_index];
  out.prediction_value = rel.target_logit;

  switch (featurizer.kind()) {
    case FeaturizationKind::tabular_standardized:
    case FeaturizationKind::tabular_raw: {
      out.unit_kind = UnitKind::feature;
      const FeatureSchema& schema = featurizer.tabular_state().schema;
      const bool raw = featurizer.kind() == FeaturizationKind::tabular_raw;
      Eigen::Index offset = 0;
      for (const Column& column : schema.columns()) {
        const Eigen::Index width =
            (!raw && column.kind == ColumnKind::categorical)
                ? static_cast<Eigen::Index>(column.categories.size())
                : 1;
        out.units.push_back(column.name);
        out.scores.push_back(r.segment(offset, width).sum());
        offset += width;
      }
      break;
    }
    case FeaturizationKind::bag_of_words: {
      out.unit_kind = UnitKind::token;
      const auto& vocab = featurizer.text_state().vocabulary;
      const std::vector<Token> tokens = tokenize(std::get<TextSample>(sample).raw);
      std::map<std::string, int> occurrences;
      for (const Token& token : tokens) ++occurrences[token.text];
      for (const Token& token : tokens) {
        out.units.push_back(token_unit_id(token));
        auto it = std::lower_bound(vocab.begin(), vocab.end(), token.text);
        double score = 0.0;
        if (it != vocab.end() && *it == token.text) {
          score = r[it - vocab.begin()] / occurrences[token.text];
        }
        out.scores.push_back(score);
      }
      break;
    }
    case FeaturizationKind::image_patch_means: {
      out.unit_kind = UnitKind::segment;
      const auto& state = featurizer.image_state();
      const int segments = state.grid_rows * state.grid_cols;
      for (int s = 0; s < segments; ++s) {
        out.units.push_back(segment_unit_id(s));
        out.scores.push_back(r[3 * s] + r[3 * s + 1] + r[3 * s + 2]);
      }
      break;
    }
  }
  out.diagnostics["epsilon"] = epsilon;
  out.diagnostics["absorbed_relevance"] = rel.absorbed;
  out.diagnostics["input_relevance_sum"] = r.sum();
  out.diagnostics["target_logit"] = rel.target_logit;
  out.validate();
  return out;
}

}  // namespace xplain
