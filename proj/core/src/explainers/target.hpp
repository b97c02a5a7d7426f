#pragma once

#include <algorithm>
#include <optional>
#include <string>

#include "xplain/core/error.hpp"
#include "xplain/models/model.hpp"

namespace xplain::detail {

// Probability of one fixed class, resolved once against the model's labels.
class TargetProbability {
 public:
  TargetProbability(const Classifier& model, const Sample& sample,
                    const std::optional<std::string>& target)
      : model_(model) {
    const auto& labels = model.class_labels();
    if (target) {
      auto it = std::find(labels.begin(), labels.end(), *target);
      require(it != labels.end(), ErrorCode::invalid_argument,
              "unknown target class '" + *target + "'");
      index_ = static_cast<std::size_t>(it - labels.begin());
    } else {
      index_ = model.predict_proba(sample).predicted_index();
    }
  }

  double operator()(const Sample& sample) const {
    return model_.predict_proba(sample).probabilities()[index_];
  }

  const std::string& label() const { return model_.class_labels()[index_]; }

 private:
  const Classifier& model_;
  std::size_t index_ = 0;
};

}  // namespace xplain::detail
