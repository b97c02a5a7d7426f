#include "xplain/explainers/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "xplain/core/error.hpp"
#include "xplain/models/training.hpp"

namespace xplain {

GlobalImportance permutation_importance(const Classifier& model, const Dataset& holdout,
                                        const PermutationConfig& config) {
  require(holdout.task == TaskKind::tabular && holdout.schema.has_value(),
          ErrorCode::invalid_argument, "permutation importance needs a tabular dataset");
  require(model.task() == TaskKind::tabular, ErrorCode::invalid_argument,
          "permutation importance needs a tabular model");
  require(holdout.size() >= kMinPermutationRows, ErrorCode::invalid_argument,
          "permutation importance needs at least " + std::to_string(kMinPermutationRows) +
              " rows, got " + std::to_string(holdout.size()));
  require(config.repeats >= 1, ErrorCode::invalid_argument, "repeats must be >= 1");
  for (const Sample& sample : holdout.samples) {
    validate_tabular(std::get<TabularSample>(sample), *holdout.schema, true);
  }

  const FeatureSchema& schema = *holdout.schema;
  const std::size_t rows = holdout.size();
  GlobalImportance out;
  out.repeats = config.repeats;
  out.seed = config.seed;
  out.baseline_score = evaluate_accuracy(model, holdout);
  out.importance.assign(schema.size(), 0.0);
  out.raw_drops.assign(schema.size(), std::vector<double>(static_cast<std::size_t>(config.repeats)));

  for (std::size_t f = 0; f < schema.size(); ++f) {
    out.features.push_back(schema.column(f).name);
    double total = 0.0;
    for (int rep = 0; rep < config.repeats; ++rep) {
      Rng rng(config.seed, {static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(rep)});
      std::vector<std::size_t> order;
      if (config.permutation) {
        order = config.permutation(rows, rng);
        std::vector<std::size_t> check = order;
        std::sort(check.begin(), check.end());
        for (std::size_t i = 0; i < rows; ++i) {
          require(i < check.size() && check[i] == i, ErrorCode::invalid_argument,
                  "permutation source did not return a permutation");
        }
      } else {
        order.resize(rows);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
      }
      Dataset shuffled = holdout;
      for (std::size_t i = 0; i < rows; ++i) {
        std::get<TabularSample>(shuffled.samples[i]).values[f] =
            std::get<TabularSample>(holdout.samples[order[i]]).values[f];
      }
      const double drop = out.baseline_score - evaluate_accuracy(model, shuffled);
      out.raw_drops[f][static_cast<std::size_t>(rep)] = drop;
      total += drop;
    }
    out.importance[f] = total / config.repeats;
  }
  return out;
}

}  // namespace xplain
