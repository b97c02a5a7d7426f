#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xplain/explainers/explain.hpp"
#include "xplain/platform/bundle.hpp"
#include "xplain/platform/serialization.hpp"

namespace xplain {

// Fraction of every dataset held out for accuracy reporting and permutation
// importance.
inline constexpr double kHoldoutFraction = 0.2;

struct TrainRequest {
  ModelKind kind = ModelKind::logistic;
  TrainConfig config;
  std::uint64_t split_seed = 0;
  std::string created_at;  // empty = current UTC time
};

struct TrainOutcome {
  std::string model_id;
  double holdout_accuracy = 0.0;
  double train_accuracy = 0.0;
  std::size_t train_rows = 0;
  std::size_t holdout_rows = 0;
};

// Trains on the deterministic 80/20 split of `dataset` and stores the model.
TrainOutcome train_and_store(ModelStore& store, const Dataset& dataset,
                             const TrainRequest& request);

// Request-level operations shared by the CLI and the HTTP service. Every
// result is a document; identical inputs give byte-identical documents.
class Workspace {
 public:
  explicit Workspace(std::filesystem::path data_root, std::uint64_t default_seed = 0);

  Registry& registry() { return registry_; }
  const Registry& registry() const { return registry_; }
  std::uint64_t default_seed() const { return default_seed_; }

  // A sample from a request body: {"sample": {...}} with the usual sample
  // kinds (tabular may use "row": {column: value}), or
  // {"scenario": id, "sample_id": id} for a bundled demo sample.
  Sample resolve_sample(const Model& model, const Json& body) const;

  Json scenarios() const;
  Json scenario(const std::string& id) const;
  Json scenario_samples(const std::string& id) const;
  Json models() const;

  Json predict(const std::string& model_id, const Sample& sample) const;

  // Instance explanation; permutation_importance returns the model-level
  // document computed on the model's holdout split.
  Json explain(const std::string& model_id, const Sample& sample, Method method,
               const ExplainConfig& config) const;
  Json permutation_importance(const std::string& model_id, const ExplainConfig& config) const;

  Json profile_dataset(const std::string& dataset_id) const;

  // Defaults to the scenario's first model.
  Json agreement(const std::string& scenario_id, const std::vector<Method>& methods,
                 std::optional<std::size_t> k, const ExplainConfig& config,
                 const std::optional<std::string>& model_id = std::nullopt) const;

  ExplainConfig default_config() const;

 private:
  Registry registry_;
  std::uint64_t default_seed_;
};

}  // namespace xplain
