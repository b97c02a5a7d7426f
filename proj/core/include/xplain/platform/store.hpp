#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "xplain/models/model.hpp"
#include "xplain/models/training.hpp"
#include "xplain/platform/serialization.hpp"

namespace xplain {

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

// First 16 hex digits of the SHA-256 of the canonical model payload.
std::string model_id(const Model& model);

struct ModelMetadata {
  TrainConfig config;
  std::string dataset_id;
  std::uint64_t split_seed = 0;
  std::optional<double> holdout_accuracy;
  std::string created_at;
};

Json to_json(const ModelMetadata& metadata);
ModelMetadata model_metadata_from_json(const Json& document);

struct ModelRecord {
  std::string id;
  Model model;
  ModelMetadata metadata;
};

// Models stored as <root>/<id>.json. Reads may run concurrently; saves are
// serialized. Loaded records are cached and immutable.
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path root);

  // Returns the content id. Saving an identical payload again is a no-op.
  std::string save(const Model& model, const ModelMetadata& metadata);

  // Throws not_found for unknown ids and data_loss when the stored payload no
  // longer hashes to its id.
  std::shared_ptr<const ModelRecord> load(const std::string& id) const;

  bool contains(const std::string& id) const;
  std::vector<std::string> list() const;  // sorted ids
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const ModelRecord>> cache_;
};

}  // namespace xplain
