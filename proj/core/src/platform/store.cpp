#include "xplain/platform/store.hpp"

#include <algorithm>
#include <mutex>

#include <openssl/evp.h>

#include "xplain/core/error.hpp"
#include "xplain/platform/io.hpp"

namespace xplain {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  require(EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) == 1,
          ErrorCode::internal, "sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string model_id(const Model& model) {
  return sha256_hex(canonical_dump(to_json(model))).substr(0, 16);
}

Json to_json(const ModelMetadata& m) {
  return {{"config", to_json(m.config)},
          {"dataset_id", m.dataset_id},
          {"split_seed", m.split_seed},
          {"holdout_accuracy", m.holdout_accuracy ? Json(*m.holdout_accuracy) : Json(nullptr)},
          {"created_at", m.created_at}};
}

ModelMetadata model_metadata_from_json(const Json& document) {
  ModelMetadata m;
  m.config = train_config_from_json(member(document, "config", "metadata"));
  m.dataset_id = string_member(document, "dataset_id", "metadata");
  const Json& seed = member(document, "split_seed", "metadata");
  require(seed.is_number_unsigned(), ErrorCode::invalid_argument,
          "metadata.split_seed: expected an unsigned integer");
  m.split_seed = seed.get<std::uint64_t>();
  if (auto it = document.find("holdout_accuracy"); it != document.end() && it->is_number()) {
    m.holdout_accuracy = it->get<double>();
  }
  m.created_at = string_member(document, "created_at", "metadata");
  return m;
}

namespace {

bool valid_id(const std::string& id) {
  return id.size() == 16 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

}  // namespace

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {}

std::string ModelStore::save(const Model& model, const ModelMetadata& metadata) {
  const Json payload = to_json(model);
  const std::string id = sha256_hex(canonical_dump(payload)).substr(0, 16);
  std::unique_lock lock(mutex_);
  const fs::path path = root_ / (id + ".json");
  if (fs::exists(path)) return id;
  const Json document{{"id", id},
                      {"kind", payload["kind"]},
                      {"task", std::string(to_string(as_classifier(model).task()))},
                      {"payload", payload},
                      {"metadata", to_json(metadata)}};
  write_file_atomic(path, canonical_dump(document) + "\n");
  return id;
}

std::shared_ptr<const ModelRecord> ModelStore::load(const std::string& id) const {
  require(valid_id(id), ErrorCode::not_found, "unknown model id: " + id);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  }
  const fs::path path = root_ / (id + ".json");
  require(fs::exists(path), ErrorCode::not_found, "unknown model id: " + id);
  Json document;
  try {
    document = Json::parse(read_file(path));
  } catch (const Json::parse_error&) {
    fail(ErrorCode::data_loss, "model " + id + ": stored file is not a valid document");
  }
  const Json& payload = member(document, "payload", "model file");
  const std::string actual = sha256_hex(canonical_dump(payload)).substr(0, 16);
  require(actual == id, ErrorCode::data_loss,
          "model " + id + ": hash mismatch (payload hashes to " + actual + ")");
  auto record = std::make_shared<ModelRecord>(
      ModelRecord{id, model_from_json(payload),
                  model_metadata_from_json(member(document, "metadata", "model file"))});
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.emplace(id, std::move(record));
  return it->second;
}

bool ModelStore::contains(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return valid_id(id) && fs::exists(root_ / (id + ".json"));
}

std::vector<std::string> ModelStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  if (!fs::exists(root_)) return ids;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.path().extension() != ".json") continue;
    const std::string stem = entry.path().stem().string();
    if (valid_id(stem)) ids.push_back(stem);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace xplain
