#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "xplain/core/types.hpp"
#include "xplain/explainers/explain.hpp"
#include "xplain/platform/serialization.hpp"
#include "xplain/platform/store.hpp"

namespace xplain {

struct DatasetRef {
  std::string id;
  std::filesystem::path path;  // absolute
  std::string format;          // csv | jsonl | images
  std::optional<std::string> label_column;  // csv only
};

struct DemoSample {
  std::string id;
  std::string label;
  Sample sample;
};

// A packaged scenario read from <dir>/manifest.json:
//   {"id", "title", "task", "dataset": {"id", "path", "format", "label_column"?},
//    "demo_samples": [{"id", "label", "text" | "row" | "image"}],
//    "models": [id, ...], "annotations"?: "file.json", "methods": [...]}
// "row" maps column names to values; "image" is a pixmap path relative to the
// bundle directory.
struct ScenarioBundle {
  std::string id;
  std::string title;
  TaskKind task = TaskKind::tabular;
  DatasetRef dataset;
  std::vector<DemoSample> demo_samples;
  std::vector<std::string> model_ids;
  std::map<std::string, HumanAnnotation> annotations;
  std::vector<Method> methods;
  std::filesystem::path directory;

  const DemoSample& sample(const std::string& sample_id) const;
};

// Reads and fully validates a bundle against the models in `store`. Errors
// name the offending manifest path, e.g. "manifest.demo_samples[2]".
ScenarioBundle load_bundle(const std::filesystem::path& directory, const ModelStore& store);

Dataset load_dataset(const DatasetRef& ref);
// The untyped table behind a csv dataset reference.
RawTable load_raw_table(const DatasetRef& ref);

// A tabular sample from {"column": value, ...}; absent or null columns are
// missing, booleans accept true/false and the yes/no spellings.
TabularSample tabular_from_object(const FeatureSchema& schema, const Json& object,
                                  const std::string& path);

// Interpretable unit ids of a sample under a model's featurization.
std::vector<std::string> unit_ids_for(const Model& model, const Sample& sample);

// Bundles under <data_root>/scenarios/*, plus the model store at
// <data_root>/models. Bundles are immutable after construction; datasets are
// loaded on first use.
class Registry {
 public:
  explicit Registry(std::filesystem::path data_root);

  const std::filesystem::path& data_root() const { return data_root_; }
  ModelStore& store() { return store_; }
  const ModelStore& store() const { return store_; }

  const std::vector<ScenarioBundle>& scenarios() const { return scenarios_; }
  const ScenarioBundle& scenario(const std::string& id) const;

  // Dataset by id across all bundles.
  const DatasetRef& dataset_ref(const std::string& id) const;
  std::shared_ptr<const Dataset> dataset(const std::string& id) const;

 private:
  std::filesystem::path data_root_;
  ModelStore store_;
  std::vector<ScenarioBundle> scenarios_;
  mutable std::mutex dataset_mutex_;
  mutable std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
};

}  // namespace xplain
