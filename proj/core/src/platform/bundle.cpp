#include "xplain/platform/bundle.hpp"

#include <algorithm>
#include <set>

#include "xplain/core/error.hpp"
#include "xplain/explainers/units.hpp"
#include "xplain/platform/io.hpp"

namespace xplain {

namespace fs = std::filesystem;

const DemoSample& ScenarioBundle::sample(const std::string& sample_id) const {
  for (const auto& s : demo_samples) {
    if (s.id == sample_id) return s;
  }
  fail(ErrorCode::not_found, "scenario " + id + " has no sample " + sample_id);
}

TabularSample tabular_from_object(const FeatureSchema& schema, const Json& object,
                                  const std::string& path) {
  require(object.is_object(), ErrorCode::invalid_argument, path + ": expected an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    require(schema.index_of(it.key()).has_value(), ErrorCode::invalid_argument,
            path + "." + it.key() + ": unknown column");
  }
  TabularSample sample;
  for (const auto& column : schema.columns()) {
    const std::string cp = path + "." + column.name;
    auto it = object.find(column.name);
    if (it == object.end() || it->is_null()) {
      sample.values.emplace_back(std::monostate{});
      continue;
    }
    switch (column.kind) {
      case ColumnKind::numeric:
        if (it->is_string()) {
          auto v = parse_number(it->get<std::string>());
          require(v.has_value(), ErrorCode::invalid_argument, cp + ": expected a number");
          sample.values.emplace_back(*v);
        } else {
          require(it->is_number(), ErrorCode::invalid_argument, cp + ": expected a number");
          sample.values.emplace_back(it->get<double>());
        }
        break;
      case ColumnKind::boolean:
        if (it->is_boolean()) {
          sample.values.emplace_back(it->get<bool>() ? 1.0 : 0.0);
        } else if (it->is_string()) {
          auto v = parse_boolean(it->get<std::string>());
          require(v.has_value(), ErrorCode::invalid_argument, cp + ": expected a boolean");
          sample.values.emplace_back(*v);
        } else {
          require(it->is_number() && (it->get<double>() == 0.0 || it->get<double>() == 1.0),
                  ErrorCode::invalid_argument, cp + ": expected a boolean");
          sample.values.emplace_back(it->get<double>());
        }
        break;
      case ColumnKind::categorical:
        require(it->is_string(), ErrorCode::invalid_argument, cp + ": expected a category string");
        sample.values.emplace_back(it->get<std::string>());
        break;
    }
  }
  validate_tabular(sample, schema, false);
  return sample;
}

std::vector<std::string> unit_ids_for(const Model& model, const Sample& sample) {
  return Perturbation(sample, default_baseline(featurizer_of(model))).unit_ids();
}

Dataset load_dataset(const DatasetRef& ref) {
  if (ref.format == "csv") {
    require(ref.label_column.has_value(), ErrorCode::invalid_argument,
            "dataset " + ref.id + ": csv datasets need a label_column");
    return load_tabular_csv(ref.path, *ref.label_column, ref.id);
  }
  if (ref.format == "jsonl") return load_text_jsonl(ref.path, ref.id);
  if (ref.format == "images") return load_image_folder(ref.path, ref.id);
  fail(ErrorCode::invalid_argument, "dataset " + ref.id + ": unknown format " + ref.format);
}

RawTable load_raw_table(const DatasetRef& ref) {
  require(ref.format == "csv", ErrorCode::failed_precondition,
          "dataset " + ref.id + " is not tabular; profiling supports csv datasets only");
  return read_csv_file(ref.path);
}

namespace {

std::string idx(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Rewrites errors from nested parsers so they carry the manifest location.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string message = e.what();
    if (message.rfind(path, 0) == 0) throw;
    throw Error(e.code(), path + ": " + message);
  }
}

}  // namespace

ScenarioBundle load_bundle(const fs::path& directory, const ModelStore& store) {
  const fs::path manifest_path = directory / "manifest.json";
  require(fs::is_regular_file(manifest_path), ErrorCode::not_found,
          "manifest not found: " + manifest_path.string());
  const Json manifest = parse_json(read_file(manifest_path), manifest_path.string());
  const std::string m = "manifest";

  ScenarioBundle bundle;
  bundle.directory = fs::absolute(directory).lexically_normal();
  bundle.id = string_member(manifest, "id", m);
  bundle.title = string_member(manifest, "title", m);
  bundle.task = at_path(m + ".task", [&] { return parse_task_kind(string_member(manifest, "task", m)); });

  const Json& dataset = member(manifest, "dataset", m);
  const std::string dp = m + ".dataset";
  bundle.dataset.id = string_member(dataset, "id", dp);
  bundle.dataset.path = (bundle.directory / string_member(dataset, "path", dp)).lexically_normal();
  bundle.dataset.format = string_member(dataset, "format", dp);
  const std::map<std::string, TaskKind> format_task{
      {"csv", TaskKind::tabular}, {"jsonl", TaskKind::text}, {"images", TaskKind::image}};
  auto ft = format_task.find(bundle.dataset.format);
  require(ft != format_task.end(), ErrorCode::invalid_argument,
          dp + ".format: expected csv, jsonl or images");
  require(ft->second == bundle.task, ErrorCode::invalid_argument,
          dp + ".format: " + bundle.dataset.format + " does not match task " +
              std::string(to_string(bundle.task)));
  if (bundle.dataset.format == "csv") bundle.dataset.label_column = string_member(dataset, "label_column", dp);
  require(fs::exists(bundle.dataset.path), ErrorCode::invalid_argument,
          dp + ".path: " + bundle.dataset.path.string() + " does not exist");

  const Json& models = member(manifest, "models", m);
  require(models.is_array() && !models.empty(), ErrorCode::invalid_argument,
          m + ".models: expected at least one model id");
  std::vector<std::shared_ptr<const ModelRecord>> records;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string p = idx(m + ".models", i);
    require(models[i].is_string(), ErrorCode::invalid_argument, p + ": expected a model id");
    const std::string id = models[i].get<std::string>();
    auto record = at_path(p, [&] { return store.load(id); });
    require(as_classifier(record->model).task() == bundle.task, ErrorCode::invalid_argument,
            p + ": model " + id + " is not a " + std::string(to_string(bundle.task)) + " model");
    bundle.model_ids.push_back(id);
    records.push_back(std::move(record));
  }

  const Json& methods = member(manifest, "methods", m);
  require(methods.is_array() && !methods.empty(), ErrorCode::invalid_argument,
          m + ".methods: expected a nonempty list");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string p = idx(m + ".methods", i);
    require(methods[i].is_string(), ErrorCode::invalid_argument, p + ": expected a method name");
    bundle.methods.push_back(at_path(p, [&] { return parse_method(methods[i].get<std::string>()); }));
  }

  const Json& samples = member(manifest, "demo_samples", m);
  require(samples.is_array() && !samples.empty(), ErrorCode::invalid_argument,
          m + ".demo_samples: expected a nonempty list");
  std::set<std::string> sample_ids;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string p = idx(m + ".demo_samples", i);
    const Json& s = samples[i];
    DemoSample demo;
    demo.id = string_member(s, "id", p);
    require(sample_ids.insert(demo.id).second, ErrorCode::invalid_argument,
            p + ": duplicate sample id " + demo.id);
    demo.label = string_member(s, "label", p);
    demo.sample = at_path(p, [&]() -> Sample {
      switch (bundle.task) {
        case TaskKind::text:
          return TextSample{string_member(s, "text", p)};
        case TaskKind::image:
          return read_ppm(bundle.directory / string_member(s, "image", p));
        case TaskKind::tabular: {
          const auto& schema = featurizer_of(records.front()->model).tabular_state().schema;
          return tabular_from_object(schema, member(s, "row", p), p + ".row");
        }
      }
      fail(ErrorCode::internal, "unreachable");
    });
    for (std::size_t r = 0; r < records.size(); ++r) {
      const Classifier& model = as_classifier(records[r]->model);
      const auto& labels = model.class_labels();
      require(std::find(labels.begin(), labels.end(), demo.label) != labels.end(),
              ErrorCode::invalid_argument,
              p + ": sample " + demo.id + " has label '" + demo.label +
                  "' which is not a class of model " + bundle.model_ids[r]);
      at_path(p + " (sample " + demo.id + ")", [&] { return model.predict_proba(demo.sample); });
    }
    bundle.demo_samples.push_back(std::move(demo));
  }

  if (auto it = manifest.find("annotations"); it != manifest.end() && !it->is_null()) {
    require(it->is_string(), ErrorCode::invalid_argument, m + ".annotations: expected a file name");
    const fs::path path = bundle.directory / it->get<std::string>();
    require(fs::exists(path), ErrorCode::invalid_argument,
            m + ".annotations: " + path.string() + " does not exist");
    bundle.annotations = at_path(m + ".annotations", [&] { return load_annotations(path); });
    for (const auto& [sample_id, annotation] : bundle.annotations) {
      const std::string p = "annotations." + sample_id;
      require(sample_ids.count(sample_id) == 1, ErrorCode::invalid_argument,
              p + ": no demo sample with this id");
      const auto units = unit_ids_for(records.front()->model, bundle.sample(sample_id).sample);
      for (const auto& unit : annotation.relevant_units) {
        require(std::find(units.begin(), units.end(), unit) != units.end(),
                ErrorCode::invalid_argument, p + ": unit " + unit + " does not exist in the sample");
      }
    }
  }
  return bundle;
}

Registry::Registry(fs::path data_root)
    : data_root_(fs::absolute(data_root).lexically_normal()), store_(data_root_ / "models") {
  require(fs::is_directory(data_root_), ErrorCode::not_found,
          "data root " + data_root_.string() + " is not a directory");
  const fs::path scenarios = data_root_ / "scenarios";
  std::vector<fs::path> directories;
  if (fs::is_directory(scenarios)) {
    for (const auto& entry : fs::directory_iterator(scenarios)) {
      if (entry.is_directory()) directories.push_back(entry.path());
    }
  }
  std::sort(directories.begin(), directories.end());
  std::set<std::string> ids;
  for (const auto& dir : directories) {
    ScenarioBundle bundle = at_path(dir.filename().string(), [&] { return load_bundle(dir, store_); });
    require(ids.insert(bundle.id).second, ErrorCode::invalid_argument,
            "duplicate scenario id " + bundle.id);
    scenarios_.push_back(std::move(bundle));
  }
}

const ScenarioBundle& Registry::scenario(const std::string& id) const {
  for (const auto& s : scenarios_) {
    if (s.id == id) return s;
  }
  fail(ErrorCode::not_found, "unknown scenario: " + id);
}

const DatasetRef& Registry::dataset_ref(const std::string& id) const {
  for (const auto& s : scenarios_) {
    if (s.dataset.id == id) return s.dataset;
  }
  fail(ErrorCode::not_found, "unknown dataset: " + id);
}

std::shared_ptr<const Dataset> Registry::dataset(const std::string& id) const {
  const DatasetRef& ref = dataset_ref(id);
  std::lock_guard lock(dataset_mutex_);
  auto it = datasets_.find(id);
  if (it == datasets_.end()) {
    it = datasets_.emplace(id, std::make_shared<const Dataset>(load_dataset(ref))).first;
  }
  return it->second;
}

}  // namespace xplain
