#include "xplain/platform/workspace.hpp"

#include <chrono>
#include <ctime>

#include "xplain/core/error.hpp"
#include "xplain/core/image.hpp"
#include "xplain/evaluation/agreement.hpp"
#include "xplain/platform/io.hpp"

namespace xplain {

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json methods_json(const std::vector<Method>& methods) {
  Json out = Json::array();
  for (Method m : methods) out.push_back(std::string(to_string(m)));
  return out;
}

Json annotations_json(const std::map<std::string, HumanAnnotation>& annotations) {
  Json out = Json::object();
  for (const auto& [id, a] : annotations) {
    out[id] = Json(std::vector<std::string>(a.relevant_units.begin(), a.relevant_units.end()));
  }
  return out;
}

}  // namespace

TrainOutcome train_and_store(ModelStore& store, const Dataset& dataset,
                             const TrainRequest& request) {
  request.config.validate();
  const DatasetSplit split = split_holdout(dataset, kHoldoutFraction, request.split_seed);
  const Model model = train_model(request.kind, split.train, request.config);
  const Classifier& classifier = as_classifier(model);
  const Featurizer& featurizer = featurizer_of(model);
  const bool tabular = dataset.task == TaskKind::tabular;

  TrainOutcome outcome;
  outcome.train_rows = split.train.size();
  outcome.holdout_rows = split.holdout.size();
  outcome.train_accuracy =
      evaluate_accuracy(classifier, tabular ? featurizer.impute(split.train) : split.train);
  outcome.holdout_accuracy =
      evaluate_accuracy(classifier, tabular ? featurizer.impute(split.holdout) : split.holdout);

  ModelMetadata metadata;
  metadata.config = request.config;
  metadata.dataset_id = dataset.id;
  metadata.split_seed = request.split_seed;
  metadata.holdout_accuracy = outcome.holdout_accuracy;
  metadata.created_at = request.created_at.empty() ? utc_now() : request.created_at;
  outcome.model_id = store.save(model, metadata);
  return outcome;
}

Workspace::Workspace(std::filesystem::path data_root, std::uint64_t default_seed)
    : registry_(std::move(data_root)), default_seed_(default_seed) {}

ExplainConfig Workspace::default_config() const {
  ExplainConfig config;
  config.seed = default_seed_;
  return config;
}

Sample Workspace::resolve_sample(const Model& model, const Json& body) const {
  require(body.is_object(), ErrorCode::invalid_argument, "request body: expected an object");
  if (auto it = body.find("sample"); it != body.end()) {
    const Json& s = *it;
    const TaskKind task = as_classifier(model).task();
    if (task == TaskKind::tabular && s.is_object() && s.contains("row")) {
      return tabular_from_object(featurizer_of(model).tabular_state().schema, s["row"], "sample.row");
    }
    Sample sample = sample_from_json(s);
    require(task_of(sample) == task, ErrorCode::invalid_argument,
            "sample kind " + std::string(to_string(task_of(sample))) + " does not match model task " +
                std::string(to_string(task)));
    return sample;
  }
  require(body.contains("scenario") && body.contains("sample_id"), ErrorCode::invalid_argument,
          "request body: expected \"sample\" or \"scenario\" with \"sample_id\"");
  const auto& bundle = registry_.scenario(string_member(body, "scenario", ""));
  return bundle.sample(string_member(body, "sample_id", "")).sample;
}

Json Workspace::scenarios() const {
  Json list = Json::array();
  for (const auto& s : registry_.scenarios()) {
    list.push_back({{"id", s.id},
                    {"title", s.title},
                    {"task", std::string(to_string(s.task))},
                    {"dataset", s.dataset.id},
                    {"models", s.model_ids},
                    {"methods", methods_json(s.methods)},
                    {"sample_count", s.demo_samples.size()}});
  }
  return {{"scenarios", list}};
}

Json Workspace::scenario(const std::string& id) const {
  const auto& s = registry_.scenario(id);
  Json samples = Json::array();
  for (const auto& d : s.demo_samples) samples.push_back({{"id", d.id}, {"label", d.label}});
  Json dataset{{"id", s.dataset.id}, {"format", s.dataset.format}};
  if (s.dataset.label_column) dataset["label_column"] = *s.dataset.label_column;
  return {{"id", s.id},
          {"title", s.title},
          {"task", std::string(to_string(s.task))},
          {"dataset", dataset},
          {"models", s.model_ids},
          {"methods", methods_json(s.methods)},
          {"demo_samples", samples},
          {"annotations", annotations_json(s.annotations)}};
}

Json Workspace::scenario_samples(const std::string& id) const {
  const auto& s = registry_.scenario(id);
  const auto model = registry_.store().load(s.model_ids.front());
  Json samples = Json::array();
  for (const auto& d : s.demo_samples) {
    Json entry{{"id", d.id},
               {"label", d.label},
               {"sample", to_json(d.sample)},
               {"units", unit_ids_for(model->model, d.sample)}};
    if (const auto* image = std::get_if<ImageSample>(&d.sample)) {
      const auto& grid = featurizer_of(model->model).image_state();
      const SegmentMap map = segment_grid(*image, grid.grid_rows, grid.grid_cols);
      entry["segments"] = {{"rows", map.rows}, {"cols", map.cols}, {"assignment", map.assignment}};
    }
    if (auto a = s.annotations.find(d.id); a != s.annotations.end()) {
      entry["annotation"] = std::vector<std::string>(a->second.relevant_units.begin(),
                                                     a->second.relevant_units.end());
    }
    samples.push_back(std::move(entry));
  }
  return {{"scenario", id}, {"samples", samples}};
}

Json Workspace::models() const {
  Json list = Json::array();
  for (const auto& id : registry_.store().list()) {
    const auto record = registry_.store().load(id);
    const Classifier& c = as_classifier(record->model);
    list.push_back({{"id", id},
                    {"kind", std::string(to_string(kind_of(record->model)))},
                    {"task", std::string(to_string(c.task()))},
                    {"class_labels", c.class_labels()},
                    {"metadata", to_json(record->metadata)}});
  }
  return {{"models", list}};
}

Json Workspace::predict(const std::string& model_id, const Sample& sample) const {
  const auto record = registry_.store().load(model_id);
  return {{"model_id", model_id},
          {"prediction", to_json(as_classifier(record->model).predict_proba(sample))}};
}

Json Workspace::explain(const std::string& model_id, const Sample& sample, Method method,
                        const ExplainConfig& config) const {
  if (method == Method::permutation_importance) return permutation_importance(model_id, config);
  const auto record = registry_.store().load(model_id);
  const Attribution attribution = xplain::explain(record->model, sample, method, config);
  return {{"model_id", model_id},
          {"attribution", to_json(attribution)},
          {"prediction", to_json(as_classifier(record->model).predict_proba(sample))}};
}

Json Workspace::permutation_importance(const std::string& model_id,
                                       const ExplainConfig& config) const {
  const auto record = registry_.store().load(model_id);
  check_method_available(record->model, Method::permutation_importance, config.policy);
  const auto dataset = registry_.dataset(record->metadata.dataset_id);
  const DatasetSplit split = split_holdout(*dataset, kHoldoutFraction, record->metadata.split_seed);
  // Holdout rows with missing cells get the training fill values.
  const Dataset holdout = dataset->task == TaskKind::tabular
                              ? featurizer_of(record->model).impute(split.holdout)
                              : split.holdout;
  const GlobalImportance importance = explain_model(record->model, holdout, config);
  return {{"model_id", model_id},
          {"global_importance", to_json(importance)},
          {"holdout",
           {{"dataset_id", dataset->id},
            {"rows", split.holdout.size()},
            {"split_seed", record->metadata.split_seed}}}};
}

Json Workspace::profile_dataset(const std::string& dataset_id) const {
  const RawTable table = load_raw_table(registry_.dataset_ref(dataset_id));
  Json doc = to_json(profile(table));
  doc["dataset_id"] = dataset_id;
  return doc;
}

Json Workspace::agreement(const std::string& scenario_id, const std::vector<Method>& methods,
                          std::optional<std::size_t> k, const ExplainConfig& config,
                          const std::optional<std::string>& model_id) const {
  const auto& bundle = registry_.scenario(scenario_id);
  const std::string id = model_id.value_or(bundle.model_ids.front());
  const auto record = registry_.store().load(id);
  EvaluationScenario scenario;
  scenario.id = bundle.id;
  scenario.model = &record->model;
  for (const auto& d : bundle.demo_samples) scenario.samples.push_back({d.id, d.sample});
  scenario.annotations = bundle.annotations;
  Json doc = to_json(agreement_report(scenario, methods, k, config));
  doc["model_id"] = id;
  return doc;
}

}  // namespace xplain
