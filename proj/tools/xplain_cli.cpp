// xplain: command line front end for training, prediction, explanation,
// profiling, agreement reports, bundle validation and the HTTP service.

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "xplain/core/error.hpp"
#include "xplain/platform/bundle.hpp"
#include "xplain/platform/io.hpp"
#include "xplain/platform/serialization.hpp"
#include "xplain/platform/service.hpp"
#include "xplain/platform/workspace.hpp"

namespace fs = std::filesystem;
using namespace xplain;

namespace {

constexpr int kExitUsage = 2;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return 3;
    case ErrorCode::not_found: return 4;
    case ErrorCode::method_unavailable: return 5;
    case ErrorCode::failed_precondition: return 6;
    case ErrorCode::rank_deficient: return 7;
    case ErrorCode::data_loss: return 8;
    case ErrorCode::internal: return 9;
  }
  return 9;
}

void emit(const Json& doc) { std::cout << canonical_dump(doc) << "\n"; }

struct Options {
  std::string data_root;
  std::string config_file;
  bool summary = false;

  // train
  std::string data;
  std::string dataset;
  std::string task;
  std::string kind;
  std::string label;
  std::string train_config;
  std::uint64_t split_seed = 0;
  std::optional<std::uint64_t> train_seed;
  std::optional<int> epochs;
  std::string created_at;

  // predict / explain
  std::string model;
  std::string input;
  std::string scenario;
  std::string sample;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::string explain_config;
  std::string policy = "default";

  // agree
  std::string methods;
  std::optional<std::size_t> k;

  // serve
  std::optional<int> port;
  std::string host;

  // bundle validate
  std::string bundle_path;
};

fs::path resolve_data_root(const Options& o) {
  if (!o.data_root.empty()) return o.data_root;
  const ServiceConfig config =
      load_service_config(o.config_file.empty() ? std::nullopt
                                                : std::optional<fs::path>(o.config_file));
  return config.data_root;
}

std::uint64_t default_seed(const Options& o) {
  if (o.config_file.empty()) return 0;
  return load_service_config(fs::path(o.config_file)).default_seed;
}

MethodPolicy policy_named(const std::string& name) {
  if (name == "default") return MethodPolicy::scenario_default();
  if (name == "all") return MethodPolicy::allow_all();
  fail(ErrorCode::invalid_argument, "--policy: expected default or all");
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

Sample read_input(const Workspace& ws, const Model& model, const fs::path& path) {
  const std::string ext = lower_extension(path);
  const TaskKind task = as_classifier(model).task();
  if (ext == ".json") {
    const Json doc = parse_json(read_file(path), path.string());
    if (doc.is_object() && (doc.contains("sample") || doc.contains("scenario"))) {
      return ws.resolve_sample(model, doc);
    }
    return ws.resolve_sample(model, Json{{"sample", doc}});
  }
  if (ext == ".csv") {
    require(task == TaskKind::tabular, ErrorCode::invalid_argument,
            path.string() + ": csv input needs a tabular model");
    const RawTable table = read_csv_file(path);
    require(table.rows.size() == 1, ErrorCode::invalid_argument,
            path.string() + ": expected a header and exactly one data row");
    return tabular_row(featurizer_of(model).tabular_state().schema, table, 0);
  }
  if (ext == ".ppm") {
    require(task == TaskKind::image, ErrorCode::invalid_argument,
            path.string() + ": image input needs an image model");
    return read_ppm(path);
  }
  if (ext == ".txt") {
    require(task == TaskKind::text, ErrorCode::invalid_argument,
            path.string() + ": text input needs a text model");
    std::string text = read_file(path);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return TextSample{text};
  }
  fail(ErrorCode::invalid_argument,
       path.string() + ": unsupported input type (expected .json, .csv, .ppm or .txt)");
}

// Model id from --model, or the first model of --scenario.
std::string pick_model(const Workspace& ws, const Options& o) {
  if (!o.model.empty()) return o.model;
  require(!o.scenario.empty(), ErrorCode::invalid_argument, "--model or --scenario is required");
  return ws.registry().scenario(o.scenario).model_ids.front();
}

Sample pick_sample(const Workspace& ws, const Model& model, const Options& o) {
  if (!o.input.empty()) return read_input(ws, model, o.input);
  require(!o.scenario.empty() && !o.sample.empty(), ErrorCode::invalid_argument,
          "--input or --scenario with --sample is required");
  return ws.registry().scenario(o.scenario).sample(o.sample).sample;
}

std::string fmt(double x, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

void print_prediction(const Json& p) {
  const auto& labels = p["class_labels"];
  const auto& probs = p["probabilities"];
  std::cout << "predicted: " << p["predicted_label"].get<std::string>() << "\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::cout << "  " << fmt(probs[i].get<double>(), "%.4f") << "  " << labels[i].get<std::string>()
              << "\n";
  }
}

void print_explanation(const Json& doc) {
  if (doc.contains("global_importance")) {
    const auto& g = doc["global_importance"];
    std::cout << "permutation importance (accuracy drop, " << g["repeats"].get<int>()
              << " repeats, baseline " << fmt(g["baseline_score"].get<double>(), "%.4f") << ")\n";
    for (std::size_t i = 0; i < g["features"].size(); ++i) {
      std::cout << "  " << fmt(g["importance"][i].get<double>(), "%+.4f") << "  "
                << g["features"][i].get<std::string>() << "\n";
    }
    return;
  }
  const auto& a = doc["attribution"];
  std::cout << a["method"].get<std::string>() << " for class '" << a["target_class"].get<std::string>()
            << "'\n";
  std::vector<std::size_t> order(a["units"].size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(a["scores"][x].get<double>()) > std::abs(a["scores"][y].get<double>());
  });
  for (std::size_t i = 0; i < std::min<std::size_t>(order.size(), 10); ++i) {
    std::cout << "  " << fmt(a["scores"][order[i]].get<double>(), "%+.5f") << "  "
              << a["units"][order[i]].get<std::string>() << "\n";
  }
  if (order.size() > 10) std::cout << "  (" << order.size() - 10 << " more units)\n";
}

void print_profile(const Json& doc) {
  std::cout << doc["row_count"].get<std::size_t>() << " rows\n";
  for (const auto& c : doc["columns"]) {
    std::cout << "  " << c["name"].get<std::string>() << "  "
              << (c["inferred_kind"].is_null() ? "missing" : c["inferred_kind"].get<std::string>())
              << "  missing " << c["missing_count"].get<std::size_t>() << ", distinct "
              << c["distinct_count"].get<std::size_t>();
    if (!c["numeric"].is_null()) {
      std::cout << ", mean " << fmt(c["numeric"]["mean"].get<double>(), "%.3f") << ", std "
                << fmt(c["numeric"]["std"].get<double>(), "%.3f");
    }
    std::cout << "\n";
  }
  for (const auto& w : doc["warnings"]) {
    std::cout << "warning: " << w["column"].get<std::string>() << ": " << w["kind"].get<std::string>()
              << " (" << w["detail"].get<std::string>() << ")\n";
  }
}

void print_agreement(const Json& doc) {
  std::cout << "scenario " << doc["scenario"].get<std::string>() << ": "
            << doc["coverage"]["samples_evaluated"].get<std::size_t>() << "/"
            << doc["coverage"]["samples_total"].get<std::size_t>() << " samples\n";
  for (const auto& a : doc["aggregates"]) {
    auto mean = [&](const char* key) {
      return a[key]["mean"].is_null() ? std::string("n/a") : fmt(a[key]["mean"].get<double>(), "%.3f");
    };
    std::cout << "  " << a["methods"][0].get<std::string>() << " vs "
              << a["methods"][1].get<std::string>() << ": spearman " << mean("spearman")
              << ", top-k jaccard " << mean("topk_jaccard") << ", sign " << mean("sign_agreement")
              << "\n";
  }
  for (const auto& p : doc["plausibility"]) {
    std::cout << "  plausibility " << p["method"].get<std::string>() << " on "
              << p["sample_id"].get<std::string>() << ": " << fmt(p["score"].get<double>(), "%.2f")
              << "\n";
  }
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  require(!out.empty(), ErrorCode::invalid_argument, "--methods: expected a comma separated list");
  return out;
}

Dataset dataset_from_path(const fs::path& path, const std::string& label, std::string id) {
  if (id.empty()) id = path.stem().string();
  if (fs::is_directory(path)) return load_image_folder(path, id);
  const std::string ext = lower_extension(path);
  if (ext == ".csv") {
    require(!label.empty(), ErrorCode::invalid_argument, "--label is required for csv data");
    return load_tabular_csv(path, label, id);
  }
  if (ext == ".jsonl") return load_text_jsonl(path, id);
  fail(ErrorCode::invalid_argument,
       path.string() + ": expected a .csv file, a .jsonl file or an image directory");
}

int run_train(const Options& o) {
  const fs::path root = resolve_data_root(o);
  std::shared_ptr<const Dataset> dataset;
  if (!o.dataset.empty()) {
    Registry registry(root);
    dataset = registry.dataset(o.dataset);
  } else {
    require(!o.data.empty(), ErrorCode::invalid_argument, "--data or --dataset is required");
    dataset = std::make_shared<const Dataset>(dataset_from_path(o.data, o.label, ""));
  }
  if (!o.task.empty()) {
    require(parse_task_kind(o.task) == dataset->task, ErrorCode::invalid_argument,
            "--task " + o.task + " does not match the dataset (" +
                std::string(to_string(dataset->task)) + ")");
  }
  TrainRequest request;
  request.kind = !o.kind.empty() ? parse_model_kind(o.kind)
                 : dataset->task == TaskKind::tabular ? ModelKind::logistic
                                                      : ModelKind::mlp;
  if (!o.train_config.empty()) {
    request.config = train_config_from_json(parse_json(read_file(o.train_config), o.train_config));
  }
  if (o.train_seed) request.config.seed = *o.train_seed;
  if (o.epochs) request.config.epochs = *o.epochs;
  request.split_seed = o.split_seed;
  request.created_at = o.created_at;
  ModelStore store(root / "models");
  const TrainOutcome outcome = train_and_store(store, *dataset, request);
  const Json doc{{"model_id", outcome.model_id},
                 {"kind", std::string(to_string(request.kind))},
                 {"task", std::string(to_string(dataset->task))},
                 {"dataset_id", dataset->id},
                 {"holdout_accuracy", outcome.holdout_accuracy},
                 {"train_accuracy", outcome.train_accuracy},
                 {"train_rows", outcome.train_rows},
                 {"holdout_rows", outcome.holdout_rows}};
  if (o.summary) {
    std::cout << "model " << outcome.model_id << " (" << to_string(request.kind) << ", "
              << dataset->id << "): holdout accuracy " << fmt(outcome.holdout_accuracy, "%.4f")
              << " on " << outcome.holdout_rows << " rows\n";
  } else {
    emit(doc);
  }
  return 0;
}

int run_predict(const Options& o) {
  Workspace ws(resolve_data_root(o), default_seed(o));
  const std::string id = pick_model(ws, o);
  const auto record = ws.registry().store().load(id);
  const Json doc = ws.predict(id, pick_sample(ws, record->model, o));
  if (o.summary) {
    print_prediction(doc["prediction"]);
  } else {
    emit(doc);
  }
  return 0;
}

int run_explain(const Options& o) {
  Workspace ws(resolve_data_root(o), default_seed(o));
  const std::string id = pick_model(ws, o);
  const auto record = ws.registry().store().load(id);
  const Method method = parse_method(o.method);
  ExplainConfig config = ws.default_config();
  if (o.seed) config.seed = *o.seed;
  config.policy = policy_named(o.policy);
  if (!o.explain_config.empty()) {
    config = explain_config_from_json(parse_json(read_file(o.explain_config), o.explain_config), config);
  }
  Json doc;
  if (method == Method::permutation_importance) {
    doc = ws.permutation_importance(id, config);
  } else {
    doc = ws.explain(id, pick_sample(ws, record->model, o), method, config);
  }
  if (o.summary) {
    print_explanation(doc);
  } else {
    emit(doc);
  }
  return 0;
}

int run_profile(const Options& o) {
  Json doc;
  if (!o.data.empty()) {
    doc = to_json(profile(read_csv_file(o.data)));
    doc["dataset_id"] = fs::path(o.data).stem().string();
  } else {
    require(!o.dataset.empty(), ErrorCode::invalid_argument, "--data or --dataset is required");
    Workspace ws(resolve_data_root(o), default_seed(o));
    doc = ws.profile_dataset(o.dataset);
  }
  if (o.summary) {
    print_profile(doc);
  } else {
    emit(doc);
  }
  return 0;
}

int run_agree(const Options& o) {
  Workspace ws(resolve_data_root(o), default_seed(o));
  ExplainConfig config = ws.default_config();
  if (o.seed) config.seed = *o.seed;
  config.policy = policy_named(o.policy);
  const Json doc = ws.agreement(o.scenario, parse_methods(o.methods), o.k, config,
                                o.model.empty() ? std::nullopt : std::optional<std::string>(o.model));
  if (o.summary) {
    print_agreement(doc);
  } else {
    emit(doc);
  }
  return 0;
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(const Options& o) {
  ServiceConfig config =
      load_service_config(o.config_file.empty() ? std::nullopt
                                                : std::optional<fs::path>(o.config_file));
  if (!o.data_root.empty()) config.data_root = o.data_root;
  if (o.port) config.port = *o.port;
  if (!o.host.empty()) config.host = o.host;
  Service service(config);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread listener([&] { service.serve(); });
  for (int i = 0; i < 500 && service.bound_port() == 0 && !service.running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  std::cerr << "xplain serving " << config.data_root.string() << " on http://" << config.host << ":"
            << service.bound_port() << "\n";
  listener.join();
  g_service = nullptr;
  return 0;
}

int run_bundle_validate(const Options& o) {
  const fs::path dir = o.bundle_path;
  // Models live in the data root two levels above a bundle (<root>/scenarios/<id>).
  const fs::path root = o.data_root.empty() ? fs::absolute(dir).lexically_normal().parent_path().parent_path()
                                            : fs::path(o.data_root);
  ModelStore store(root / "models");
  const ScenarioBundle bundle = load_bundle(dir, store);
  const Json doc{{"valid", true},
                 {"id", bundle.id},
                 {"task", std::string(to_string(bundle.task))},
                 {"models", bundle.model_ids},
                 {"demo_samples", bundle.demo_samples.size()},
                 {"annotations", bundle.annotations.size()}};
  if (o.summary) {
    std::cout << "bundle " << bundle.id << " is valid (" << to_string(bundle.task) << ", "
              << bundle.demo_samples.size() << " samples, " << bundle.model_ids.size()
              << " models)\n";
  } else {
    emit(doc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"xplain: train, explain and compare classifiers"};
  app.require_subcommand(1);
  app.add_option("--data-root", o.data_root, "Data root (default: $XPLAIN_DATA_ROOT, config file, ./data)");
  app.add_option("--config-file", o.config_file, "Service configuration file");
  app.add_flag("--summary", o.summary, "Print a human readable summary instead of a document");

  auto* train = app.add_subcommand("train", "Train a model and add it to the model store");
  train->add_option("--data", o.data, "Dataset file (.csv, .jsonl) or image directory");
  train->add_option("--dataset", o.dataset, "Registered dataset id");
  train->add_option("--task", o.task, "Expected task kind");
  train->add_option("--kind", o.kind, "logistic, mlp or tree");
  train->add_option("--label", o.label, "Label column for csv data");
  train->add_option("--config", o.train_config, "Training configuration document");
  train->add_option("--split-seed", o.split_seed, "Seed of the holdout split");
  train->add_option("--seed", o.train_seed, "Training seed");
  train->add_option("--epochs", o.epochs, "Training epochs");
  train->add_option("--created-at", o.created_at, "Timestamp stored with the model");

  auto add_sample_options = [&](CLI::App* cmd) {
    cmd->add_option("--model", o.model, "Model id");
    cmd->add_option("--input", o.input, "Sample file (.json, .csv, .ppm, .txt)");
    cmd->add_option("--scenario", o.scenario, "Scenario id");
    cmd->add_option("--sample", o.sample, "Demo sample id within --scenario");
  };
  auto* predict = app.add_subcommand("predict", "Classify one sample");
  add_sample_options(predict);

  auto* explain = app.add_subcommand("explain", "Explain a prediction");
  add_sample_options(explain);
  explain->add_option("--method", o.method, "lime, kernel_shap, exact_shapley, lrp or permutation_importance")
      ->required();
  explain->add_option("--seed", o.seed, "Sampling seed (default 0)");
  explain->add_option("--config", o.explain_config, "Explainer configuration document");
  explain->add_option("--policy", o.policy, "Method policy: default or all");

  auto* prof = app.add_subcommand("profile", "Profile a tabular dataset");
  prof->add_option("--data", o.data, "CSV file");
  prof->add_option("--dataset", o.dataset, "Registered dataset id");

  auto* agree = app.add_subcommand("agree", "Agreement report over a scenario");
  agree->add_option("--scenario", o.scenario, "Scenario id")->required();
  agree->add_option("--methods", o.methods, "Comma separated methods")->required();
  agree->add_option("--k", o.k, "Top-k size (default min(5, ceil(M/3)))");
  agree->add_option("--seed", o.seed, "Sampling seed (default 0)");
  agree->add_option("--model", o.model, "Model id (default: the scenario's first model)");
  agree->add_option("--policy", o.policy, "Method policy: default or all");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", o.port, "Port (0 picks a free port)");
  serve->add_option("--host", o.host, "Bind address");

  auto* bundle = app.add_subcommand("bundle", "Scenario bundle utilities");
  bundle->require_subcommand(1);
  auto* validate = bundle->add_subcommand("validate", "Validate a scenario bundle directory");
  validate->add_option("path", o.bundle_path, "Bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int printed = app.exit(e);
    return printed == 0 ? 0 : kExitUsage;
  }

  try {
    if (train->parsed()) return run_train(o);
    if (predict->parsed()) return run_predict(o);
    if (explain->parsed()) return run_explain(o);
    if (prof->parsed()) return run_profile(o);
    if (agree->parsed()) return run_agree(o);
    if (serve->parsed()) return run_serve(o);
    if (validate->parsed()) return run_bundle_validate(o);
  } catch (const Error& e) {
    emit({{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}});
    std::cerr << "xplain: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    emit({{"error", {{"code", "internal"}, {"message", e.what()}}}});
    std::cerr << "xplain: internal: " << e.what() << "\n";
    return exit_code(ErrorCode::internal);
  }
  return 0;
}
