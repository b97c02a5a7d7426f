#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "xplain/core/error.hpp"
#include "xplain/explainers/explain.hpp"
#include "xplain/platform/bundle.hpp"
#include "xplain/platform/io.hpp"
#include "xplain/platform/serialization.hpp"
#include "xplain/platform/service.hpp"
#include "xplain/platform/store.hpp"
#include "xplain/platform/workspace.hpp"

#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace xplain {
namespace {

using testing::TempDir;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::internal;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected an error";
  return {};
}

// ------------------------------------------------------------ serialization

TEST(Canonical, SortsKeysAndKeepsSeventeenDigits) {
  EXPECT_EQ(canonical_dump(parse_json(R"({"b":1,"a":[0.1,true,null]})", "t")),
            R"({"a":[0.10000000000000001,true,null],"b":1})");
  EXPECT_EQ(code_of([] { canonical_dump(Json(std::nan(""))); }), ErrorCode::data_loss);
  EXPECT_EQ(code_of([] { parse_json("{", "t"); }), ErrorCode::invalid_argument);
}

// Property: every model kind survives a document round trip with
// bit-identical predictions and an unchanged id.
TEST(ModelJson, RoundTripPreservesPredictions) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(6));
    const Model model = trial % 3 == 0   ? Model(testing::random_logistic(rng, m, 3))
                        : trial % 3 == 1 ? Model(testing::random_mlp(rng, m, 2, {4, 3}))
                                         : Model(testing::random_tree(rng, m, 3, 3));
    const Model back = model_from_json(parse_json(canonical_dump(to_json(model)), "model"));
    ASSERT_EQ(model_id(model), model_id(back));
    for (int i = 0; i < 20; ++i) {
      const TabularSample s = testing::random_row(rng, m);
      ASSERT_EQ(as_classifier(model).predict_proba(s).probabilities(),
                as_classifier(back).predict_proba(s).probabilities());
    }
  }
}

TEST(ModelJson, RejectsMalformedPayloads) {
  Rng rng(2);
  Json doc = to_json(Model(testing::random_logistic(rng, 3, 2)));
  Json bad = doc;
  bad["kind"] = "forest";
  EXPECT_EQ(code_of([&] { model_from_json(bad); }), ErrorCode::invalid_argument);
  bad = doc;
  bad.erase("class_labels");
  EXPECT_EQ(code_of([&] { model_from_json(bad); }), ErrorCode::invalid_argument);
  bad = doc;
  bad["weights"][0].push_back(1.0);
  EXPECT_EQ(code_of([&] { model_from_json(bad); }), ErrorCode::invalid_argument);
}

TEST(SampleJson, RoundTripsAllKinds) {
  const std::vector<Sample> samples{TabularSample{{1.5, std::string("N"), Cell{}}}, TextSample{"hello world"},
                                    ImageSample(2, 1, std::vector<Rgb>{{1, 2, 3}, {250, 0, 9}})};
  for (const Sample& s : samples) EXPECT_EQ(sample_from_json(to_json(s)), s);
  EXPECT_THROW(sample_from_json(parse_json(R"({"kind":"image","height":1,"width":1,"pixels":[1,2]})", "t")),
               Error);
  EXPECT_THROW(sample_from_json(parse_json(R"({"kind":"audio"})", "t")), Error);
}

TEST(AttributionJson, RoundTrips) {
  Attribution a;
  a.method = Method::kernel_shap;
  a.target_class = "Yes";
  a.unit_kind = UnitKind::feature;
  a.units = {"x", "y"};
  a.scores = {0.1, -0.25};
  a.baseline_value = 0.3;
  a.prediction_value = 0.15;
  a.seed = 7;
  a.diagnostics["coalitions"] = 2;
  const Attribution b = attribution_from_json(to_json(a));
  EXPECT_EQ(canonical_dump(to_json(a)), canonical_dump(to_json(b)));
}

TEST(ConfigJson, RejectsUnknownFields) {
  EXPECT_THROW(train_config_from_json(parse_json(R"({"epochs":3,"bogus":1})", "t")), Error);
  const TrainConfig c = train_config_from_json(parse_json(R"({"epochs":3,"hidden_sizes":[4,2]})", "t"));
  EXPECT_EQ(c.epochs, 3);
  EXPECT_EQ(c.hidden_sizes, (std::vector<int>{4, 2}));
  EXPECT_THROW(explain_config_from_json(parse_json(R"({"lime":{"samples":5}})", "t")), Error);
  const ExplainConfig e =
      explain_config_from_json(parse_json(R"({"lime":{"num_samples":300},"shap":{"mode":"sampled"}})", "t"));
  EXPECT_EQ(e.lime.num_samples, 300);
  EXPECT_EQ(e.shap_mode, ShapConfig::Mode::sampled);
}

// ---------------------------------------------------------------------- io

TEST(Csv, ParsesQuotesMissingAndBom) {
  std::istringstream in("\xEF\xBB\xBF" "a,b,c\n1,\"x, \"\"y\"\"\",\n\n2,z,3\n");
  const RawTable t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(*t.rows[0][1], "x, \"y\"");
  EXPECT_FALSE(t.rows[0][2].has_value());
  EXPECT_EQ(*t.rows[1][2], "3");
}

TEST(Csv, RejectsRaggedRowsAndDuplicateHeaders) {
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_csv(ragged), Error);
  std::istringstream dup("a,a\n1,2\n");
  EXPECT_THROW(read_csv(dup), Error);
  std::istringstream quote("a\n\"open\n");
  EXPECT_THROW(read_csv(quote), Error);
}

TEST(Csv, EscapeRoundTrips) {
  const std::string field = "he said \"hi\", then left";
  std::istringstream in("h\n" + csv_escape(field) + "\n");
  EXPECT_EQ(*read_csv(in).rows[0][0], field);
}

TEST(Ppm, WriteReadRoundTrip) {
  TempDir dir("ppm");
  Rng rng(3);
  std::vector<Rgb> pixels;
  for (int i = 0; i < 35; ++i) {
    pixels.push_back({static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                      static_cast<std::uint8_t>(rng.below(256))});
  }
  const ImageSample image(5, 7, pixels);
  write_ppm(dir.path() / "x.ppm", image);
  EXPECT_EQ(read_ppm(dir.path() / "x.ppm"), image);
  write_file_atomic(dir.path() / "ascii.ppm", "P3\n# comment\n2 1\n255\n1 2 3 4 5 6\n");
  EXPECT_EQ(read_ppm(dir.path() / "ascii.ppm"), ImageSample(1, 2, std::vector<Rgb>{{1, 2, 3}, {4, 5, 6}}));
  write_file_atomic(dir.path() / "bad.ppm", "P6\n2 2\n255\nabc");
  EXPECT_THROW(read_ppm(dir.path() / "bad.ppm"), Error);
}

TEST(TabularDataset, InfersSchemaAndLabels) {
  std::istringstream in("t,dir,rain,label\n1.5,N,yes,a\n2,S,no,b\n,N,yes,a\n");
  const Dataset d = tabular_dataset(read_csv(in), "label", "w");
  ASSERT_TRUE(d.schema.has_value());
  EXPECT_EQ(d.schema->column(0).kind, ColumnKind::numeric);
  EXPECT_EQ(d.schema->column(1).kind, ColumnKind::categorical);
  EXPECT_EQ(d.schema->column(1).categories, (std::vector<std::string>{"N", "S"}));
  EXPECT_EQ(d.schema->column(2).kind, ColumnKind::boolean);
  EXPECT_EQ(d.class_labels, (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(is_missing(std::get<TabularSample>(d.samples[2]).values[0]));
  std::istringstream unlabeled("x,label\n1,\n");
  EXPECT_THROW(tabular_dataset(read_csv(unlabeled), "label", "w"), Error);
}

TEST(TextJsonl, RejectsDuplicateIds) {
  TempDir dir("jsonl");
  write_file_atomic(dir.path() / "a.jsonl", "{\"id\":\"1\",\"text\":\"x\",\"label\":\"a\"}\n"
                                            "{\"id\":\"1\",\"text\":\"y\",\"label\":\"b\"}\n");
  EXPECT_THROW(load_text_jsonl(dir.path() / "a.jsonl", "t"), Error);
}

// ------------------------------------------------------------------- store

TEST(Store, SaveLoadIsContentAddressedAndIdempotent) {
  TempDir dir("store");
  ModelStore store(dir.path());
  Rng rng(4);
  const Model model = testing::random_mlp(rng, 3, 2, {4});
  ModelMetadata meta;
  meta.dataset_id = "d";
  meta.created_at = "2026-01-01T00:00:00Z";
  const std::string id = store.save(model, meta);
  EXPECT_EQ(id, model_id(model));
  EXPECT_EQ(id.size(), 16u);
  EXPECT_EQ(store.save(model, meta), id);
  EXPECT_EQ(store.list(), std::vector<std::string>{id});

  ModelStore fresh(dir.path());
  const auto record = fresh.load(id);
  for (int i = 0; i < 100; ++i) {
    const TabularSample s = testing::random_row(rng, 3);
    ASSERT_EQ(as_classifier(model).predict_proba(s).probabilities(),
              as_classifier(record->model).predict_proba(s).probabilities());
  }
  EXPECT_EQ(record->metadata.dataset_id, "d");
}

TEST(Store, DetectsTamperingAndMissingIds) {
  TempDir dir("tamper");
  Rng rng(5);
  const Model model = testing::random_logistic(rng, 3, 2);
  std::string id;
  {
    ModelStore store(dir.path());
    id = store.save(model, {});
  }
  const fs::path file = dir.path() / (id + ".json");
  std::string text = read_file(file);
  const auto at = text.find_first_of("123456789", text.find("\"bias\""));
  ASSERT_NE(at, std::string::npos);
  text[at] = text[at] == '9' ? '1' : static_cast<char>(text[at] + 1);
  write_file_atomic(file, text);
  ModelStore store(dir.path());
  EXPECT_EQ(code_of([&] { store.load(id); }), ErrorCode::data_loss);
  EXPECT_NE(message_of([&] { store.load(id); }).find("hash mismatch"), std::string::npos);
  EXPECT_EQ(code_of([&] { store.load("0123456789abcdef"); }), ErrorCode::not_found);
  EXPECT_EQ(code_of([&] { store.load("../etc/passwd"); }), ErrorCode::not_found);
}

// ------------------------------------------------------------------ bundles

class BundleTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = testing::copy_data_root("bundle");
    data_ = root_->path() / "data";
  }

  fs::path bundle(const std::string& id) const { return data_ / "scenarios" / id; }

  Json manifest(const std::string& id) const {
    return parse_json(read_file(bundle(id) / "manifest.json"), "manifest");
  }

  void write_manifest(const std::string& id, const Json& doc) const {
    write_file_atomic(bundle(id) / "manifest.json", doc.dump(2));
  }

  std::string load_error(const std::string& id) const {
    ModelStore store(data_ / "models");
    return message_of([&] { load_bundle(bundle(id), store); });
  }

  std::unique_ptr<TempDir> root_;
  fs::path data_;
};

TEST_F(BundleTest, BundledScenariosLoadWithTheirTasks) {
  const Registry registry(data_);
  ASSERT_EQ(registry.scenarios().size(), 3u);
  EXPECT_EQ(registry.scenario("transport").task, TaskKind::text);
  EXPECT_EQ(registry.scenario("cars").task, TaskKind::image);
  EXPECT_EQ(registry.scenario("weather").task, TaskKind::tabular);
  EXPECT_EQ(registry.dataset("weather")->size(), 300u);
}

TEST_F(BundleTest, EmptyDirectoryHasNoManifest) {
  fs::create_directories(data_ / "empty");
  ModelStore store(data_ / "models");
  EXPECT_NE(message_of([&] { load_bundle(data_ / "empty", store); }).find("manifest not found"),
            std::string::npos);
}

TEST_F(BundleTest, LabelOutsideModelClassesNamesTheSample) {
  Json m = manifest("transport");
  m["demo_samples"][2]["label"] = "flat_tyre";
  write_manifest("transport", m);
  const std::string error = load_error("transport");
  EXPECT_NE(error.find("manifest.demo_samples[2]"), std::string::npos) << error;
  EXPECT_NE(error.find("sample t3"), std::string::npos) << error;
}

// Every malformed variant is rejected with an error naming the offending path.
TEST_F(BundleTest, MalformedManifestsGivePathPreciseErrors) {
  struct Case {
    std::string scenario;
    std::function<void(Json&)> mutate;
    std::string expected;
  };
  const std::vector<Case> cases{
      {"weather", [](Json& m) { m.erase("title"); }, "manifest.title"},
      {"weather", [](Json& m) { m["task"] = "audio"; }, "manifest.task"},
      {"weather", [](Json& m) { m["task"] = "text"; }, "manifest.dataset"},
      {"weather", [](Json& m) { m["dataset"]["path"] = "nope.csv"; }, "manifest.dataset"},
      {"weather", [](Json& m) { m["models"] = Json::array(); }, "manifest.models"},
      {"weather", [](Json& m) { m["models"][0] = "ffffffffffffffff"; }, "manifest.models[0]"},
      {"weather", [](Json& m) { m["methods"][1] = "gradcam"; }, "manifest.methods[1]"},
      {"weather", [](Json& m) { m["demo_samples"][1]["row"]["Humidity3pm"] = "wet"; },
       "manifest.demo_samples[1]"},
      {"weather", [](Json& m) { m["demo_samples"][0]["row"]["Sunshine"] = 3; }, "manifest.demo_samples[0]"},
      {"weather", [](Json& m) { m["demo_samples"][1]["id"] = m["demo_samples"][0]["id"]; },
       "manifest.demo_samples[1]"},
      {"cars", [](Json& m) { m["demo_samples"][3]["image"] = "demo/missing.ppm"; }, "manifest.demo_samples[3]"},
      {"cars", [](Json& m) { m["models"][0] = m["models"][0].get<std::string>() + "x"; }, "manifest.models[0]"},
      {"transport", [](Json& m) { m["demo_samples"][0].erase("text"); }, "manifest.demo_samples[0]"},
      {"transport", [](Json& m) { m["annotations"] = "absent.json"; }, "manifest.annotations"},
  };
  for (const Case& c : cases) {
    SetUp();
    Json m = manifest(c.scenario);
    c.mutate(m);
    write_manifest(c.scenario, m);
    const std::string error = load_error(c.scenario);
    EXPECT_NE(error.find(c.expected), std::string::npos) << c.expected << " <- " << error;
  }
}

TEST_F(BundleTest, AnnotationsMustResolve) {
  write_file_atomic(bundle("transport") / "annotations.json", R"({"t1":["late@99"]})");
  EXPECT_NE(load_error("transport").find("annotations.t1"), std::string::npos);
  write_file_atomic(bundle("transport") / "annotations.json", R"({"t9":["late@5"]})");
  EXPECT_NE(load_error("transport").find("annotations.t9"), std::string::npos);
  write_file_atomic(bundle("transport") / "annotations.json", R"({"t1":[]})");
  EXPECT_FALSE(load_error("transport").empty());
}

TEST_F(BundleTest, InvalidJsonIsReportedNotThrownThrough) {
  write_file_atomic(bundle("cars") / "manifest.json", "{\"id\": ");
  EXPECT_NE(load_error("cars").find("manifest"), std::string::npos);
}

// ---------------------------------------------------------------- service

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = testing::copy_data_root("service");
    ServiceConfig config;
    config.data_root = root_->path() / "data";
    service_ = std::make_unique<Service>(config);
  }

  Json call(const std::string& method, const std::string& target, const Json& body, int expected) {
    const HttpResponse r = service_->handle(method, target, body.is_null() ? "" : body.dump());
    EXPECT_EQ(r.status, expected) << method << " " << target << ": " << r.body;
    return parse_json(r.body, "response");
  }

  std::string first_model(const std::string& scenario) {
    return call("GET", "/scenarios/" + scenario, nullptr, 200)["models"][0].get<std::string>();
  }

  std::unique_ptr<TempDir> root_;
  std::unique_ptr<Service> service_;
};

TEST_F(ServiceTest, ListsThreeScenarios) {
  const Json doc = call("GET", "/scenarios", nullptr, 200);
  ASSERT_EQ(doc["scenarios"].size(), 3u);
  std::set<std::string> tasks;
  for (const auto& s : doc["scenarios"]) tasks.insert(s["task"].get<std::string>());
  EXPECT_EQ(tasks, (std::set<std::string>{"image", "tabular", "text"}));
  EXPECT_EQ(call("GET", "/models", nullptr, 200)["models"].size(), 5u);
}

TEST_F(ServiceTest, ScenarioSamplesCarryUnitsAndSegments) {
  const Json doc = call("GET", "/scenarios/cars/samples", nullptr, 200);
  const Json& first = doc["samples"][0];
  EXPECT_EQ(first["units"].size(), 16u);
  EXPECT_EQ(first["segments"]["assignment"].size(), 32u * 32u);
  EXPECT_EQ(first["annotation"], Json({"seg10", "seg9"}));
}

TEST_F(ServiceTest, LrpOnTreeIsStructuredMethodUnavailable) {
  const std::string tree = first_model("weather");
  const Json doc = call("POST", "/models/" + tree + "/explain",
                        {{"method", "lrp"}, {"scenario", "weather"}, {"sample_id", "day1"}}, 422);
  EXPECT_EQ(doc["error"]["code"], "method_unavailable");
  EXPECT_NE(doc["error"]["message"].get<std::string>().find("method unavailable for this model kind"),
            std::string::npos);
}

TEST_F(ServiceTest, OmittedSeedEchoesZero) {
  const std::string model = first_model("weather");
  const Json doc = call("POST", "/models/" + model + "/explain",
                        {{"method", "lime"}, {"scenario", "weather"}, {"sample_id", "day2"}}, 200);
  EXPECT_EQ(doc["attribution"]["seed"], 0);
  EXPECT_EQ(doc["attribution"]["method"], "lime");
}

// The late-bus complaint: the delay, "minutes" and "late" all push towards "late".
TEST_F(ServiceTest, LateComplaintTokensScorePositive) {
  const std::string model = first_model("transport");
  for (const std::string method : {"lrp", "lime"}) {
    const Json doc = call("POST", "/models/" + model + "/explain",
                          {{"method", method}, {"scenario", "transport"}, {"sample_id", "t1"}}, 200);
    const Json& a = doc["attribution"];
    EXPECT_EQ(a["target_class"], "late") << method;
    for (const std::string unit : {"4@3", "minutes@4", "late@5"}) {
      const auto& units = a["units"];
      const auto at = std::find(units.begin(), units.end(), unit) - units.begin();
      ASSERT_LT(static_cast<std::size_t>(at), units.size()) << unit;
      EXPECT_GT(a["scores"][at].get<double>(), 0.0) << method << " " << unit;
    }
  }
}

TEST_F(ServiceTest, RepeatedCallsAreIdentical) {
  const std::string model = first_model("cars");
  const Json body{{"method", "kernel_shap"}, {"scenario", "cars"}, {"sample_id", "car2"}, {"seed", 5}};
  const auto a = service_->handle("POST", "/models/" + model + "/explain", body.dump());
  const auto b = service_->handle("POST", "/models/" + model + "/explain", body.dump());
  EXPECT_EQ(a.status, 200);
  EXPECT_EQ(a.body, b.body);
}

TEST_F(ServiceTest, PredictAcceptsInlineSamples) {
  const std::string model = first_model("transport");
  const Json doc = call("POST", "/models/" + model + "/predict",
                        {{"sample", {{"kind", "text"}, {"text", "the bus was 10 minutes late"}}}}, 200);
  EXPECT_EQ(doc["prediction"]["predicted_label"], "late");
  call("POST", "/models/" + model + "/predict", {{"sample", {{"kind", "tabular"}, {"values", {1}}}}}, 400);
  const std::string weather = first_model("weather");
  Json sample = call("GET", "/scenarios/weather/samples", nullptr, 200)["samples"][0]["sample"];
  call("POST", "/models/" + weather + "/predict", {{"sample", sample}}, 200);
  sample["values"][0] = nullptr;
  call("POST", "/models/" + weather + "/predict", {{"sample", sample}}, 400);
  call("POST", "/models/" + weather + "/predict", {{"sample", {{"row", {{"Sunshine", 3}}}}}}, 400);
}

TEST_F(ServiceTest, ErrorStatusesFollowCodes) {
  call("GET", "/nowhere", nullptr, 404);
  call("GET", "/models/0123456789abcdef/permutation-importance", nullptr, 404);
  call("DELETE", "/scenarios", nullptr, 400);
  EXPECT_EQ(service_->handle("POST", "/agreement", "{not json").status, 400);
  call("POST", "/agreement", {{"scenario", "weather"}, {"methods", {"lime"}}}, 409);
  call("POST", "/agreement", {{"scenario", "weather"}, {"methods", {"lime", "lime"}}, {"k", 0}}, 400);
  const std::string tree = first_model("weather");
  call("GET", "/models/" + tree + "/permutation-importance?seed=abc", nullptr, 400);
}

TEST_F(ServiceTest, PermutationImportanceAndProfile) {
  const std::string tree = first_model("weather");
  const Json imp = call("GET", "/models/" + tree + "/permutation-importance?seed=3&repeats=2", nullptr, 200);
  EXPECT_EQ(imp["global_importance"]["repeats"], 2);
  EXPECT_EQ(imp["global_importance"]["seed"], 3);
  EXPECT_EQ(imp["holdout"]["rows"], 60);
  const Json profile = call("GET", "/datasets/weather/profile", nullptr, 200);
  EXPECT_EQ(profile["row_count"], 300);
  call("GET", "/datasets/transport_complaints/profile", nullptr, 409);
}

TEST_F(ServiceTest, AgreementReportIsDeterministic) {
  const Json body{{"scenario", "transport"}, {"methods", {"lime", "lrp"}}, {"k", 3}};
  const auto a = service_->handle("POST", "/agreement", body.dump());
  const auto b = service_->handle("POST", "/agreement", body.dump());
  ASSERT_EQ(a.status, 200) << a.body;
  EXPECT_EQ(a.body, b.body);
  const Json doc = parse_json(a.body, "r");
  EXPECT_EQ(doc["k"], 3);
  EXPECT_EQ(doc["coverage"]["samples_evaluated"], 6);
}

TEST_F(ServiceTest, TrainingJobsRunAsynchronously) {
  const Json job = call("POST", "/train",
                        {{"task", "tabular"}, {"dataset", "weather"}, {"kind", "tree"},
                         {"config", {{"max_depth", 3}}}, {"split_seed", 1}},
                        202);
  const std::string id = job["job_id"].get<std::string>();
  EXPECT_EQ(job["status"], "queued");
  ASSERT_TRUE(service_->wait_for_job(id, std::chrono::seconds(60)));
  const Json done = call("GET", "/jobs/" + id, nullptr, 200);
  ASSERT_EQ(done["status"], "succeeded") << done.dump();
  const std::string model = done["result"]["model_id"].get<std::string>();
  const Json models = call("GET", "/models", nullptr, 200);
  bool found = false;
  for (const auto& m : models["models"]) found = found || m["id"] == model;
  EXPECT_TRUE(found);
  call("GET", "/jobs/job-999999", nullptr, 404);
  call("POST", "/train", {{"task", "text"}, {"dataset", "weather"}}, 400);
  call("POST", "/train", {{"task", "tabular"}, {"dataset", "weather"}, {"config", {{"epochs", 0}}}}, 400);
}

TEST(ServiceConfig, FileAndEnvironment) {
  TempDir dir("config");
  write_file_atomic(dir.path() / "xplain.json", R"({"port": 9001, "data_root": "d", "default_seed": 4})");
  ::unsetenv(kDataRootEnv);
  ServiceConfig c = load_service_config(dir.path() / "xplain.json");
  EXPECT_EQ(c.port, 9001);
  EXPECT_EQ(c.default_seed, 4u);
  EXPECT_EQ(c.data_root, dir.path() / "d");
  ::setenv(kDataRootEnv, "/tmp/elsewhere", 1);
  EXPECT_EQ(load_service_config(dir.path() / "xplain.json").data_root, fs::path("/tmp/elsewhere"));
  ::unsetenv(kDataRootEnv);
  write_file_atomic(dir.path() / "bad.json", R"({"prot": 1})");
  EXPECT_THROW(load_service_config(dir.path() / "bad.json"), Error);
}

TEST(HttpStatus, MapsEveryCode) {
  EXPECT_EQ(http_status(ErrorCode::invalid_argument), 400);
  EXPECT_EQ(http_status(ErrorCode::not_found), 404);
  EXPECT_EQ(http_status(ErrorCode::method_unavailable), 422);
  EXPECT_EQ(http_status(ErrorCode::failed_precondition), 409);
  EXPECT_EQ(http_status(ErrorCode::rank_deficient), 422);
  EXPECT_EQ(http_status(ErrorCode::data_loss), 500);
  EXPECT_EQ(http_status(ErrorCode::internal), 500);
}

}  // namespace
}  // namespace xplain
