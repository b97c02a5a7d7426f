#include "xplain/platform/service.hpp"

#include <charconv>
#include <cstdlib>
#include <iostream>

#include <httplib.h>

#include "xplain/platform/io.hpp"

namespace xplain {

namespace fs = std::filesystem;

ServiceConfig load_service_config(const std::optional<fs::path>& file) {
  ServiceConfig config;
  if (file) {
    const Json doc = parse_json(read_file(*file), file->string());
    require(doc.is_object(), ErrorCode::invalid_argument, file->string() + ": expected an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string path = file->filename().string() + ": " + it.key();
      if (it.key() == "host") {
        require(it->is_string(), ErrorCode::invalid_argument, path + ": expected a string");
        config.host = it->get<std::string>();
      } else if (it.key() == "port") {
        require(it->is_number_integer() && it->get<int>() >= 0 && it->get<int>() <= 65535,
                ErrorCode::invalid_argument, path + ": expected a port number");
        config.port = it->get<int>();
      } else if (it.key() == "data_root") {
        require(it->is_string(), ErrorCode::invalid_argument, path + ": expected a string");
        fs::path root = it->get<std::string>();
        if (root.is_relative()) root = file->parent_path() / root;
        config.data_root = root;
      } else if (it.key() == "default_seed") {
        require(it->is_number_unsigned(), ErrorCode::invalid_argument,
                path + ": expected an unsigned integer");
        config.default_seed = it->get<std::uint64_t>();
      } else {
        fail(ErrorCode::invalid_argument, path + ": unknown setting");
      }
    }
  }
  if (const char* env = std::getenv(kDataRootEnv); env != nullptr && *env != '\0') {
    config.data_root = env;
  }
  return config;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::method_unavailable: return 422;
    case ErrorCode::failed_precondition: return 409;
    case ErrorCode::rank_deficient: return 422;
    case ErrorCode::data_loss: return 500;
    case ErrorCode::internal: return 500;
  }
  return 500;
}

struct Service::Listener {
  httplib::Server server;
};

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t slash = path.find('/', start);
    const std::string part =
        path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (!part.empty()) out.push_back(httplib::detail::decode_url(part, false));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return out;
}

std::map<std::string, std::string> parse_query(const std::string& query) {
  std::map<std::string, std::string> out;
  std::size_t start = 0;
  while (start < query.size()) {
    std::size_t amp = query.find('&', start);
    if (amp == std::string::npos) amp = query.size();
    const std::string pair = query.substr(start, amp - start);
    const std::size_t eq = pair.find('=');
    if (!pair.empty()) {
      out[httplib::detail::decode_url(pair.substr(0, eq), true)] =
          eq == std::string::npos ? "" : httplib::detail::decode_url(pair.substr(eq + 1), true);
    }
    start = amp + 1;
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(),
          ErrorCode::invalid_argument, what + ": expected an unsigned integer");
  return value;
}

std::uint64_t seed_from(const Json& body, std::uint64_t fallback) {
  auto it = body.find("seed");
  if (it == body.end() || it->is_null()) return fallback;
  require(it->is_number_unsigned(), ErrorCode::invalid_argument,
          "seed: expected an unsigned integer");
  return it->get<std::uint64_t>();
}

MethodPolicy policy_from(const Json& body) {
  auto it = body.find("policy");
  if (it == body.end() || it->is_null()) return MethodPolicy::scenario_default();
  require(it->is_string(), ErrorCode::invalid_argument, "policy: expected \"default\" or \"all\"");
  const auto name = it->get<std::string>();
  if (name == "default") return MethodPolicy::scenario_default();
  if (name == "all") return MethodPolicy::allow_all();
  fail(ErrorCode::invalid_argument, "policy: expected \"default\" or \"all\"");
}

std::vector<Method> methods_from(const Json& body) {
  const Json& list = member(body, "methods", "");
  require(list.is_array(), ErrorCode::invalid_argument, "methods: expected a list");
  std::vector<Method> out;
  for (const auto& m : list) {
    require(m.is_string(), ErrorCode::invalid_argument, "methods: expected method names");
    out.push_back(parse_method(m.get<std::string>()));
  }
  return out;
}

Json body_document(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
  Json doc = parse_json(body, "request body");
  require(doc.is_object(), ErrorCode::invalid_argument, "request body: expected an object");
  return doc;
}

HttpResponse ok(const Json& doc, int status = 200) { return {status, canonical_dump(doc)}; }

}  // namespace

Service::Service(const ServiceConfig& config)
    : config_(config),
      workspace_(config.data_root, config.default_seed),
      listener_(std::make_unique<Listener>()) {}

Service::~Service() {
  stop();
  for (auto& worker : workers_) {
    if (worker.joinable()) worker.join();
  }
}

HttpResponse Service::handle(const std::string& method, const std::string& target,
                             const std::string& body) {
  try {
    const std::size_t q = target.find('?');
    const auto parts = split_path(target.substr(0, q));
    const auto query = q == std::string::npos ? std::map<std::string, std::string>{}
                                              : parse_query(target.substr(q + 1));
    const bool get = method == "GET";
    const bool post = method == "POST";
    const std::size_t n = parts.size();
    auto route = [&](std::initializer_list<const char*> shape, bool verb) {
      if (shape.size() != n) return false;
      std::size_t i = 0;
      for (const char* s : shape) {
        if (std::string(s) != "*" && parts[i] != s) return false;
        ++i;
      }
      if (!verb) fail(ErrorCode::invalid_argument, "method " + method + " not allowed on " + target);
      return true;
    };

    if (route({"scenarios"}, get)) return ok(workspace_.scenarios());
    if (route({"scenarios", "*"}, get)) return ok(workspace_.scenario(parts[1]));
    if (route({"scenarios", "*", "samples"}, get)) return ok(workspace_.scenario_samples(parts[1]));
    if (route({"models"}, get)) return ok(workspace_.models());
    if (route({"models", "*", "predict"}, post)) {
      const Json doc = body_document(body);
      const auto record = workspace_.registry().store().load(parts[1]);
      return ok(workspace_.predict(parts[1], workspace_.resolve_sample(record->model, doc)));
    }
    if (route({"models", "*", "explain"}, post)) {
      const Json doc = body_document(body);
      const Method m = parse_method(string_member(doc, "method", ""));
      ExplainConfig cfg = workspace_.default_config();
      cfg.seed = seed_from(doc, cfg.seed);
      cfg.policy = policy_from(doc);
      if (auto it = doc.find("config"); it != doc.end()) cfg = explain_config_from_json(*it, cfg);
      if (m == Method::permutation_importance) {
        return ok(workspace_.permutation_importance(parts[1], cfg));
      }
      const auto record = workspace_.registry().store().load(parts[1]);
      return ok(workspace_.explain(parts[1], workspace_.resolve_sample(record->model, doc), m, cfg));
    }
    if (route({"models", "*", "permutation-importance"}, get)) {
      ExplainConfig cfg = workspace_.default_config();
      if (auto it = query.find("seed"); it != query.end()) cfg.seed = parse_unsigned(it->second, "seed");
      if (auto it = query.find("repeats"); it != query.end()) {
        cfg.permutation_repeats = static_cast<int>(parse_unsigned(it->second, "repeats"));
      }
      return ok(workspace_.permutation_importance(parts[1], cfg));
    }
    if (route({"datasets", "*", "profile"}, get)) return ok(workspace_.profile_dataset(parts[1]));
    if (route({"agreement"}, post)) {
      const Json doc = body_document(body);
      ExplainConfig cfg = workspace_.default_config();
      cfg.seed = seed_from(doc, cfg.seed);
      cfg.policy = policy_from(doc);
      if (auto it = doc.find("config"); it != doc.end()) cfg = explain_config_from_json(*it, cfg);
      std::optional<std::size_t> k;
      if (auto it = doc.find("k"); it != doc.end() && !it->is_null()) {
        require(it->is_number_unsigned() && it->get<std::size_t>() >= 1, ErrorCode::invalid_argument,
                "k: expected a positive integer");
        k = it->get<std::size_t>();
      }
      std::optional<std::string> model;
      if (doc.contains("model")) model = string_member(doc, "model", "");
      return ok(workspace_.agreement(string_member(doc, "scenario", ""), methods_from(doc), k, cfg,
                                     model));
    }
    if (route({"train"}, post)) return ok(start_training(body_document(body)), 202);
    if (route({"jobs", "*"}, get)) return ok(job_status(parts[1]));
    fail(ErrorCode::not_found, "no route for " + method + " " + target.substr(0, q));
  } catch (const Error& e) {
    const int status = http_status(e.code());
    Json error{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (status >= 500) {
      error["correlation_id"] = "req-" + std::to_string(next_correlation_++);
      std::cerr << "[" << error["correlation_id"].get<std::string>() << "] " << e.what() << "\n";
    }
    return {status, canonical_dump({{"error", error}})};
  } catch (const std::exception& e) {
    const std::string id = "req-" + std::to_string(next_correlation_++);
    std::cerr << "[" << id << "] internal error: " << e.what() << "\n";
    return {500, canonical_dump({{"error",
                                  {{"code", "internal"},
                                   {"message", "internal error"},
                                   {"correlation_id", id}}}})};
  }
}

Json Service::start_training(const Json& body) {
  const TaskKind task = parse_task_kind(string_member(body, "task", ""));
  const std::string dataset_id = string_member(body, "dataset", "");
  const DatasetRef& ref = workspace_.registry().dataset_ref(dataset_id);
  const std::map<std::string, TaskKind> format_task{
      {"csv", TaskKind::tabular}, {"jsonl", TaskKind::text}, {"images", TaskKind::image}};
  require(format_task.at(ref.format) == task, ErrorCode::invalid_argument,
          "dataset " + dataset_id + " is not a " + std::string(to_string(task)) + " dataset");
  TrainRequest request;
  request.kind = body.contains("kind") ? parse_model_kind(string_member(body, "kind", ""))
                 : task == TaskKind::tabular ? ModelKind::logistic
                                             : ModelKind::mlp;
  if (auto it = body.find("config"); it != body.end()) request.config = train_config_from_json(*it);
  if (auto it = body.find("split_seed"); it != body.end()) {
    require(it->is_number_unsigned(), ErrorCode::invalid_argument,
            "split_seed: expected an unsigned integer");
    request.split_seed = it->get<std::uint64_t>();
  }
  request.config.validate();

  std::lock_guard lock(jobs_mutex_);
  char id_buf[32];
  std::snprintf(id_buf, sizeof id_buf, "job-%06llu", static_cast<unsigned long long>(next_job_++));
  const std::string job_id = id_buf;
  jobs_[job_id].request = body;
  workers_.emplace_back([this, job_id, dataset_id, request] {
    {
      std::lock_guard l(jobs_mutex_);
      jobs_[job_id].status = "running";
    }
    Json result;
    Json error;
    try {
      const auto dataset = workspace_.registry().dataset(dataset_id);
      const TrainOutcome outcome = train_and_store(workspace_.registry().store(), *dataset, request);
      result = {{"model_id", outcome.model_id},
                {"holdout_accuracy", outcome.holdout_accuracy},
                {"train_accuracy", outcome.train_accuracy},
                {"train_rows", outcome.train_rows},
                {"holdout_rows", outcome.holdout_rows}};
    } catch (const Error& e) {
      error = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    } catch (const std::exception& e) {
      error = {{"code", "internal"}, {"message", e.what()}};
    }
    std::lock_guard l(jobs_mutex_);
    Job& job = jobs_[job_id];
    job.result = std::move(result);
    job.error = std::move(error);
    job.status = job.error.is_null() ? "succeeded" : "failed";
  });
  return {{"job_id", job_id}, {"status", "queued"}};
}

Json Service::job_status(const std::string& job_id) const {
  std::lock_guard lock(jobs_mutex_);
  auto it = jobs_.find(job_id);
  require(it != jobs_.end(), ErrorCode::not_found, "unknown job: " + job_id);
  Json out{{"job_id", job_id}, {"status", it->second.status}};
  if (!it->second.result.is_null()) out["result"] = it->second.result;
  if (!it->second.error.is_null()) out["error"] = it->second.error;
  return out;
}

bool Service::wait_for_job(const std::string& job_id, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    {
      std::lock_guard lock(jobs_mutex_);
      auto it = jobs_.find(job_id);
      if (it == jobs_.end()) return false;
      if (it->second.status == "succeeded" || it->second.status == "failed") return true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return false;
}

void Service::serve() {
  auto& server = listener_->server;
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    std::string target = req.path;
    if (!req.params.empty()) {
      target += "?";
      bool first = true;
      for (const auto& [key, value] : req.params) {
        if (!first) target += "&";
        first = false;
        target += httplib::detail::encode_query_param(key) + "=" +
                  httplib::detail::encode_query_param(value);
      }
    }
    const HttpResponse response = handle(req.method, target, req.body);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  };
  server.Get(R"(.*)", dispatch);
  server.Post(R"(.*)", dispatch);
  server.Put(R"(.*)", dispatch);
  server.Delete(R"(.*)", dispatch);
  server.Patch(R"(.*)", dispatch);
  const int port = config_.port == 0 ? server.bind_to_any_port(config_.host)
                                     : (server.bind_to_port(config_.host, config_.port)
                                            ? config_.port
                                            : -1);
  require(port > 0, ErrorCode::failed_precondition,
          "cannot bind " + config_.host + ":" + std::to_string(config_.port));
  bound_port_ = port;
  server.listen_after_bind();
}

void Service::stop() {
  listener_->server.stop();
}

bool Service::running() const { return listener_->server.is_running(); }

}  // namespace xplain
