#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "xplain/core/error.hpp"
#include "xplain/platform/workspace.hpp"

namespace xplain {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_root = "data";
  std::uint64_t default_seed = 0;
};

inline constexpr const char* kDataRootEnv = "XPLAIN_DATA_ROOT";

// Reads {"host", "port", "data_root", "default_seed"} from `file` when given
// (relative data roots resolve against the file's directory), then lets the
// XPLAIN_DATA_ROOT environment variable override the data root.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file);

int http_status(ErrorCode code);

struct HttpResponse {
  int status = 200;
  std::string body;  // canonical document
};

// The HTTP interface. handle() is the whole request pipeline and is what the
// network listener calls, so it can be exercised without sockets.
class Service {
 public:
  explicit Service(const ServiceConfig& config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const std::string& method, const std::string& target,
                      const std::string& body);

  // Blocks until stop() is called. Throws if the port cannot be bound.
  void serve();
  void stop();
  // Port actually bound (useful with port 0), valid once serve() is running.
  int bound_port() const { return bound_port_.load(); }
  bool running() const;

  // Blocks until the job leaves the queued/running states or the timeout
  // passes; returns whether it finished.
  bool wait_for_job(const std::string& job_id, std::chrono::milliseconds timeout);

  Workspace& workspace() { return workspace_; }

 private:
  struct Job {
    std::string status = "queued";
    Json request;
    Json result;
    Json error;
  };
  struct Listener;

  Json start_training(const Json& body);
  Json job_status(const std::string& job_id) const;

  ServiceConfig config_;
  Workspace workspace_;
  mutable std::mutex jobs_mutex_;
  std::map<std::string, Job> jobs_;
  std::vector<std::thread> workers_;
  std::uint64_t next_job_ = 1;
  std::atomic<std::uint64_t> next_correlation_{1};
  std::atomic<int> bound_port_{0};
  std::unique_ptr<Listener> listener_;
};

}  // namespace xplain
