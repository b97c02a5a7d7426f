#include <gtest/gtest.h>

#include <thread>

#include "xplain/platform/serialization.hpp"
#include "xplain/platform/service.hpp"

#include "support/fixtures.hpp"

// After Eigen: the socket headers define macros that clash with its internals.
#include <httplib.h>

namespace xplain {
namespace {

class HttpTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = testing::copy_data_root("http").release();
    ServiceConfig config;
    config.port = 0;
    config.data_root = root_->path() / "data";
    service_ = new Service(config);
    thread_ = new std::thread([] { service_->serve(); });
    for (int i = 0; i < 500 && (service_->bound_port() == 0 || !service_->running()); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }

  static void TearDownTestSuite() {
    service_->stop();
    thread_->join();
    delete thread_;
    delete service_;
    delete root_;
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", service_->bound_port());
    c.set_read_timeout(120, 0);
    return c;
  }

  static Json body(const httplib::Result& r) { return parse_json(r->body, "response"); }

  static testing::TempDir* root_;
  static Service* service_;
  static std::thread* thread_;
};

testing::TempDir* HttpTest::root_ = nullptr;
Service* HttpTest::service_ = nullptr;
std::thread* HttpTest::thread_ = nullptr;

TEST_F(HttpTest, BindsAnEphemeralPort) {
  EXPECT_GT(service_->bound_port(), 0);
  EXPECT_TRUE(service_->running());
}

TEST_F(HttpTest, ServesScenariosAsJson) {
  auto c = client();
  const auto r = c.Get("/scenarios");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(body(r)["scenarios"].size(), 3u);
}

TEST_F(HttpTest, ExplainOverTheWireMatchesInProcessHandling) {
  auto c = client();
  const std::string model = body(c.Get("/scenarios/transport"))["models"][0].get<std::string>();
  const Json request{{"method", "lrp"}, {"scenario", "transport"}, {"sample_id", "t2"}};
  const auto r = c.Post("/models/" + model + "/explain", request.dump(), "application/json");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_EQ(r->body, service_->handle("POST", "/models/" + model + "/explain", request.dump()).body);
  EXPECT_EQ(body(r)["attribution"]["unit_kind"], "token");
}

TEST_F(HttpTest, QueryParametersReachTheHandler) {
  auto c = client();
  const std::string tree = body(c.Get("/scenarios/weather"))["models"][0].get<std::string>();
  const auto r = c.Get("/models/" + tree + "/permutation-importance?seed=9&repeats=1");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_EQ(body(r)["global_importance"]["seed"], 9);
}

TEST_F(HttpTest, ErrorsAreStructured) {
  auto c = client();
  const auto missing = c.Get("/models/0123456789abcdef/permutation-importance");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(body(missing)["error"]["code"], "not_found");
  const auto verb = c.Delete("/scenarios");
  ASSERT_TRUE(verb);
  EXPECT_EQ(verb->status, 400);
  const auto malformed = c.Post("/agreement", "{", "application/json");
  ASSERT_TRUE(malformed);
  EXPECT_EQ(malformed->status, 400);
  EXPECT_EQ(body(malformed)["error"]["code"], "invalid_argument");
}

TEST_F(HttpTest, ConcurrentRequestsAgree) {
  const std::string model = body(client().Get("/scenarios/cars"))["models"][0].get<std::string>();
  const std::string request =
      Json{{"method", "lime"}, {"scenario", "cars"}, {"sample_id", "car4"}, {"seed", 1}}.dump();
  std::vector<std::string> bodies(4);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    threads.emplace_back([&, i] {
      auto c = client();
      const auto r = c.Post("/models/" + model + "/explain", request, "application/json");
      if (r) bodies[i] = r->body;
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& b : bodies) {
    EXPECT_FALSE(b.empty());
    EXPECT_EQ(b, bodies[0]);
  }
}

TEST_F(HttpTest, TrainingJobCompletes) {
  auto c = client();
  const Json request{{"task", "text"}, {"dataset", "transport_complaints"}, {"kind", "logistic"},
                     {"config", {{"epochs", 20}}}};
  const auto r = c.Post("/train", request.dump(), "application/json");
  ASSERT_TRUE(r);
  ASSERT_EQ(r->status, 202) << r->body;
  const std::string job = body(r)["job_id"].get<std::string>();
  ASSERT_TRUE(service_->wait_for_job(job, std::chrono::seconds(120)));
  const auto status = c.Get("/jobs/" + job);
  ASSERT_TRUE(status);
  EXPECT_EQ(body(status)["status"], "succeeded") << status->body;
}

}  // namespace
}  // namespace xplain
