// Copyright 2026 The nirsplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <chrono>
#include <future>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "integration.hpp"
#include "nirsplan/presets.hpp"
#include "nirsplan/scenario_io.hpp"
#include "nirsplan/service.hpp"

using namespace nirsplan;
using nirsplan::testing::run_cli;
using nirsplan::testing::slurp;
using nirsplan::testing::TempDir;
using nlohmann::json;

namespace {

class RunningService {
 public:
  explicit RunningService(ServiceOptions options = {}) : service_(std::move(options)) {
    port_ = service_.bind_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { service_.listen_after_bind(); });
    service_.wait_until_ready();
  }
  ~RunningService() {
    service_.stop();
    thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(120, 0);
    return c;
  }
  Service& service() { return service_; }

 private:
  Service service_;
  int port_ = -1;
  std::thread thread_;
};

httplib::Result post(httplib::Client& c, const std::string& path, const json& body) {
  return c.Post(path, body.dump(), "application/json");
}

json poll_job(httplib::Client& c, const std::string& id) {
  for (int i = 0; i < 1200; ++i) {
    auto r = c.Get("/api/v1/jobs/" + id);
    REQUIRE(r);
    REQUIRE(r->status == 200);
    json job = json::parse(r->body);
    const auto state = job.at("state").get<std::string>();
    if (state == "done" || state == "failed") return job;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  FAIL("job did not finish");
  return {};
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("presets endpoint") {
    RunningService s;
    auto c = s.client();
    auto r = c.Get("/api/v1/presets");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
    const json doc = json::parse(r->body);
    bool found = false;
    for (const auto& p : doc) {
      found |= p.at("name") == "l-corridor-nirs";
      const Scenario sc = scenario_from_json(p.at("scenario"));
      CHECK(validate_scenario(sc).empty());
    }
    CHECK(found);
  }

  TEST_CASE("coverage round trip") {
    RunningService s;
    auto c = s.client();
    const json body = {{"scenario", scenario_to_json(preset("l-corridor-nirs"))}};
    auto r = post(c, "/api/v1/coverage", body);
    REQUIRE(r);
    REQUIRE(r->status == 200);
    const json doc = json::parse(r->body);
    CHECK(doc.at("stats").at("cell_count").get<int>() > 0);
    CHECK(doc.at("enhancement_db").size() == doc.at("grid").at("nx").get<std::size_t>() *
                                                 doc.at("grid").at("ny").get<std::size_t>());

    auto by_name = post(c, "/api/v1/coverage", {{"preset", "l-corridor-nirs"}});
    REQUIRE(by_name);
    CHECK(by_name->body == r->body);
  }

  TEST_CASE("identical concurrent requests get identical answers") {
    RunningService s;
    const json body = {{"preset", "room-obstacle-nirs"}, {"cell_size_m", 0.5}};
    std::vector<std::future<std::string>> futures;
    for (int i = 0; i < 4; ++i) {
      futures.push_back(std::async(std::launch::async, [&] {
        auto c = s.client();
        auto r = post(c, "/api/v1/coverage", body);
        return r && r->status == 200 ? r->body : std::string();
      }));
    }
    const std::string first = futures[0].get();
    CHECK_FALSE(first.empty());
    for (std::size_t i = 1; i < futures.size(); ++i) CHECK(futures[i].get() == first);
  }

  TEST_CASE("malformed input names the offending field") {
    RunningService s;
    auto c = s.client();
    json sc = scenario_to_json(preset("l-corridor"));
    sc["walls"][2]["p2"] = sc["walls"][2]["p1"];
    auto r = post(c, "/api/v1/coverage", {{"scenario", sc}});
    REQUIRE(r);
    CHECK(r->status == 400);
    const json err = json::parse(r->body).at("error");
    CHECK(err.at("code") == "validation_error");
    CHECK(err.at("path") == "scenario.walls[2]");

    json missing = scenario_to_json(preset("l-corridor"));
    missing["walls"][1].erase("p1");
    r = post(c, "/api/v1/coverage", {{"scenario", missing}});
    REQUIRE(r);
    CHECK(r->status == 400);
    CHECK(json::parse(r->body).at("error").at("path").get<std::string>().rfind("scenario.walls[1]", 0) == 0);

    auto raw = c.Post("/api/v1/coverage", "{not json", "application/json");
    REQUIRE(raw);
    CHECK(raw->status == 400);
    CHECK(json::parse(raw->body).at("error").at("code") == "parse_error");

    r = post(c, "/api/v1/coverage", {{"preset", "l-corridor"}, {"band", "999"}});
    REQUIRE(r);
    CHECK(r->status == 400);
  }

  TEST_CASE("oversized grids are refused") {
    RunningService s;
    auto c = s.client();
    const json grid = {{"origin", {0, 0}}, {"cell_size_m", 0.01}, {"nx", 1000}, {"ny", 1000}};
    auto r = post(c, "/api/v1/coverage", {{"preset", "l-corridor"}, {"grid", grid}});
    REQUIRE(r);
    CHECK(r->status == 413);
    CHECK(json::parse(r->body).at("error").at("path") == "grid");
    r = post(c, "/api/v1/optimize", {{"preset", "l-corridor"}, {"cell_size_m", 0.001}});
    REQUIRE(r);
    CHECK(r->status == 413);
  }

  TEST_CASE("optimize job matches the command line") {
    RunningService s;
    auto c = s.client();
    auto r = post(c, "/api/v1/optimize",
                  {{"preset", "l-corridor"}, {"cell_size_m", 0.5}, {"k", 1}, {"step_m", 0.6}});
    REQUIRE(r);
    REQUIRE(r->status == 202);
    const std::string id = json::parse(r->body).at("job_id");
    const json job = poll_job(c, id);
    REQUIRE(job.at("state") == "done");
    CHECK(job.contains("finished_at"));

    TempDir dir;
    REQUIRE(run_cli({"--scenario", "l-corridor", "--out", dir.str(), "--cell-size", "0.5",
                     "optimize", "-k", "1", "--step", "0.6"}).code == kExitOk);
    CHECK(job.at("result") == json::parse(slurp(dir.file("solution.json"))));
  }

  TEST_CASE("infeasible jobs fail") {
    RunningService s;
    auto c = s.client();
    auto r = post(c, "/api/v1/optimize",
                  {{"preset", "l-corridor"}, {"cell_size_m", 0.5}, {"k", 500}, {"step_m", 0.6}});
    REQUIRE(r);
    REQUIRE(r->status == 202);
    const json job = poll_job(c, json::parse(r->body).at("job_id"));
    CHECK(job.at("state") == "failed");
    CHECK_FALSE(job.at("error").get<std::string>().empty());
    CHECK_FALSE(job.contains("result"));
  }

  TEST_CASE("unknown jobs and routes") {
    RunningService s;
    auto c = s.client();
    auto r = c.Get("/api/v1/jobs/ffffffffffffffff");
    REQUIRE(r);
    CHECK(r->status == 404);
    CHECK(json::parse(r->body).at("error").at("code") == "not_found");
    r = c.Get("/api/v2/nothing");
    REQUIRE(r);
    CHECK(r->status == 404);
  }

  TEST_CASE("cors") {
    RunningService s({40000, 100, {"http://localhost:5173"}});
    auto c = s.client();
    auto r = c.Get("/api/v1/presets", {{"Origin", "http://localhost:5173"}});
    REQUIRE(r);
    CHECK(r->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    r = c.Get("/api/v1/presets", {{"Origin", "http://evil.example"}});
    REQUIRE(r);
    CHECK_FALSE(r->has_header("Access-Control-Allow-Origin"));
    r = c.Options("/api/v1/coverage", {{"Origin", "http://localhost:5173"}});
    REQUIRE(r);
    CHECK(r->status == 204);
  }

  TEST_CASE("job store evicts finished jobs and refuses when all are pending") {
    JobStore store(2);
    std::promise<void> gate;
    std::shared_future<void> open = gate.get_future().share();
    const std::string a = store.submit([open] { open.wait(); return json{{"v", 1}}; });
    const std::string b = store.submit([] { return json{{"v", 2}}; });
    CHECK(a != b);
    CHECK_THROWS_AS(store.submit([] { return json(); }), JobStoreFullError);
    gate.set_value();
    for (int i = 0; i < 400 && store.get(b)->state != JobState::kDone; ++i)
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    REQUIRE(store.get(a)->state == JobState::kDone);
    CHECK(store.get(a)->result == json{{"v", 1}});
    REQUIRE(store.get(b)->state == JobState::kDone);
    // b was touched last, so a goes first.
    const std::string c = store.submit([] { return json(); });
    CHECK(store.size() == 2);
    CHECK_FALSE(store.get(a).has_value());
    CHECK(store.get(b).has_value());
    CHECK(store.get(c).has_value());
  }

  TEST_CASE("listen address parsing") {
    CHECK(parse_listen("127.0.0.1:8787") == std::pair<std::string, int>{"127.0.0.1", 8787});
    CHECK(parse_listen("0.0.0.0:0").second == 0);
    CHECK_THROWS_AS(parse_listen("localhost"), std::invalid_argument);
    CHECK_THROWS_AS(parse_listen("localhost:99999"), std::invalid_argument);
    CHECK_THROWS_AS(parse_listen("localhost:80x"), std::invalid_argument);
  }
}
