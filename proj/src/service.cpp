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

#include "nirsplan/service.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <random>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "nirsplan/app.hpp"
#include "nirsplan/scenario_io.hpp"

namespace nirsplan {

using nlohmann::json;

std::string_view to_string(JobState state) {
  switch (state) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "unknown";
}

namespace {

std::string iso8601(std::chrono::system_clock::time_point t) {
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms % 1000));
  return out;
}

bool terminal(JobState s) { return s == JobState::kDone || s == JobState::kFailed; }

}  // namespace

json job_to_json(const JobRecord& job) {
  json out = {{"id", job.id},
              {"kind", job.kind},
              {"state", std::string(to_string(job.state))},
              {"submitted_at", iso8601(job.submitted_at)}};
  if (job.finished_at) out["finished_at"] = iso8601(*job.finished_at);
  if (job.state == JobState::kDone) out["result"] = job.result;
  if (job.state == JobState::kFailed) out["error"] = job.error;
  return out;
}

JobStore::JobStore(std::size_t capacity)
    : capacity_(std::max<std::size_t>(capacity, 1)), salt_(std::random_device{}()) {
  worker_ = std::thread([this] { run(); });
}

JobStore::~JobStore() { stop(); }

void JobStore::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    queue_.clear();
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

std::string JobStore::new_id() {
  // splitmix64 over a per-process salt and a counter.
  std::uint64_t z = salt_ + 0x9e3779b97f4a7c15ULL * ++counter_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(z));
  return buf;
}

void JobStore::touch(const std::string& id) {
  auto it = where_.find(id);
  if (it != where_.end()) recency_.erase(it->second);
  recency_.push_front(id);
  where_[id] = recency_.begin();
}

std::string JobStore::submit(Task task, std::string kind) {
  std::string id;
  {
    std::lock_guard lock(mu_);
    if (jobs_.size() >= capacity_) {
      auto victim = std::find_if(recency_.rbegin(), recency_.rend(), [&](const std::string& j) {
        return terminal(jobs_.at(j).state);
      });
      if (victim == recency_.rend()) {
        throw JobStoreFullError("job store is full of unfinished jobs");
      }
      const std::string gone = *victim;
      recency_.erase(where_.at(gone));
      where_.erase(gone);
      jobs_.erase(gone);
    }
    do {
      id = new_id();
    } while (jobs_.count(id));
    JobRecord rec;
    rec.id = id;
    rec.kind = std::move(kind);
    rec.submitted_at = std::chrono::system_clock::now();
    jobs_.emplace(id, std::move(rec));
    touch(id);
    queue_.emplace_back(id, std::move(task));
  }
  cv_.notify_one();
  return id;
}

std::optional<JobRecord> JobStore::get(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  touch(id);
  return it->second;
}

std::size_t JobStore::size() const {
  std::lock_guard lock(mu_);
  return jobs_.size();
}

void JobStore::run() {
  for (;;) {
    std::pair<std::string, Task> next;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      next = std::move(queue_.front());
      queue_.pop_front();
      jobs_.at(next.first).state = JobState::kRunning;
    }
    json result;
    std::string error;
    bool ok = true;
    try {
      result = next.second();
    } catch (const std::exception& e) {
      ok = false;
      error = e.what();
    }
    std::lock_guard lock(mu_);
    auto it = jobs_.find(next.first);
    if (it == jobs_.end()) continue;
    it->second.state = ok ? JobState::kDone : JobState::kFailed;
    it->second.finished_at = std::chrono::system_clock::now();
    it->second.result = std::move(result);
    it->second.error = std::move(error);
    spdlog::debug("job {} {}", next.first, to_string(it->second.state));
  }
}

std::pair<std::string, int> parse_listen(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw std::invalid_argument("listen address must be HOST:PORT");
  }
  const std::string port_text = text.substr(colon + 1);
  std::size_t used = 0;
  int port = -1;
  try {
    port = std::stoi(port_text, &used);
  } catch (const std::logic_error&) {
  }
  if (used != port_text.size() || port < 0 || port > 65535) {
    throw std::invalid_argument("bad port '" + port_text + "'");
  }
  return {text.substr(0, colon), port};
}

struct Service::Impl {
  httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, const std::optional<std::string>& path = {}) {
  json err = {{"code", code}, {"message", message}};
  if (path) err["path"] = *path;
  send_json(res, status, {{"error", err}});
}

// Runs `fn` and maps library exceptions onto error responses. True when `fn`
// completed.
template <typename Fn>
bool guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const json::exception& e) {
    send_error(res, 400, "parse_error", e.what());
  } catch (const ParseError& e) {
    const std::string what = e.what();
    const std::string msg = e.path().empty() ? what : what.substr(e.path().size() + 2);
    send_error(res, 400, "parse_error", msg, e.path());
  } catch (const ValidationError& e) {
    const auto& v = e.violations();
    json details = json::array();
    for (const auto& x : v) details.push_back({{"path", x.path}, {"message", x.message}});
    json err = {{"code", "validation_error"},
                {"message", v.empty() ? std::string(e.what()) : v.front().message},
                {"violations", details}};
    if (!v.empty()) err["path"] = v.front().path;
    send_json(res, 400, {{"error", err}});
  } catch (const std::invalid_argument& e) {
    send_error(res, 400, "invalid_argument", e.what());
  } catch (const std::domain_error& e) {
    send_error(res, 400, "domain_error", e.what());
  }
  return false;
}

// Cell count the request would produce, computed without allocating.
double requested_cells(const CoverageRequest& req) {
  if (req.settings.grid) {
    return static_cast<double>(req.settings.grid->nx) * static_cast<double>(req.settings.grid->ny);
  }
  const Rect& b = req.scenario.plan.bounds;
  const double cs = req.settings.cell_size_m;
  if (!(cs > 0.0)) return 0.0;  // rejected downstream
  return std::floor(b.width() / cs + 1e-9) * std::floor(b.height() / cs + 1e-9);
}

}  // namespace

Service::Service(ServiceOptions options)
    : options_(std::move(options)), jobs_(options_.job_capacity), impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  const std::size_t max_cells = options_.max_cells;

  srv.Post("/api/v1/coverage", [max_cells](const httplib::Request& req, httplib::Response& res) {
    json body;
    CoverageRequest request;
    if (!guarded(res, [&] {
          body = json::parse(req.body);
          request = coverage_request_from_json(body);
        })) {
      return;
    }
    const double cells = requested_cells(request);
    if (cells > static_cast<double>(max_cells)) {
      send_error(res, 413, "too_large",
                 "grid has " + std::to_string(static_cast<long long>(cells)) +
                     " cells; limit is " + std::to_string(max_cells),
                 "grid");
      return;
    }
    guarded(res, [&] { send_json(res, 200, coverage_to_json(run_coverage(request))); });
  });

  srv.Post("/api/v1/optimize", [this, max_cells](const httplib::Request& req,
                                                 httplib::Response& res) {
    OptimizeRequest request;
    if (!guarded(res, [&] { request = optimize_request_from_json(json::parse(req.body)); })) {
      return;
    }
    const double cells = requested_cells({request.scenario, request.settings});
    if (cells > static_cast<double>(max_cells)) {
      send_error(res, 413, "too_large",
                 "grid has " + std::to_string(static_cast<long long>(cells)) +
                     " cells; limit is " + std::to_string(max_cells),
                 "grid");
      return;
    }
    try {
      const std::string id = jobs_.submit([request] {
        return optimize_to_json(run_optimize(request), request);
      });
      spdlog::info("optimize job {} queued", id);
      send_json(res, 202, {{"job_id", id}});
    } catch (const JobStoreFullError& e) {
      send_error(res, 503, "busy", e.what());
    }
  });

  srv.Get(R"(/api/v1/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto job = jobs_.get(id);
    if (!job) {
      send_error(res, 404, "not_found", "unknown job '" + id + "'", "id");
      return;
    }
    send_json(res, 200, job_to_json(*job));
  });

  srv.Get("/api/v1/presets", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, presets_to_json());
  });

  srv.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });

  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, 404, "not_found", "no route for " + req.method + " " + req.path);
    } else {
      send_error(res, res.status, "http_error", httplib::status_message(res.status));
    }
  });

  srv.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          msg = e.what();
        } catch (...) {
        }
        spdlog::error("request failed: {}", msg);
        send_error(res, 500, "internal", msg);
      });

  const auto origins = options_.cors_origins;
  srv.set_post_routing_handler([origins](const httplib::Request& req, httplib::Response& res) {
    if (origins.empty()) {
      res.set_header("Access-Control-Allow-Origin", "*");
      return;
    }
    const std::string origin = req.get_header_value("Origin");
    if (std::find(origins.begin(), origins.end(), origin) != origins.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });

  srv.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

Service::~Service() {
  stop();
  jobs_.stop();
}

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace nirsplan
