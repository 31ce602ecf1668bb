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

// HTTP facade:
//   POST /api/v1/coverage     synchronous coverage + enhancement document
//   POST /api/v1/optimize     202 {job_id}
//   GET  /api/v1/jobs/{id}    job record
//   GET  /api/v1/presets      [{name, scenario}]
// Errors are {"error": {"code", "message", "path"?}}.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace nirsplan {

enum class JobState { kQueued, kRunning, kDone, kFailed };

std::string_view to_string(JobState state);

struct JobRecord {
  std::string id;
  std::string kind = "optimize";
  JobState state = JobState::kQueued;
  std::chrono::system_clock::time_point submitted_at;
  std::optional<std::chrono::system_clock::time_point> finished_at;
  nlohmann::json result;  // set when done
  std::string error;      // set when failed
};

nlohmann::json job_to_json(const JobRecord& job);

class JobStoreFullError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// In-memory job registry with one FIFO worker. When full, the least recently
// touched terminal job is evicted; with none terminal, submit throws
// JobStoreFullError.
class JobStore {
 public:
  using Task = std::function<nlohmann::json()>;

  explicit JobStore(std::size_t capacity = 100);
  ~JobStore();
  JobStore(const JobStore&) = delete;
  JobStore& operator=(const JobStore&) = delete;

  std::string submit(Task task, std::string kind = "optimize");
  std::optional<JobRecord> get(const std::string& id);
  std::size_t size() const;
  // Drains nothing; queued jobs are dropped.
  void stop();

 private:
  void run();
  void touch(const std::string& id);
  std::string new_id();

  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::unordered_map<std::string, JobRecord> jobs_;
  std::list<std::string> recency_;  // front = most recent
  std::unordered_map<std::string, std::list<std::string>::iterator> where_;
  std::deque<std::pair<std::string, Task>> queue_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_;
  bool stopping_ = false;
  std::thread worker_;
};

struct ServiceOptions {
  std::size_t max_cells = 40000;
  std::size_t job_capacity = 100;
  // Empty allows any origin.
  std::vector<std::string> cors_origins;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Blocks until stop(). False when the address cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  // Serves on the bound socket until stop().
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

  JobStore& jobs() { return jobs_; }

 private:
  struct Impl;
  ServiceOptions options_;
  JobStore jobs_;
  std::unique_ptr<Impl> impl_;
};

// "HOST:PORT"; throws std::invalid_argument.
std::pair<std::string, int> parse_listen(const std::string& text);

}  // namespace nirsplan
