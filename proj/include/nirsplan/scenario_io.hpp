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

// Scenario documents: UTF-8 JSON, schema_version 1, unknown fields rejected.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nirsplan/scene.hpp"

namespace nirsplan {

inline constexpr int kSchemaVersion = 1;

// Malformed document: bad JSON, wrong type, missing or unknown field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Throws ParseError or ValidationError.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);

// Typed field readers shared with the request parsers. Each records the
// field path in thrown ParseErrors.
class JsonReader {
 public:
  JsonReader(const nlohmann::json& obj, std::string path);

  bool has(const char* key) const;
  double number(const char* key) const;
  double number_or(const char* key, double fallback) const;
  long integer(const char* key) const;
  long integer_or(const char* key, long fallback) const;
  bool boolean_or(const char* key, bool fallback) const;
  std::string string(const char* key) const;
  std::string string_or(const char* key, const std::string& fallback) const;
  Vec2 point(const char* key) const;
  const nlohmann::json& object(const char* key) const;
  const nlohmann::json& array(const char* key) const;
  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }
  // Throws ParseError naming the first key outside `allowed`.
  void reject_unknown(std::initializer_list<const char*> allowed) const;

 private:
  const nlohmann::json& at(const char* key) const;
  const nlohmann::json& obj_;
  std::string path_;
};

}  // namespace nirsplan
