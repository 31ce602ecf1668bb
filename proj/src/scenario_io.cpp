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

#include "nirsplan/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nirsplan {

using nlohmann::json;

JsonReader::JsonReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
  if (!obj_.is_object()) throw ParseError(path_, "expected an object");
}

bool JsonReader::has(const char* key) const { return obj_.contains(key); }

const json& JsonReader::at(const char* key) const {
  auto it = obj_.find(key);
  if (it == obj_.end()) throw ParseError(child(key), "missing field");
  return *it;
}

double JsonReader::number(const char* key) const {
  const json& v = at(key);
  if (!v.is_number()) throw ParseError(child(key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(child(key), "must be finite");
  return d;
}

double JsonReader::number_or(const char* key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long JsonReader::integer(const char* key) const {
  const json& v = at(key);
  if (!v.is_number_integer()) throw ParseError(child(key), "expected an integer");
  return v.get<long>();
}

long JsonReader::integer_or(const char* key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool JsonReader::boolean_or(const char* key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) throw ParseError(child(key), "expected a boolean");
  return v.get<bool>();
}

std::string JsonReader::string(const char* key) const {
  const json& v = at(key);
  if (!v.is_string()) throw ParseError(child(key), "expected a string");
  return v.get<std::string>();
}

std::string JsonReader::string_or(const char* key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

Vec2 JsonReader::point(const char* key) const {
  const json& v = at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(child(key), "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

const json& JsonReader::object(const char* key) const {
  const json& v = at(key);
  if (!v.is_object()) throw ParseError(child(key), "expected an object");
  return v;
}

const json& JsonReader::array(const char* key) const {
  const json& v = at(key);
  if (!v.is_array()) throw ParseError(child(key), "expected an array");
  return v;
}

void JsonReader::reject_unknown(std::initializer_list<const char*> allowed) const {
  for (auto it = obj_.begin(); it != obj_.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw ParseError(child(it.key().c_str()), "unknown field");
  }
}

namespace {

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

AntennaPattern read_antenna(const JsonReader& r) {
  r.reject_unknown({"peak_gain_dbi", "hpbw_deg", "sidelobe_floor_dbi"});
  return {r.number("peak_gain_dbi"), r.number("hpbw_deg"), r.number("sidelobe_floor_dbi")};
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

Scenario scenario_from_json(const json& doc) {
  const JsonReader top(doc, "");
  top.reject_unknown({"schema_version", "name", "bounds", "walls", "materials", "panels", "tx",
                      "band"});
  if (top.integer("schema_version") != kSchemaVersion) {
    throw ParseError("schema_version", "unsupported version (expected 1)");
  }
  Scenario s;
  FloorPlan& plan = s.plan;
  plan.name = top.string("name");

  const JsonReader b(top.object("bounds"), "bounds");
  b.reject_unknown({"x_min", "y_min", "x_max", "y_max"});
  plan.bounds = {b.number("x_min"), b.number("y_min"), b.number("x_max"), b.number("y_max")};

  for (const auto& [name, value] : top.object("materials").items()) {
    const JsonReader m(value, "materials." + name);
    m.reject_unknown(
        {"reflection_loss_at_normal_db", "loss_angle_slope_db_per_rad", "roughness_sigma_m"});
    plan.materials[name] = {name, m.number("reflection_loss_at_normal_db"),
                            m.number("loss_angle_slope_db_per_rad"),
                            m.number("roughness_sigma_m")};
  }

  const json& walls = top.array("walls");
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const JsonReader w(walls[i], indexed("walls", i));
    w.reject_unknown({"id", "p1", "p2", "material"});
    plan.walls.push_back({static_cast<int>(w.integer("id")), w.point("p1"), w.point("p2"),
                          w.string("material")});
  }

  if (top.has("panels")) {
    const json& panels = top.array("panels");
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const JsonReader p(panels[i], indexed("panels", i));
      p.reject_unknown({"wall_id", "offset_m", "width_m", "roughness_sigma_m",
                        "reflectivity_loss_db", "tile_size_m"});
      const NirsPanel d;
      plan.panels.push_back({static_cast<int>(p.integer("wall_id")), p.number("offset_m"),
                             p.number_or("width_m", d.width_m),
                             p.number_or("roughness_sigma_m", d.roughness_sigma_m),
                             p.number_or("reflectivity_loss_db", d.reflectivity_loss_db),
                             p.number_or("tile_size_m", d.tile_size_m)});
    }
  }

  const JsonReader tx(top.object("tx"), "tx");
  tx.reject_unknown({"position", "boresight_rad", "antenna", "tx_power_dbm"});
  s.tx.position = tx.point("position");
  s.tx.boresight_rad = tx.number_or("boresight_rad", 0.0);
  s.tx.antenna = tx.has("antenna") ? read_antenna(JsonReader(tx.object("antenna"), "tx.antenna"))
                                   : AntennaPattern::tx_default();
  s.tx.tx_power_dbm = tx.number_or("tx_power_dbm", 13.0);

  const JsonReader band(top.object("band"), "band");
  band.reject_unknown({"center_hz", "bandwidth_hz"});
  s.band = {band.number("center_hz"), band.number("bandwidth_hz")};

  auto violations = validate_scenario(s);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return s;
}

Scenario load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

json scenario_to_json(const Scenario& s) {
  const FloorPlan& plan = s.plan;
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = plan.name;
  doc["bounds"] = {{"x_min", plan.bounds.x_min},
                   {"y_min", plan.bounds.y_min},
                   {"x_max", plan.bounds.x_max},
                   {"y_max", plan.bounds.y_max}};
  json walls = json::array();
  for (const auto& w : plan.walls) {
    walls.push_back(
        {{"id", w.id}, {"p1", point_json(w.p1)}, {"p2", point_json(w.p2)}, {"material", w.material}});
  }
  doc["walls"] = std::move(walls);
  json mats = json::object();
  for (const auto& [name, m] : plan.materials) {
    mats[name] = {{"reflection_loss_at_normal_db", m.reflection_loss_at_normal_db},
                  {"loss_angle_slope_db_per_rad", m.loss_angle_slope_db_per_rad},
                  {"roughness_sigma_m", m.roughness_sigma_m}};
  }
  doc["materials"] = std::move(mats);
  json panels = json::array();
  for (const auto& p : plan.panels) {
    panels.push_back({{"wall_id", p.wall_id},
                      {"offset_m", p.offset_m},
                      {"width_m", p.width_m},
                      {"roughness_sigma_m", p.roughness_sigma_m},
                      {"reflectivity_loss_db", p.reflectivity_loss_db},
                      {"tile_size_m", p.tile_size_m}});
  }
  doc["panels"] = std::move(panels);
  doc["tx"] = {{"position", point_json(s.tx.position)},
               {"boresight_rad", s.tx.boresight_rad},
               {"antenna",
                {{"peak_gain_dbi", s.tx.antenna.peak_gain_dbi},
                 {"hpbw_deg", s.tx.antenna.hpbw_deg},
                 {"sidelobe_floor_dbi", s.tx.antenna.sidelobe_floor_dbi}}},
               {"tx_power_dbm", s.tx.tx_power_dbm}};
  doc["band"] = {{"center_hz", s.band.center_hz}, {"bandwidth_hz", s.band.bandwidth_hz}};
  return doc;
}

std::string serialize_scenario(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

}  // namespace nirsplan
