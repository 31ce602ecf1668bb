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

#include "nirsplan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nirsplan/propagation.hpp"

namespace nirsplan {

namespace {

constexpr double kPositionTol = 1e-9;

std::string indexed(const char* field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

void validate_antenna(const AntennaPattern& a, const std::string& path,
                      std::vector<Violation>& out) {
  if (!std::isfinite(a.peak_gain_dbi) || !std::isfinite(a.sidelobe_floor_dbi) ||
      !std::isfinite(a.hpbw_deg)) {
    out.push_back({path, "antenna fields must be finite"});
    return;
  }
  if (!(a.peak_gain_dbi > a.sidelobe_floor_dbi)) {
    out.push_back({path + ".sidelobe_floor_dbi", "must be below peak_gain_dbi"});
  }
  if (!(a.hpbw_deg > 0.0 && a.hpbw_deg <= 360.0)) {
    out.push_back({path + ".hpbw_deg", "must lie in (0, 360]"});
  }
}

}  // namespace

Material Material::plasterboard() { return {"plasterboard", 10.0, 8.0, 0.0}; }
Material Material::metal() { return {"metal", 0.5, 0.0, 0.0}; }

int NirsPanel::tile_count() const {
  if (!(tile_size_m > 0.0) || !(width_m > 0.0)) return 1;
  return std::max(1, static_cast<int>(std::ceil(width_m / tile_size_m - 1e-9)));
}

double Band::wavelength_m() const { return kSpeedOfLight / center_hz; }

const WallSegment* FloorPlan::find_wall(int id) const {
  for (const auto& w : walls) {
    if (w.id == id) return &w;
  }
  return nullptr;
}

const Material& FloorPlan::material_of(const WallSegment& wall) const {
  return materials.at(wall.material);
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(violations.empty()
                             ? std::string("invalid scene")
                             : violations.front().path + ": " +
                                   violations.front().message),
      violations_(std::move(violations)) {}

bool panel_fits(const WallSegment& wall, double offset_m, double width_m) {
  return offset_m >= -kPositionTol && width_m > 0.0 &&
         offset_m + width_m <= wall.length() + kPositionTol;
}

Vec2 tile_center(const WallSegment& wall, const NirsPanel& panel, int index) {
  return wall.point_at(panel.offset_m + (index + 0.5) * panel.tile_length());
}

std::vector<Violation> validate_scene(const FloorPlan& plan) {
  std::vector<Violation> out;
  const Rect& b = plan.bounds;
  if (!(std::isfinite(b.width()) && std::isfinite(b.height()) && b.width() > 0.0 &&
        b.height() > 0.0)) {
    out.push_back({"bounds", "width and height must be strictly positive"});
  }

  for (const auto& [id, m] : plan.materials) {
    const std::string path = "materials." + id;
    if (!finite_non_negative(m.reflection_loss_at_normal_db)) {
      out.push_back({path + ".reflection_loss_at_normal_db", "must be finite and >= 0"});
    }
    if (!finite_non_negative(m.loss_angle_slope_db_per_rad)) {
      out.push_back({path + ".loss_angle_slope_db_per_rad", "must be finite and >= 0"});
    }
    if (!finite_non_negative(m.roughness_sigma_m)) {
      out.push_back({path + ".roughness_sigma_m", "must be finite and >= 0"});
    }
  }

  std::set<int> ids;
  for (std::size_t i = 0; i < plan.walls.size(); ++i) {
    const auto& w = plan.walls[i];
    const std::string path = indexed("walls", i);
    if (!ids.insert(w.id).second) {
      out.push_back({path, "duplicate wall id " + std::to_string(w.id)});
    }
    if (!(std::isfinite(w.p1.x) && std::isfinite(w.p1.y) && std::isfinite(w.p2.x) &&
          std::isfinite(w.p2.y))) {
      out.push_back({path, "endpoints must be finite"});
      continue;
    }
    if (w.p1 == w.p2) {
      out.push_back({path, "wall " + std::to_string(w.id) + " has p1 == p2"});
    }
    if (!b.contains(w.p1, kPositionTol) || !b.contains(w.p2, kPositionTol)) {
      out.push_back({path, "endpoint outside bounds"});
    }
    if (!plan.materials.contains(w.material)) {
      out.push_back({path + ".material", "unknown material '" + w.material + "'"});
    }
  }

  for (std::size_t i = 0; i < plan.panels.size(); ++i) {
    const auto& p = plan.panels[i];
    const std::string path = indexed("panels", i);
    const WallSegment* wall = plan.find_wall(p.wall_id);
    if (wall == nullptr) {
      out.push_back({path + ".wall_id", "unknown wall id " + std::to_string(p.wall_id)});
    }
    if (!(std::isfinite(p.width_m) && p.width_m > 0.0)) {
      out.push_back({path + ".width_m", "must be > 0"});
    }
    if (!(std::isfinite(p.tile_size_m) && p.tile_size_m > 0.0 &&
          p.tile_size_m <= p.width_m + kPositionTol)) {
      out.push_back({path + ".tile_size_m", "must lie in (0, width_m]"});
    }
    if (!finite_non_negative(p.roughness_sigma_m)) {
      out.push_back({path + ".roughness_sigma_m", "must be finite and >= 0"});
    }
    if (!finite_non_negative(p.reflectivity_loss_db)) {
      out.push_back({path + ".reflectivity_loss_db", "must be finite and >= 0"});
    }
    if (!(std::isfinite(p.offset_m) && p.offset_m >= -kPositionTol)) {
      out.push_back({path + ".offset_m", "must be >= 0"});
    } else if (wall != nullptr && p.width_m > 0.0 &&
               !panel_fits(*wall, p.offset_m, p.width_m)) {
      out.push_back({path, "panel extent exceeds wall " + std::to_string(wall->id) +
                               " length"});
    }
  }
  return out;
}

std::vector<Violation> validate_scenario(const Scenario& scenario) {
  std::vector<Violation> out = validate_scene(scenario.plan);
  const auto& tx = scenario.tx;
  if (!(std::isfinite(tx.position.x) && std::isfinite(tx.position.y)) ||
      !scenario.plan.bounds.contains(tx.position, kPositionTol)) {
    out.push_back({"tx.position", "must lie inside bounds"});
  }
  if (!std::isfinite(tx.boresight_rad)) {
    out.push_back({"tx.boresight_rad", "must be finite"});
  }
  if (!std::isfinite(tx.tx_power_dbm)) {
    out.push_back({"tx.tx_power_dbm", "must be finite"});
  }
  validate_antenna(tx.antenna, "tx.antenna", out);
  const auto& band = scenario.band;
  if (!(std::isfinite(band.center_hz) && std::isfinite(band.bandwidth_hz) &&
        band.bandwidth_hz > 0.0 && band.center_hz > band.bandwidth_hz / 2.0)) {
    out.push_back({"band", "requires center_hz > bandwidth_hz / 2 > 0"});
  }
  return out;
}

FloorPlan attach_panel(const FloorPlan& plan, int wall_id, double offset_m,
                       const NirsPanel& panel_template) {
  const WallSegment* wall = plan.find_wall(wall_id);
  if (wall == nullptr) {
    throw SceneError("wall_id", "unknown wall id " + std::to_string(wall_id));
  }
  if (!panel_fits(*wall, offset_m, panel_template.width_m)) {
    throw SceneError("offset_m", "panel [" + std::to_string(offset_m) + ", " +
                                     std::to_string(offset_m + panel_template.width_m) +
                                     "] exceeds wall " + std::to_string(wall_id) +
                                     " of length " + std::to_string(wall->length()));
  }
  if (!(panel_template.tile_size_m > 0.0 &&
        panel_template.tile_size_m <= panel_template.width_m + kPositionTol)) {
    throw SceneError("tile_size_m", "must lie in (0, width_m]");
  }
  if (!finite_non_negative(panel_template.roughness_sigma_m)) {
    throw SceneError("roughness_sigma_m", "must be finite and >= 0");
  }
  FloorPlan next = plan;
  NirsPanel panel = panel_template;
  panel.wall_id = wall_id;
  panel.offset_m = offset_m;
  next.panels.push_back(panel);
  return next;
}

}  // namespace nirsplan
