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

// Geometric and material world model: a 2D floor plan of zero-thickness
// walls, rough metal panels flush with those walls, and the transmitter.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nirsplan/geometry.hpp"

namespace nirsplan {

using MaterialId = std::string;

// Affine reflection-loss model plus surface roughness.
struct Material {
  std::string name;
  double reflection_loss_at_normal_db = 10.0;
  double loss_angle_slope_db_per_rad = 8.0;
  double roughness_sigma_m = 0.0;

  static Material plasterboard();
  static Material metal();

  friend bool operator==(const Material&, const Material&) = default;
};

struct WallSegment {
  int id = 0;
  Vec2 p1;
  Vec2 p2;
  MaterialId material;

  double length() const { return distance(p1, p2); }
  Vec2 direction() const { return normalized(p2 - p1); }
  Vec2 point_at(double offset_m) const { return p1 + offset_m * direction(); }

  friend bool operator==(const WallSegment&, const WallSegment&) = default;
};

// A non-intelligent reflecting surface: a rough metal sheet glued flush to a
// wall, occupying [offset, offset + width] along the wall from p1.
struct NirsPanel {
  int wall_id = 0;
  double offset_m = 0.0;
  double width_m = 1.2;
  double roughness_sigma_m = 0.3e-3;
  double reflectivity_loss_db = 0.5;
  double tile_size_m = 0.1;

  // Equal-length tiles; the count is the smallest n with width/n <= tile_size.
  int tile_count() const;
  double tile_length() const { return width_m / tile_count(); }

  friend bool operator==(const NirsPanel&, const NirsPanel&) = default;
};

// Gaussian mainlobe, floored at the sidelobe level.
struct AntennaPattern {
  double peak_gain_dbi = 7.0;
  double hpbw_deg = 30.0;
  double sidelobe_floor_dbi = -10.0;

  // Sounder transmitter horn: wide beam for large coverage.
  static AntennaPattern tx_default() { return {7.0, 30.0, -10.0}; }
  // Direction-scan receiver horn.
  static AntennaPattern rx_default() { return {25.0, 8.0, -15.0}; }

  friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

struct Transceiver {
  Vec2 position;
  double boresight_rad = 0.0;
  AntennaPattern antenna;
  double tx_power_dbm = 13.0;

  friend bool operator==(const Transceiver&, const Transceiver&) = default;
};

struct Band {
  double center_hz = 313.5e9;
  double bandwidth_hz = 15e9;

  double wavelength_m() const;

  static Band ghz306() { return {313.5e9, 15e9}; }
  static Band ghz356() { return {363.5e9, 15e9}; }

  friend bool operator==(const Band&, const Band&) = default;
};

struct FloorPlan {
  std::string name;
  Rect bounds;
  std::vector<WallSegment> walls;
  std::map<MaterialId, Material> materials;
  std::vector<NirsPanel> panels;

  const WallSegment* find_wall(int id) const;
  // Throws std::out_of_range for an unknown material id.
  const Material& material_of(const WallSegment& wall) const;

  friend bool operator==(const FloorPlan&, const FloorPlan&) = default;
};

// A complete simulation input: floor plan, transmitter, and band.
struct Scenario {
  FloorPlan plan;
  Transceiver tx;
  Band band;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Violation {
  std::string path;  // e.g. "walls[2]" or "panels[0].roughness_sigma_m"
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class SceneError : public std::runtime_error {
 public:
  SceneError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

std::vector<Violation> validate_scene(const FloorPlan& plan);

// validate_scene plus transmitter, antenna, and band checks.
std::vector<Violation> validate_scenario(const Scenario& scenario);

// Returns a copy of `plan` with one more panel on `wall_id` at `offset_m`;
// all other panel fields come from `panel_template`. Throws SceneError for
// an unknown wall or an infeasible extent.
FloorPlan attach_panel(const FloorPlan& plan, int wall_id, double offset_m,
                       const NirsPanel& panel_template);

// True when the panel's extent fits on `wall` (tolerance 1e-9 m).
bool panel_fits(const WallSegment& wall, double offset_m, double width_m);

// Center point of tile `index` of `panel` hosted on `wall`.
Vec2 tile_center(const WallSegment& wall, const NirsPanel& panel, int index);

}  // namespace nirsplan
