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

#include "nirsplan/presets.hpp"

#include <stdexcept>

namespace nirsplan {

namespace {

// Painted concrete corridor walls: lower and flatter loss than plasterboard.
Material corridor_wall() { return {"corridor_wall", 6.0, 2.0, 0.0}; }

std::vector<WallSegment> polygon(const std::vector<Vec2>& pts, const std::string& material,
                                 int first_id = 0) {
  std::vector<WallSegment> walls;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    walls.push_back({first_id + static_cast<int>(i), pts[i], pts[(i + 1) % pts.size()],
                     material});
  }
  return walls;
}

// 2 m wide corridor with 10 m arms; the horizontal arm runs along y in
// [0, 2] and turns north at x in [8, 10]. Wall 1 is the outer wall facing
// the transmitter across the turn.
Scenario l_corridor(bool with_panel) {
  Scenario s;
  s.plan.name = with_panel ? "l-corridor-nirs" : "l-corridor";
  s.plan.bounds = {0.0, 0.0, 10.0, 10.0};
  s.plan.walls = polygon({{0, 0}, {10, 0}, {10, 10}, {8, 10}, {8, 2}, {0, 2}}, "corridor_wall");
  s.plan.materials["corridor_wall"] = corridor_wall();
  if (with_panel) s.plan.panels.push_back(corridor_corner_panel());
  s.tx = {{7.5, 1.0}, 0.0, AntennaPattern::tx_default(), 13.0};
  s.band = Band::ghz306();
  return s;
}

// 10 m x 8 m office with a 2 m x 2 m metal cabinet shadowing its east side.
Scenario room_obstacle(bool with_panel) {
  Scenario s;
  s.plan.name = with_panel ? "room-obstacle-nirs" : "room-obstacle";
  s.plan.bounds = {0.0, 0.0, 10.0, 8.0};
  s.plan.walls = polygon({{0, 0}, {10, 0}, {10, 8}, {0, 8}}, "plasterboard");
  auto cabinet = polygon({{4, 3}, {6, 3}, {6, 5}, {4, 5}}, "metal", 10);
  s.plan.walls.insert(s.plan.walls.end(), cabinet.begin(), cabinet.end());
  s.plan.materials["plasterboard"] = Material::plasterboard();
  s.plan.materials["metal"] = Material::metal();
  if (with_panel) {
    NirsPanel p;
    p.wall_id = 2;
    p.offset_m = 4.5;
    s.plan.panels.push_back(p);
  }
  s.tx = {{1.5, 4.0}, 0.0, AntennaPattern::tx_default(), 13.0};
  s.band = Band::ghz306();
  return s;
}

}  // namespace

NirsPanel corridor_corner_panel() {
  NirsPanel p;
  p.wall_id = 1;
  p.offset_m = 1.6;
  return p;
}

std::vector<std::string> preset_names() {
  return {"l-corridor", "l-corridor-nirs", "room-obstacle", "room-obstacle-nirs"};
}

Scenario preset(const std::string& name) {
  if (name == "l-corridor") return l_corridor(false);
  if (name == "l-corridor-nirs") return l_corridor(true);
  if (name == "room-obstacle") return room_obstacle(false);
  if (name == "room-obstacle-nirs") return room_obstacle(true);
  throw std::out_of_range("unknown preset '" + name + "'");
}

}  // namespace nirsplan
