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


// Small scenes shared by the test binaries.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nirsplan/scene.hpp"

namespace nirsplan::testing {

// Open 10 x 10 box with four plasterboard walls.
inline FloorPlan open_box(double size = 10.0) {
  FloorPlan p;
  p.name = "box";
  p.bounds = {0.0, 0.0, size, size};
  p.materials["plasterboard"] = Material::plasterboard();
  p.materials["metal"] = Material::metal();
  p.walls = {{0, {0, 0}, {size, 0}, "plasterboard"},
             {1, {size, 0}, {size, size}, "plasterboard"},
             {2, {size, size}, {0, size}, "plasterboard"},
             {3, {0, size}, {0, 0}, "plasterboard"}};
  return p;
}

inline Scenario scenario_of(FloorPlan plan, Vec2 tx) {
  Scenario s;
  s.plan = std::move(plan);
  s.tx = {tx, 0.0, AntennaPattern::tx_default(), 13.0};
  s.band = Band::ghz306();
  return s;
}

// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace nirsplan::testing
