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

// Bundled scenarios. The corridor dimensions are illustrative, not a
// surveyed site.

#pragma once

#include <string>
#include <vector>

#include "nirsplan/scene.hpp"

namespace nirsplan {

// "l-corridor", "l-corridor-nirs", "room-obstacle", "room-obstacle-nirs".
std::vector<std::string> preset_names();

// Throws std::out_of_range for an unknown name.
Scenario preset(const std::string& name);

// The panel glued near the corridor's turning corner.
NirsPanel corridor_corner_panel();

}  // namespace nirsplan
