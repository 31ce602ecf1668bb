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

// Randomized invariant checks shared by the unit tests and the acceptance
// report. Every property runs a fixed number of seeded cases.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nirsplan::testing {

inline constexpr int kPropertyCases = 1000;

struct PropertyReport {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0 && cases >= kPropertyCases; }
};

PropertyReport roughness_bounds(std::uint64_t seed);
PropertyReport sum_distance_spreading(std::uint64_t seed);
PropertyReport image_method_angles(std::uint64_t seed);
PropertyReport panel_addition_monotone(std::uint64_t seed);
PropertyReport enhancement_non_negative(std::uint64_t seed);
PropertyReport interpolation_exact(std::uint64_t seed);
PropertyReport path_reciprocity(std::uint64_t seed);
PropertyReport capacity_monotone(std::uint64_t seed);
PropertyReport irs_element_doubling(std::uint64_t seed);

std::vector<PropertyReport> run_all_properties(std::uint64_t seed);

}  // namespace nirsplan::testing
