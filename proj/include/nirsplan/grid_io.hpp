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

// Grid exports. CSV: '#'-prefixed "key: value" header lines, then ny rows of
// nx comma-separated values, row 0 at minimum y; empty fields mark
// no-coverage. PGM: ASCII P2 with row 0 at maximum y,
// gray = round(255 * (clamp(v, lo, hi) - lo) / (hi - lo)); empty cells are 0.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nirsplan/coverage.hpp"

namespace nirsplan {

struct GridData {
  GridSpec spec;
  std::string quantity;
  std::string units;
  std::vector<std::optional<double>> values;  // row-major, row 0 at min y
};

// `decimals` fixed digits after the point.
void write_grid_csv(std::ostream& out, const GridData& grid, int decimals);

// Throws std::runtime_error on malformed input.
GridData read_grid_csv(std::istream& in);

void write_grid_pgm(std::ostream& out, const GridData& grid, double lo = 0.0,
                    double hi = kEnhancementClampDb);

// Effective path loss per cell; excluded and no-coverage cells are empty.
GridData path_loss_grid(const CoverageGrid& grid);

// Enhancement per stats-domain cell; other cells are empty.
GridData enhancement_grid(const EnhancementMap& map);

// Fixed-point text with `decimals` digits; "-0.0000" is printed as "0.0000".
std::string format_fixed(double value, int decimals);

}  // namespace nirsplan
