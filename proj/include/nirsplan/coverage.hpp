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

// Grid evaluation of link results, with/without-panel enhancement maps,
// coverage statistics, sample interpolation, and direction-scan emulation.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nirsplan/linkbudget.hpp"
#include "nirsplan/propagation.hpp"
#include "nirsplan/scene.hpp"

namespace nirsplan {

// Enhancement assigned to a cell that gains coverage from nothing.
inline constexpr double kEnhancementClampDb = 60.0;

// Regular grid of square cells; `origin` is the lower-left corner of cell
// (0, 0). Cells are stored row-major with row 0 at the minimum y.
struct GridSpec {
  Vec2 origin;
  double cell_size_m = 0.25;
  int nx = 1;
  int ny = 1;

  std::size_t cell_count() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
  Vec2 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * cell_size_m, origin.y + (iy + 0.5) * cell_size_m};
  }
  Vec2 cell_center(std::size_t i) const {
    return cell_center(static_cast<int>(i % nx), static_cast<int>(i / nx));
  }

  // Largest grid of `cell_size_m` cells anchored at the lower-left corner of
  // `bounds` that fits inside it.
  static GridSpec covering(const Rect& bounds, double cell_size_m);

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Throws std::invalid_argument when the spec is malformed or leaves `bounds`.
void validate_grid(const GridSpec& spec, const Rect& bounds);

struct CellResult {
  LinkResult link;
  bool los = false;
  // Reachable from a line-of-sight cell through open space.
  bool served = false;
  // Center on a wall or at the transmitter; never evaluated.
  bool excluded = false;
};

struct CoverageGrid {
  GridSpec spec;
  std::vector<CellResult> cells;

  const CellResult& at(int ix, int iy) const { return cells[spec.index(ix, iy)]; }
};

struct StatsOptions {
  // Restrict statistics to served non-line-of-sight cells; otherwise all
  // served cells count.
  bool nlos_only = true;
};

struct CoverageStats {
  double frac_above_3db = 0.0;
  double max_enhancement_db = 0.0;
  double mean_capacity_with_bps = 0.0;
  double mean_capacity_without_bps = 0.0;
  double top_decile_capacity_with_bps = 0.0;
  double top_decile_capacity_without_bps = 0.0;
  std::size_t cell_count = 0;
};

struct EnhancementMap {
  GridSpec spec;
  // Path-loss reduction in [0, 60] dB for every cell.
  std::vector<double> delta_db;
  // Cells that enter the statistics.
  std::vector<bool> in_domain;
  CoverageStats stats;
};

class GridMismatchError : public std::invalid_argument {
 public:
  GridMismatchError() : std::invalid_argument("coverage grids have different specs") {}
};

// True for cells that the statistics and objectives consider.
bool in_stats_domain(const CellResult& cell, const StatsOptions& options);

// Evaluates the link at every cell center. The served mask is a 4-connected
// flood fill from line-of-sight cells; steps between cell centers that touch
// a wall are not taken.
CoverageGrid compute_coverage(const Scenario& scenario, const GridSpec& spec,
                              const LinkParams& params, const TraceOptions& options = {});

// Line-of-sight cell flags and the served mask for `spec`. Both depend only
// on walls and the transmitter position.
struct VisibilityMask {
  std::vector<bool> los;
  std::vector<bool> served;
  std::vector<bool> excluded;
};
VisibilityMask compute_visibility(const FloorPlan& plan, Vec2 tx, const GridSpec& spec);

// Per-cell loss without minus loss with, clamped to [0, 60] dB; a cell that
// only the panel reaches counts as 60 dB.
double cell_enhancement_db(const LinkResult& with, const LinkResult& without);

EnhancementMap enhancement_map(const CoverageGrid& with, const CoverageGrid& without,
                               const StatsOptions& options = {});

// Capacity means and top-decile means (best ceil(n / 10) cells), counting
// no-coverage cells as zero, plus the enhancement fields.
CoverageStats capacity_summary(const CoverageGrid& with, const CoverageGrid& without,
                               const StatsOptions& options = {});

// Mean of the best ceil(0.1 n) values; 0 for an empty input.
double top_decile_mean(std::vector<double> values);

enum class Visibility { kLoS, kNLoS };

// LoS iff the closed segment tx-point touches no wall.
Visibility classify_nlos(const FloorPlan& plan, Vec2 tx, Vec2 point);

struct Sample {
  Vec2 point;
  double value = 0.0;
};

// Interpolates scattered dB samples onto the cell centers of `spec`.
// Rectangular lattices use tensor bilinear interpolation, collinear samples
// linear interpolation along their line, and other sets barycentric
// interpolation on a Delaunay triangulation. Points outside the samples'
// hull take the nearest sample's value. Throws std::invalid_argument for an
// empty sample list.
std::vector<double> bilinear_interpolate(std::span<const Sample> samples, const GridSpec& spec);

struct DssDirection {
  double azimuth_deg = 0.0;
  std::optional<double> power_dbm;
};

struct DssResult {
  std::vector<DssDirection> directions;
  // Sum of measured beam powers, peak gain removed, over the directions
  // nearest to some path's arrival; each such direction counts once.
  std::optional<double> synthesized_omni_dbm;
  // Incoherent sum of the same paths seen by a 0 dBi receiver.
  std::optional<double> true_omni_dbm;
};

// Direction-scan sounding from pre-traced paths whose rx gains are 0 dBi.
// Throws std::invalid_argument unless 360 / step_deg is a positive integer.
DssResult dss_from_paths(std::span<const PropPath> paths, double frequency_hz,
                         double tx_power_dbm, const AntennaPattern& rx_pattern,
                         double step_deg);

DssResult dss_emulate(const Scenario& scenario, Vec2 rx, const AntennaPattern& rx_pattern,
                      double step_deg, const TraceOptions& options = {});

}  // namespace nirsplan
