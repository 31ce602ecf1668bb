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

// Request-level operations shared by the command line and the HTTP service,
// and the JSON documents they emit.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nirsplan/coverage.hpp"
#include "nirsplan/optimizer.hpp"

namespace nirsplan {

// "306", "356", or "custom:CENTER_HZ,BANDWIDTH_HZ". Throws
// std::invalid_argument.
Band parse_band(std::string_view text);

struct RunSettings {
  double cell_size_m = 0.25;
  int max_order = 2;
  std::optional<Band> band;
  std::optional<double> noise_figure_db;
  bool nlos_only = true;
  // Overrides the grid derived from the bounds and cell size.
  std::optional<GridSpec> grid;
};

struct CoverageRequest {
  Scenario scenario;
  RunSettings settings;
};

struct CoverageRun {
  Scenario scenario;  // with overrides applied
  LinkParams params;
  GridSpec grid;
  CoverageGrid with;
  CoverageGrid without;  // all panels removed
  EnhancementMap enhancement;
  bool nlos_only = true;
};

// Scenario after the band override.
Scenario effective_scenario(const Scenario& scenario, const RunSettings& settings);
LinkParams effective_params(const Scenario& effective, const RunSettings& settings);
TraceOptions effective_trace(const RunSettings& settings);
GridSpec effective_grid(const Scenario& effective, const RunSettings& settings);

// Throws ValidationError, std::invalid_argument.
CoverageRun run_coverage(const CoverageRequest& request);

struct OptimizeRequest {
  Scenario scenario;
  RunSettings settings;
  int k = 1;
  std::string algorithm = "greedy";  // single | greedy | exhaustive | anneal
  std::uint64_t seed = 0;
  double step_m = 0.3;
  Objective objective;
  AnnealSchedule schedule;
  NirsPanel panel_template;
};

struct OptimizeRun {
  PlacementSolution solution;
  CoverageRun coverage;  // the input scenario plus the chosen panels
  // Per chosen panel: distance to the specular point towards the centroid of
  // the stats domain.
  std::vector<std::optional<double>> specular_distance_m;
};

// Throws InfeasibleError when no feasible placement exists.
OptimizeRun run_optimize(const OptimizeRequest& request);
PlacementSolution solve_placement(const OptimizeRequest& request);

// Rounds to 4 decimals for dB serialization.
double round_db(double value);

nlohmann::json stats_to_json(const CoverageStats& stats, bool nlos_only);
nlohmann::json coverage_to_json(const CoverageRun& run);
nlohmann::json solution_to_json(const PlacementSolution& solution, const OptimizeRequest& request);
// solution_to_json plus diagnostics and the enhancement statistics.
nlohmann::json optimize_to_json(const OptimizeRun& run, const OptimizeRequest& request);

// Request bodies. Throw ParseError (paths relative to the body) or
// ValidationError (paths prefixed "scenario.").
CoverageRequest coverage_request_from_json(const nlohmann::json& body);
OptimizeRequest optimize_request_from_json(const nlohmann::json& body);

struct IrsComparison {
  double frequency_hz = 0.0;
  double d1_m = 0.0;
  double d2_m = 0.0;
  double direct_m = 0.0;
  long n_elements = 1;
  double reflection_loss_db = 0.0;
  double product_distance_loss_db = 0.0;
  double sum_distance_loss_db = 0.0;
  double direct_loss_db = 0.0;
  long elements_to_match_direct = 0;
};

IrsComparison compare_irs(double frequency_hz, double d1_m, double d2_m, double direct_m,
                          long n_elements, double reflection_loss_db);
nlohmann::json irs_to_json(const IrsComparison& c);

nlohmann::json presets_to_json();

}  // namespace nirsplan
