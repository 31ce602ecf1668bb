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

// Panel placement search: candidate enumeration, objective evaluation, and
// single / greedy / exhaustive / annealing optimizers.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nirsplan/coverage.hpp"

namespace nirsplan {

struct PlacementCandidate {
  int wall_id = 0;
  double offset_m = 0.0;
  NirsPanel panel_template;

  friend bool operator==(const PlacementCandidate&, const PlacementCandidate&) = default;
};

enum class ObjectiveKind { kMeanCapacity, kPercentileCapacity, kMinCapacity, kFracAboveSnr };

std::string_view to_string(ObjectiveKind kind);
// Throws std::invalid_argument for an unknown name.
ObjectiveKind parse_objective_kind(std::string_view name);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kPercentileCapacity;
  double percentile = 0.1;         // in (0, 1)
  double snr_threshold_db = 10.0;  // for kFracAboveSnr
  bool nlos_only = true;
};

// Throws std::invalid_argument when a parameter is out of range.
void validate_objective(const Objective& objective);

// Objective over per-cell (capacity, snr) pairs of the stats domain. Empty
// domains score 0. Percentiles use the nearest-rank rule.
double objective_value(const Objective& objective, std::span<const double> capacities,
                       std::span<const std::optional<double>> snrs);

// Objective of a computed grid.
double objective_value(const Objective& objective, const CoverageGrid& grid);

class OverlapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two placements overlap when they share a wall and their extents intersect
// in more than a point.
bool placements_overlap(const PlacementCandidate& a, const PlacementCandidate& b);

// Offsets 0, step, 2 step, ... on every wall (ascending wall id) where the
// template fits, skipping positions that overlap panels already in the plan.
std::vector<PlacementCandidate> enumerate_candidates(const FloorPlan& plan, double step_m,
                                                     const NirsPanel& panel_template);

struct PlacementProblem {
  Scenario scenario;
  GridSpec grid;
  LinkParams params;
  TraceOptions trace;
  Objective objective;
};

// Attaches the placements in order, computes coverage, applies the objective.
// Throws OverlapError for overlapping placements.
double evaluate_placement(const PlacementProblem& problem,
                          const std::vector<PlacementCandidate>& placements);

// Scene with the placements attached in order.
Scenario with_placements(const Scenario& scenario,
                         const std::vector<PlacementCandidate>& placements);

// Caches per-cell baseline power sums and per-candidate path terms, so that
// evaluating a subset costs one pass over the stats domain. Results equal
// evaluate_placement on the candidates in ascending index order, bit for bit.
class PlacementEvaluator {
 public:
  PlacementEvaluator(PlacementProblem problem, std::vector<PlacementCandidate> candidates);

  const PlacementProblem& problem() const { return problem_; }
  const std::vector<PlacementCandidate>& candidates() const { return candidates_; }
  std::size_t size() const { return candidates_.size(); }

  double baseline() const { return baseline_; }
  // `chosen` must be sorted ascending and pairwise non-overlapping.
  double evaluate(const std::vector<int>& chosen) const;
  bool overlaps(int a, int b) const { return overlap_[a * candidates_.size() + b]; }
  // True when `c` overlaps none of `chosen` (ignoring the entry equal to `skip`).
  bool compatible(int c, const std::vector<int>& chosen, int skip = -1) const;

 private:
  PlacementProblem problem_;
  std::vector<PlacementCandidate> candidates_;
  std::vector<std::size_t> domain_;
  std::vector<double> base_sum_;
  // terms_[c][k] holds the linear gains of candidate c at domain cell k.
  std::vector<std::vector<std::vector<double>>> terms_;
  std::vector<bool> overlap_;
  double baseline_ = 0.0;
};

struct PlacementSolution {
  std::vector<PlacementCandidate> chosen;
  std::vector<int> chosen_indices;  // ascending
  double objective_value = 0.0;
  double baseline_value = 0.0;
  long evaluations = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  // Greedy: objective after each round. Anneal: the greedy seed's rounds.
  std::vector<double> round_values;
};

PlacementSolution optimize_single(const PlacementEvaluator& evaluator);

PlacementSolution optimize_greedy(const PlacementEvaluator& evaluator, int k);

// All pairwise compatible k-subsets in lexicographic order; ties keep the
// first subset.
PlacementSolution optimize_exhaustive(const PlacementEvaluator& evaluator, int k);

struct AnnealSchedule {
  // Defaults to 10% of the baseline objective (or of the greedy seed's
  // value when the baseline is zero).
  std::optional<double> initial_temperature;
  double cooling = 0.95;
  int cooling_period = 50;
  int iterations = 2000;
};

// Greedy-seeded annealing over k-subsets. Iteration 1 scores the seed; each
// later iteration swaps one chosen candidate for a compatible unchosen one.
// Returns the best state seen; evaluations = greedy evaluations + iterations.
PlacementSolution optimize_anneal(const PlacementEvaluator& evaluator, int k,
                                  const AnnealSchedule& schedule, std::uint64_t seed);

// Distance from the panel midpoint to the mirror point on the host wall of
// the path from the transmitter to `target`; nullopt when the mirror point
// is off the wall.
std::optional<double> specular_distance(const Scenario& scenario,
                                        const PlacementCandidate& placement, Vec2 target);

// Centroid of the stats-domain cell centers; nullopt for an empty domain.
std::optional<Vec2> domain_centroid(const CoverageGrid& grid, const StatsOptions& options = {});

}  // namespace nirsplan
