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

#include "nirsplan/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace nirsplan {

namespace {

constexpr double kOffsetTol = 1e-9;

TraceOptions link_trace_options(const PlacementProblem& p) {
  TraceOptions opts = p.trace;
  if (!opts.rx_antenna) opts.rx_gain_dbi = p.params.rx_gain_dbi;
  return opts;
}

std::vector<PlacementCandidate> pick(const std::vector<PlacementCandidate>& all,
                                     const std::vector<int>& idx) {
  std::vector<PlacementCandidate> out;
  for (int i : idx) out.push_back(all[i]);
  return out;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kMeanCapacity:
      return "mean_capacity";
    case ObjectiveKind::kPercentileCapacity:
      return "percentile_capacity";
    case ObjectiveKind::kMinCapacity:
      return "min_capacity";
    case ObjectiveKind::kFracAboveSnr:
      return "frac_above_snr";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  for (auto k : {ObjectiveKind::kMeanCapacity, ObjectiveKind::kPercentileCapacity,
                 ObjectiveKind::kMinCapacity, ObjectiveKind::kFracAboveSnr}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

void validate_objective(const Objective& objective) {
  if (!(objective.percentile > 0.0 && objective.percentile < 1.0)) {
    throw std::invalid_argument("percentile must lie in (0, 1)");
  }
  if (!std::isfinite(objective.snr_threshold_db)) {
    throw std::invalid_argument("snr threshold must be finite");
  }
}

double objective_value(const Objective& objective, std::span<const double> capacities,
                       std::span<const std::optional<double>> snrs) {
  const std::size_t n = capacities.size();
  if (n == 0) return 0.0;
  switch (objective.kind) {
    case ObjectiveKind::kMeanCapacity: {
      double sum = 0.0;
      for (double c : capacities) sum += c;
      return sum / static_cast<double>(n);
    }
    case ObjectiveKind::kPercentileCapacity: {
      std::vector<double> sorted(capacities.begin(), capacities.end());
      std::sort(sorted.begin(), sorted.end());
      const auto rank = static_cast<std::size_t>(
          std::ceil(objective.percentile * static_cast<double>(n) - 1e-12));
      return sorted[std::clamp<std::size_t>(rank, 1, n) - 1];
    }
    case ObjectiveKind::kMinCapacity:
      return *std::min_element(capacities.begin(), capacities.end());
    case ObjectiveKind::kFracAboveSnr: {
      std::size_t above = 0;
      for (const auto& s : snrs) {
        if (s && *s >= objective.snr_threshold_db) ++above;
      }
      return static_cast<double>(above) / static_cast<double>(n);
    }
  }
  return 0.0;
}

double objective_value(const Objective& objective, const CoverageGrid& grid) {
  const StatsOptions opts{objective.nlos_only};
  std::vector<double> caps;
  std::vector<std::optional<double>> snrs;
  for (const auto& cell : grid.cells) {
    if (!in_stats_domain(cell, opts)) continue;
    caps.push_back(cell.link.capacity_bps);
    snrs.push_back(cell.link.snr_db);
  }
  return objective_value(objective, caps, snrs);
}

bool placements_overlap(const PlacementCandidate& a, const PlacementCandidate& b) {
  if (a.wall_id != b.wall_id) return false;
  const double a1 = a.offset_m + a.panel_template.width_m;
  const double b1 = b.offset_m + b.panel_template.width_m;
  return a.offset_m < b1 - kOffsetTol && b.offset_m < a1 - kOffsetTol;
}

std::vector<PlacementCandidate> enumerate_candidates(const FloorPlan& plan, double step_m,
                                                     const NirsPanel& panel_template) {
  if (!(step_m > 0.0) || !std::isfinite(step_m)) {
    throw std::invalid_argument("candidate step must be > 0");
  }
  std::vector<const WallSegment*> walls;
  for (const auto& w : plan.walls) walls.push_back(&w);
  std::sort(walls.begin(), walls.end(),
            [](const WallSegment* a, const WallSegment* b) { return a->id < b->id; });

  std::vector<PlacementCandidate> out;
  for (const WallSegment* w : walls) {
    for (long k = 0;; ++k) {
      const double offset = static_cast<double>(k) * step_m;
      if (!panel_fits(*w, offset, panel_template.width_m)) break;
      PlacementCandidate c{w->id, offset, panel_template};
      c.panel_template.wall_id = w->id;
      c.panel_template.offset_m = offset;
      const bool taken = std::any_of(plan.panels.begin(), plan.panels.end(), [&](const NirsPanel& p) {
        return placements_overlap(c, {p.wall_id, p.offset_m, p});
      });
      if (!taken) out.push_back(c);
    }
  }
  return out;
}

Scenario with_placements(const Scenario& scenario,
                         const std::vector<PlacementCandidate>& placements) {
  for (std::size_t i = 0; i < placements.size(); ++i) {
    for (std::size_t j = i + 1; j < placements.size(); ++j) {
      if (placements_overlap(placements[i], placements[j])) {
        throw OverlapError("placements " + std::to_string(i) + " and " + std::to_string(j) +
                           " overlap on wall " + std::to_string(placements[i].wall_id));
      }
    }
  }
  Scenario s = scenario;
  for (const auto& p : placements) {
    s.plan = attach_panel(s.plan, p.wall_id, p.offset_m, p.panel_template);
  }
  return s;
}

double evaluate_placement(const PlacementProblem& problem,
                          const std::vector<PlacementCandidate>& placements) {
  const Scenario s = with_placements(problem.scenario, placements);
  const CoverageGrid grid = compute_coverage(s, problem.grid, problem.params, problem.trace);
  return objective_value(problem.objective, grid);
}

PlacementEvaluator::PlacementEvaluator(PlacementProblem problem,
                                       std::vector<PlacementCandidate> candidates)
    : problem_(std::move(problem)), candidates_(std::move(candidates)) {
  validate_objective(problem_.objective);
  validate_grid(problem_.grid, problem_.scenario.plan.bounds);
  const Scenario& s = problem_.scenario;
  const double f = problem_.params.band.center_hz;
  const TraceOptions opts = link_trace_options(problem_);

  const VisibilityMask vis = compute_visibility(s.plan, s.tx.position, problem_.grid);
  const StatsOptions stats{problem_.objective.nlos_only};
  for (std::size_t i = 0; i < problem_.grid.cell_count(); ++i) {
    CellResult probe;
    probe.los = vis.los[i];
    probe.served = vis.served[i];
    probe.excluded = vis.excluded[i];
    if (in_stats_domain(probe, stats)) domain_.push_back(i);
  }

  for (std::size_t k : domain_) {
    const auto paths = trace_paths(s.plan, s.tx, problem_.grid.cell_center(k), f, opts);
    base_sum_.push_back(linear_path_gain_sum(paths, f));
  }

  const std::size_t n = candidates_.size();
  terms_.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto& cand = candidates_[c];
    const FloorPlan plan = attach_panel(s.plan, cand.wall_id, cand.offset_m, cand.panel_template);
    const int panel = static_cast<int>(plan.panels.size()) - 1;
    terms_[c].resize(domain_.size());
    for (std::size_t k = 0; k < domain_.size(); ++k) {
      const auto paths =
          trace_panel_paths(plan, s.tx, problem_.grid.cell_center(domain_[k]), f, panel, opts);
      for (const auto& p : paths) {
        terms_[c][k].push_back(std::pow(10.0, -path_total_loss_db(p, f) / 10.0));
      }
    }
  }

  overlap_.assign(n * n, false);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      overlap_[a * n + b] = a != b && placements_overlap(candidates_[a], candidates_[b]);
    }
  }
  baseline_ = evaluate({});
}

bool PlacementEvaluator::compatible(int c, const std::vector<int>& chosen, int skip) const {
  for (int o : chosen) {
    if (o == skip) continue;
    if (o == c || overlaps(c, o)) return false;
  }
  return true;
}

double PlacementEvaluator::evaluate(const std::vector<int>& chosen) const {
  std::vector<double> caps(domain_.size());
  std::vector<std::optional<double>> snrs(domain_.size());
  for (std::size_t k = 0; k < domain_.size(); ++k) {
    double sum = base_sum_[k];
    for (int c : chosen) {
      for (double t : terms_[c][k]) sum += t;
    }
    const LinkResult r = link_from_linear(sum, problem_.scenario, problem_.params);
    caps[k] = r.capacity_bps;
    snrs[k] = r.snr_db;
  }
  return objective_value(problem_.objective, caps, snrs);
}

namespace {

PlacementSolution make_solution(const PlacementEvaluator& ev, std::vector<int> chosen,
                                double value, long evaluations, std::string algorithm) {
  std::sort(chosen.begin(), chosen.end());
  PlacementSolution s;
  s.chosen = pick(ev.candidates(), chosen);
  s.chosen_indices = std::move(chosen);
  s.objective_value = value;
  s.baseline_value = ev.baseline();
  s.evaluations = evaluations;
  s.algorithm = std::move(algorithm);
  return s;
}

std::vector<int> with_added(std::vector<int> chosen, int c) {
  chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), c), c);
  return chosen;
}

void require_k(const PlacementEvaluator& ev, int k) {
  if (k < 1) throw std::invalid_argument("panel count k must be >= 1");
  if (static_cast<std::size_t>(k) > ev.size()) {
    throw InfeasibleError("only " + std::to_string(ev.size()) + " candidates for k = " +
                          std::to_string(k));
  }
}

}  // namespace

PlacementSolution optimize_single(const PlacementEvaluator& ev) {
  if (ev.size() == 0) throw InfeasibleError("no feasible placement candidates");
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(ev.size()); ++c) {
    const double v = ev.evaluate({c});
    if (v > best_value) {
      best_value = v;
      best = c;
    }
  }
  return make_solution(ev, {best}, best_value, static_cast<long>(ev.size()), "single");
}

PlacementSolution optimize_greedy(const PlacementEvaluator& ev, int k) {
  require_k(ev, k);
  std::vector<int> chosen;
  std::vector<double> rounds;
  long evaluations = 0;
  double value = ev.baseline();
  for (int round = 0; round < k; ++round) {
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < static_cast<int>(ev.size()); ++c) {
      if (!ev.compatible(c, chosen)) continue;
      const double v = ev.evaluate(with_added(chosen, c));
      ++evaluations;
      if (v > best_value) {
        best_value = v;
        best = c;
      }
    }
    if (best < 0) {
      throw InfeasibleError("no non-overlapping candidate left for panel " +
                            std::to_string(round + 1) + " of " + std::to_string(k));
    }
    chosen = with_added(chosen, best);
    value = best_value;
    rounds.push_back(value);
  }
  PlacementSolution s = make_solution(ev, chosen, value, evaluations, "greedy");
  s.round_values = std::move(rounds);
  return s;
}

PlacementSolution optimize_exhaustive(const PlacementEvaluator& ev, int k) {
  require_k(ev, k);
  const int n = static_cast<int>(ev.size());
  std::vector<int> current;
  std::vector<int> best;
  double best_value = -std::numeric_limits<double>::infinity();
  long evaluations = 0;
  auto recurse = [&](auto&& self, int start) -> void {
    if (static_cast<int>(current.size()) == k) {
      const double v = ev.evaluate(current);
      ++evaluations;
      if (v > best_value) {
        best_value = v;
        best = current;
      }
      return;
    }
    for (int c = start; c < n; ++c) {
      if (!ev.compatible(c, current)) continue;
      current.push_back(c);
      self(self, c + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  if (best.empty()) {
    throw InfeasibleError("no set of " + std::to_string(k) + " non-overlapping candidates");
  }
  return make_solution(ev, best, best_value, evaluations, "exhaustive");
}

PlacementSolution optimize_anneal(const PlacementEvaluator& ev, int k,
                                  const AnnealSchedule& schedule, std::uint64_t seed) {
  if (schedule.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(schedule.cooling > 0.0 && schedule.cooling < 1.0)) {
    throw std::invalid_argument("cooling must lie in (0, 1)");
  }
  if (schedule.cooling_period < 1) throw std::invalid_argument("cooling period must be >= 1");
  const PlacementSolution greedy = optimize_greedy(ev, k);
  long evaluations = greedy.evaluations;

  double temperature = schedule.initial_temperature.value_or(0.1 * ev.baseline());
  if (!schedule.initial_temperature && !(temperature > 0.0)) {
    temperature = 0.1 * greedy.objective_value;
  }
  if (!(temperature > 0.0)) temperature = 1.0;

  std::mt19937_64 rng(seed);
  std::vector<int> state = greedy.chosen_indices;
  double current = ev.evaluate(state);
  ++evaluations;
  std::vector<int> best_state = state;
  double best = current;

  const int n = static_cast<int>(ev.size());
  std::vector<std::pair<int, int>> moves;
  for (int it = 2; it <= schedule.iterations; ++it) {
    if ((it - 1) % schedule.cooling_period == 0) temperature *= schedule.cooling;
    moves.clear();
    for (int i = 0; i < k; ++i) {
      for (int c = 0; c < n; ++c) {
        if (std::binary_search(state.begin(), state.end(), c)) continue;
        if (ev.compatible(c, state, state[i])) moves.emplace_back(i, c);
      }
    }
    if (moves.empty()) break;
    const auto [slot, replacement] = moves[rng() % moves.size()];
    std::vector<int> next = state;
    next[slot] = replacement;
    std::sort(next.begin(), next.end());
    const double v = ev.evaluate(next);
    ++evaluations;
    const double delta = v - current;
    if (delta >= 0.0 || uniform01(rng) < std::exp(delta / temperature)) {
      state = std::move(next);
      current = v;
    }
    if (v > best) {
      best = v;
      best_state = state;
    }
  }
  PlacementSolution s = make_solution(ev, best_state, best, evaluations, "anneal");
  s.seed = seed;
  s.round_values = greedy.round_values;
  return s;
}

std::optional<double> specular_distance(const Scenario& scenario,
                                        const PlacementCandidate& placement, Vec2 target) {
  const WallSegment* wall = scenario.plan.find_wall(placement.wall_id);
  if (wall == nullptr) return std::nullopt;
  const Vec2 tx = scenario.tx.position;
  const int tx_side = side_of_line(tx, wall->p1, wall->p2);
  if (tx_side == 0 || tx_side != side_of_line(target, wall->p1, wall->p2)) return std::nullopt;
  const Vec2 image = mirror_across_line(tx, wall->p1, wall->p2);
  const auto hit = segment_crossing(image, target, wall->p1, wall->p2);
  if (!hit) return std::nullopt;
  const Vec2 mid = wall->point_at(placement.offset_m + placement.panel_template.width_m / 2.0);
  return distance(mid, *hit);
}

std::optional<Vec2> domain_centroid(const CoverageGrid& grid, const StatsOptions& options) {
  Vec2 sum;
  std::size_t n = 0;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (!in_stats_domain(grid.cells[i], options)) continue;
    sum = sum + grid.spec.cell_center(i);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return (1.0 / static_cast<double>(n)) * sum;
}

}  // namespace nirsplan
