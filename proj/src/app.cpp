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

#include "nirsplan/app.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nirsplan/presets.hpp"
#include "nirsplan/scenario_io.hpp"

namespace nirsplan {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
  throw ValidationError({{path, message}});
}

json nullable_db(const std::optional<double>& v) {
  return v ? json(round_db(*v)) : json(nullptr);
}

bool capacity_objective(ObjectiveKind k) { return k != ObjectiveKind::kFracAboveSnr; }

Scenario scenario_field(const JsonReader& body) {
  if (body.has("preset")) {
    if (body.has("scenario")) throw ParseError("preset", "give either scenario or preset");
    const std::string name = body.string("preset");
    try {
      return preset(name);
    } catch (const std::out_of_range&) {
      throw ParseError("preset", "unknown preset '" + name + "'");
    }
  }
  const json& doc = body.object("scenario");
  try {
    return scenario_from_json(doc);
  } catch (const ParseError& e) {
    const std::string what = e.what();
    const std::string msg = e.path().empty() ? what : what.substr(e.path().size() + 2);
    throw ParseError(e.path().empty() ? "scenario" : "scenario." + e.path(), msg);
  } catch (const ValidationError& e) {
    std::vector<Violation> v = e.violations();
    for (auto& x : v) x.path = "scenario." + x.path;
    throw ValidationError(std::move(v));
  }
}

RunSettings settings_from(const JsonReader& body) {
  RunSettings s;
  s.cell_size_m = body.number_or("cell_size_m", s.cell_size_m);
  s.max_order = static_cast<int>(body.integer_or("max_order", s.max_order));
  s.nlos_only = body.boolean_or("nlos_only", s.nlos_only);
  if (body.has("noise_figure_db")) s.noise_figure_db = body.number("noise_figure_db");
  if (body.has("band")) {
    try {
      s.band = parse_band(body.string("band"));
    } catch (const std::invalid_argument& e) {
      throw ParseError("band", e.what());
    }
  }
  if (body.has("grid")) {
    const JsonReader g(body.object("grid"), "grid");
    g.reject_unknown({"origin", "cell_size_m", "nx", "ny"});
    GridSpec spec;
    spec.origin = g.point("origin");
    spec.cell_size_m = g.number("cell_size_m");
    spec.nx = static_cast<int>(g.integer("nx"));
    spec.ny = static_cast<int>(g.integer("ny"));
    s.grid = spec;
  }
  return s;
}

}  // namespace

double round_db(double value) { return std::round(value * 1e4) / 1e4; }

Band parse_band(std::string_view text) {
  if (text == "306") return Band::ghz306();
  if (text == "356") return Band::ghz356();
  constexpr std::string_view kCustom = "custom:";
  if (text.substr(0, kCustom.size()) == kCustom) {
    const std::string rest(text.substr(kCustom.size()));
    const auto comma = rest.find(',');
    if (comma != std::string::npos) {
      try {
        std::size_t used1 = 0;
        std::size_t used2 = 0;
        const std::string a = rest.substr(0, comma);
        const std::string b = rest.substr(comma + 1);
        const double center = std::stod(a, &used1);
        const double bw = std::stod(b, &used2);
        if (used1 == a.size() && used2 == b.size() && std::isfinite(center) &&
            std::isfinite(bw) && bw > 0.0 && center > bw / 2.0) {
          return {center, bw};
        }
      } catch (const std::logic_error&) {
      }
    }
  }
  throw std::invalid_argument("band must be 306, 356, or custom:CENTER_HZ,BANDWIDTH_HZ with "
                              "center > bandwidth / 2 > 0");
}

Scenario effective_scenario(const Scenario& scenario, const RunSettings& settings) {
  Scenario s = scenario;
  if (settings.band) s.band = *settings.band;
  auto violations = validate_scenario(s);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return s;
}

LinkParams effective_params(const Scenario& effective, const RunSettings& settings) {
  LinkParams p = LinkParams::from_scenario(effective);
  if (settings.noise_figure_db) {
    if (!(*settings.noise_figure_db >= 0.0) || !std::isfinite(*settings.noise_figure_db)) {
      invalid("noise_figure_db", "must be finite and >= 0");
    }
    p.noise_figure_db = *settings.noise_figure_db;
  }
  return p;
}

TraceOptions effective_trace(const RunSettings& settings) {
  if (settings.max_order < 0 || settings.max_order > 3) invalid("max_order", "must lie in [0, 3]");
  TraceOptions t;
  t.max_order = settings.max_order;
  return t;
}

GridSpec effective_grid(const Scenario& effective, const RunSettings& settings) {
  GridSpec g;
  if (settings.grid) {
    g = *settings.grid;
  } else {
    if (!(settings.cell_size_m > 0.0) || !std::isfinite(settings.cell_size_m)) {
      invalid("cell_size_m", "must be > 0");
    }
    g = GridSpec::covering(effective.plan.bounds, settings.cell_size_m);
  }
  try {
    validate_grid(g, effective.plan.bounds);
  } catch (const std::invalid_argument& e) {
    invalid("grid", e.what());
  }
  return g;
}

CoverageRun run_coverage(const CoverageRequest& request) {
  CoverageRun run;
  run.scenario = effective_scenario(request.scenario, request.settings);
  run.params = effective_params(run.scenario, request.settings);
  run.grid = effective_grid(run.scenario, request.settings);
  const TraceOptions trace = effective_trace(request.settings);
  run.with = compute_coverage(run.scenario, run.grid, run.params, trace);
  Scenario bare = run.scenario;
  bare.plan.panels.clear();
  run.without = compute_coverage(bare, run.grid, run.params, trace);
  run.nlos_only = request.settings.nlos_only;
  run.enhancement = enhancement_map(run.with, run.without, {run.nlos_only});
  return run;
}

PlacementSolution solve_placement(const OptimizeRequest& request) {
  const Scenario s = effective_scenario(request.scenario, request.settings);
  PlacementProblem problem{s, effective_grid(s, request.settings),
                           effective_params(s, request.settings),
                           effective_trace(request.settings), request.objective};
  problem.objective.nlos_only = request.settings.nlos_only;
  try {
    validate_objective(problem.objective);
  } catch (const std::invalid_argument& e) {
    invalid("objective", e.what());
  }
  if (request.k < 1) invalid("k", "must be >= 1");
  if (!(request.step_m > 0.0) || !std::isfinite(request.step_m)) invalid("step_m", "must be > 0");
  const NirsPanel& t = request.panel_template;
  if (!(t.width_m > 0.0) || !(t.tile_size_m > 0.0) || t.tile_size_m > t.width_m + 1e-9 ||
      !(t.roughness_sigma_m >= 0.0) || !(t.reflectivity_loss_db >= 0.0)) {
    invalid("panel_template", "invalid panel template");
  }

  auto candidates = enumerate_candidates(s.plan, request.step_m, t);
  if (candidates.empty()) {
    std::ostringstream msg;
    msg << "no wall can host a " << t.width_m << " m panel";
    throw InfeasibleError(msg.str());
  }
  const PlacementEvaluator evaluator(std::move(problem), std::move(candidates));
  PlacementSolution sol;
  if (request.algorithm == "single") {
    if (request.k != 1) invalid("k", "algorithm 'single' places exactly one panel");
    sol = optimize_single(evaluator);
  } else if (request.algorithm == "greedy") {
    sol = optimize_greedy(evaluator, request.k);
  } else if (request.algorithm == "exhaustive") {
    sol = optimize_exhaustive(evaluator, request.k);
  } else if (request.algorithm == "anneal") {
    sol = optimize_anneal(evaluator, request.k, request.schedule, request.seed);
  } else {
    invalid("algorithm", "must be one of single, greedy, exhaustive, anneal");
  }
  sol.seed = request.seed;
  return sol;
}

OptimizeRun run_optimize(const OptimizeRequest& request) {
  OptimizeRun run;
  run.solution = solve_placement(request);
  CoverageRequest cov{with_placements(request.scenario, run.solution.chosen), request.settings};
  run.coverage = run_coverage(cov);
  const auto centroid = domain_centroid(run.coverage.without, {request.settings.nlos_only});
  for (const auto& c : run.solution.chosen) {
    run.specular_distance_m.push_back(
        centroid ? specular_distance(run.coverage.scenario, c, *centroid) : std::nullopt);
  }
  return run;
}

json stats_to_json(const CoverageStats& s, bool nlos_only) {
  return {{"frac_above_3db", s.frac_above_3db},
          {"max_enhancement_db", round_db(s.max_enhancement_db)},
          {"mean_capacity_with_bps", std::llround(s.mean_capacity_with_bps)},
          {"mean_capacity_without_bps", std::llround(s.mean_capacity_without_bps)},
          {"top_decile_capacity_with_bps", std::llround(s.top_decile_capacity_with_bps)},
          {"top_decile_capacity_without_bps", std::llround(s.top_decile_capacity_without_bps)},
          {"cell_count", s.cell_count},
          {"nlos_only", nlos_only}};
}

json coverage_to_json(const CoverageRun& run) {
  const GridSpec& g = run.grid;
  json loss_with = json::array();
  json loss_without = json::array();
  json cap_with = json::array();
  json cap_without = json::array();
  json enhancement = json::array();
  json los = json::array();
  json domain = json::array();
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const CellResult& w = run.with.cells[i];
    const CellResult& o = run.without.cells[i];
    loss_with.push_back(nullable_db(w.link.effective_path_loss_db));
    loss_without.push_back(nullable_db(o.link.effective_path_loss_db));
    cap_with.push_back(std::llround(w.link.capacity_bps));
    cap_without.push_back(std::llround(o.link.capacity_bps));
    const bool in = run.enhancement.in_domain[i];
    enhancement.push_back(in ? json(round_db(run.enhancement.delta_db[i])) : json(nullptr));
    los.push_back(o.los);
    domain.push_back(in);
  }
  return {{"scenario", run.scenario.plan.name},
          {"grid",
           {{"origin", {g.origin.x, g.origin.y}},
            {"cell_size_m", g.cell_size_m},
            {"nx", g.nx},
            {"ny", g.ny}}},
          {"band", {{"center_hz", run.params.band.center_hz},
                    {"bandwidth_hz", run.params.band.bandwidth_hz}}},
          {"noise_figure_db", run.params.noise_figure_db},
          {"path_loss_with_db", std::move(loss_with)},
          {"path_loss_without_db", std::move(loss_without)},
          {"capacity_with_bps", std::move(cap_with)},
          {"capacity_without_bps", std::move(cap_without)},
          {"enhancement_db", std::move(enhancement)},
          {"los", std::move(los)},
          {"stats_domain", std::move(domain)},
          {"stats", stats_to_json(run.enhancement.stats, run.nlos_only)}};
}

json solution_to_json(const PlacementSolution& s, const OptimizeRequest& request) {
  const bool cap = capacity_objective(request.objective.kind);
  auto value = [cap](double v) { return cap ? json(std::llround(v)) : json(v); };
  json chosen = json::array();
  for (const auto& c : s.chosen) {
    chosen.push_back({{"wall_id", c.wall_id},
                      {"offset_m", round_db(c.offset_m)},
                      {"width_m", c.panel_template.width_m}});
  }
  json rounds = json::array();
  for (double r : s.round_values) rounds.push_back(value(r));
  return {{"algorithm", s.algorithm},
          {"k", request.k},
          {"seed", s.seed},
          {"objective",
           {{"kind", std::string(to_string(request.objective.kind))},
            {"percentile", request.objective.percentile},
            {"snr_threshold_db", request.objective.snr_threshold_db},
            {"nlos_only", request.settings.nlos_only}}},
          {"objective_value", value(s.objective_value)},
          {"baseline_value", value(s.baseline_value)},
          {"evaluations", s.evaluations},
          {"chosen", std::move(chosen)},
          {"round_values", std::move(rounds)}};
}

json optimize_to_json(const OptimizeRun& run, const OptimizeRequest& request) {
  json doc = solution_to_json(run.solution, request);
  json spec = json::array();
  for (const auto& d : run.specular_distance_m) spec.push_back(nullable_db(d));
  doc["specular_distance_m"] = std::move(spec);
  doc["stats"] = stats_to_json(run.coverage.enhancement.stats, request.settings.nlos_only);
  return doc;
}

CoverageRequest coverage_request_from_json(const json& body) {
  const JsonReader r(body, "");
  r.reject_unknown({"scenario", "preset", "cell_size_m", "max_order", "band", "noise_figure_db",
                    "nlos_only", "grid"});
  return {scenario_field(r), settings_from(r)};
}

OptimizeRequest optimize_request_from_json(const json& body) {
  const JsonReader r(body, "");
  r.reject_unknown({"scenario", "preset", "cell_size_m", "max_order", "band", "noise_figure_db",
                    "nlos_only", "grid", "k", "algorithm", "seed", "step_m", "objective",
                    "schedule", "panel"});
  OptimizeRequest req;
  req.scenario = scenario_field(r);
  req.settings = settings_from(r);
  req.k = static_cast<int>(r.integer_or("k", req.k));
  req.algorithm = r.string_or("algorithm", req.algorithm);
  const long seed = r.integer_or("seed", 0);
  if (seed < 0) throw ParseError("seed", "must be >= 0");
  req.seed = static_cast<std::uint64_t>(seed);
  req.step_m = r.number_or("step_m", req.step_m);
  if (r.has("objective")) {
    const JsonReader o(r.object("objective"), "objective");
    o.reject_unknown({"kind", "percentile", "snr_threshold_db"});
    if (o.has("kind")) {
      try {
        req.objective.kind = parse_objective_kind(o.string("kind"));
      } catch (const std::invalid_argument& e) {
        throw ParseError("objective.kind", e.what());
      }
    }
    req.objective.percentile = o.number_or("percentile", req.objective.percentile);
    req.objective.snr_threshold_db = o.number_or("snr_threshold_db", req.objective.snr_threshold_db);
  }
  if (r.has("schedule")) {
    const JsonReader s(r.object("schedule"), "schedule");
    s.reject_unknown({"initial_temperature", "cooling", "cooling_period", "iterations"});
    if (s.has("initial_temperature")) {
      req.schedule.initial_temperature = s.number("initial_temperature");
    }
    req.schedule.cooling = s.number_or("cooling", req.schedule.cooling);
    req.schedule.cooling_period =
        static_cast<int>(s.integer_or("cooling_period", req.schedule.cooling_period));
    req.schedule.iterations = static_cast<int>(s.integer_or("iterations", req.schedule.iterations));
  }
  if (r.has("panel")) {
    const JsonReader p(r.object("panel"), "panel");
    p.reject_unknown({"width_m", "roughness_sigma_m", "reflectivity_loss_db", "tile_size_m"});
    NirsPanel& t = req.panel_template;
    t.width_m = p.number_or("width_m", t.width_m);
    t.roughness_sigma_m = p.number_or("roughness_sigma_m", t.roughness_sigma_m);
    t.reflectivity_loss_db = p.number_or("reflectivity_loss_db", t.reflectivity_loss_db);
    t.tile_size_m = p.number_or("tile_size_m", t.tile_size_m);
  }
  return req;
}

IrsComparison compare_irs(double frequency_hz, double d1_m, double d2_m, double direct_m,
                          long n_elements, double reflection_loss_db) {
  if (!(reflection_loss_db >= 0.0) || !std::isfinite(reflection_loss_db)) {
    throw std::domain_error("reflection loss must be finite and >= 0");
  }
  IrsComparison c;
  c.frequency_hz = frequency_hz;
  c.d1_m = d1_m;
  c.d2_m = d2_m;
  c.direct_m = direct_m;
  c.n_elements = n_elements;
  c.reflection_loss_db = reflection_loss_db;
  c.product_distance_loss_db = irs_concatenated_loss_db({d1_m, d2_m, n_elements, 2.0}, frequency_hz);
  c.sum_distance_loss_db = nirs_link_loss_db(d1_m, d2_m, reflection_loss_db, frequency_hz);
  c.direct_loss_db = fspl_db(frequency_hz, direct_m);
  c.elements_to_match_direct = irs_elements_to_match_direct(d1_m, d2_m, direct_m, frequency_hz);
  return c;
}

json irs_to_json(const IrsComparison& c) {
  return {{"frequency_hz", c.frequency_hz},
          {"d1_m", c.d1_m},
          {"d2_m", c.d2_m},
          {"direct_m", c.direct_m},
          {"n_elements", c.n_elements},
          {"reflection_loss_db", round_db(c.reflection_loss_db)},
          {"product_distance_loss_db", round_db(c.product_distance_loss_db)},
          {"sum_distance_loss_db", round_db(c.sum_distance_loss_db)},
          {"direct_loss_db", round_db(c.direct_loss_db)},
          {"elements_to_match_direct", c.elements_to_match_direct}};
}

json presets_to_json() {
  json out = json::array();
  for (const auto& name : preset_names()) {
    out.push_back({{"name", name}, {"scenario", scenario_to_json(preset(name))}});
  }
  return out;
}

}  // namespace nirsplan
