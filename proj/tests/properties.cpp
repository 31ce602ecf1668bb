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

#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nirsplan/coverage.hpp"
#include "nirsplan/linkbudget.hpp"
#include "nirsplan/propagation.hpp"
#include "support.hpp"

namespace nirsplan::testing {
namespace {

using std::numbers::pi;

class Recorder {
 public:
  explicit Recorder(std::string name) { report_.name = std::move(name); }

  void next_case() { ++report_.cases; }
  void fail(const std::string& what) {
    if (report_.failures++ == 0) report_.first_failure = what;
  }
  PropertyReport done() { return report_; }

 private:
  PropertyReport report_;
};

std::string describe(int index, const char* what, double got, double want) {
  std::ostringstream os;
  os.precision(12);
  os << "case " << index << ": " << what << " got " << got << " want " << want;
  return os.str();
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool clear_of_walls(const FloorPlan& plan, Vec2 p, double margin) {
  for (const auto& w : plan.walls)
    if (point_segment_distance(p, w.p1, w.p2) < margin) return false;
  return true;
}

Vec2 free_point(std::mt19937_64& rng, const FloorPlan& plan) {
  for (;;) {
    Vec2 p{uniform(rng, plan.bounds.x_min, plan.bounds.x_max),
           uniform(rng, plan.bounds.y_min, plan.bounds.y_max)};
    if (clear_of_walls(plan, p, 0.3)) return p;
  }
}

// Rectangular room with up to two interior walls of random material.
FloorPlan random_room(std::mt19937_64& rng) {
  const double w = uniform(rng, 6.0, 12.0);
  const double h = uniform(rng, 5.0, 10.0);
  FloorPlan plan = open_box();
  plan.bounds = {0, 0, w, h};
  plan.walls = {{0, {0, 0}, {w, 0}, "plasterboard"},
                {1, {w, 0}, {w, h}, "plasterboard"},
                {2, {w, h}, {0, h}, "plasterboard"},
                {3, {0, h}, {0, 0}, "plasterboard"}};
  const int interior = uniform_int(rng, 0, 2);
  for (int i = 0; i < interior; ++i) {
    Vec2 a, b;
    do {
      a = {uniform(rng, 0.5, w - 0.5), uniform(rng, 0.5, h - 0.5)};
      b = {uniform(rng, 0.5, w - 0.5), uniform(rng, 0.5, h - 0.5)};
    } while (distance(a, b) < 1.0);
    plan.walls.push_back({4 + i, a, b, uniform_int(rng, 0, 1) ? "metal" : "plasterboard"});
  }
  return plan;
}

NirsPanel random_panel(std::mt19937_64& rng, const FloorPlan& plan) {
  const auto& wall = plan.walls[uniform_int(rng, 0, static_cast<int>(plan.walls.size()) - 1)];
  NirsPanel panel;
  panel.wall_id = wall.id;
  panel.width_m = uniform(rng, 0.2, std::min(1.5, wall.length()));
  panel.offset_m = uniform(rng, 0.0, wall.length() - panel.width_m);
  panel.roughness_sigma_m = uniform(rng, 0.0, 0.6e-3);
  panel.reflectivity_loss_db = uniform(rng, 0.0, 3.0);
  return panel;
}

double incidence_at(Vec2 vertex, Vec2 toward, const WallSegment& wall) {
  const Vec2 n = perp(wall.direction());
  return std::acos(std::min(1.0, std::abs(dot(normalized(toward - vertex), n))));
}

}  // namespace

PropertyReport roughness_bounds(std::uint64_t seed) {
  Recorder rec("roughness factor in (0,1], decreasing in sigma, increasing in angle");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    const double lambda = uniform(rng, 0.5e-3, 2e-3);
    const double sigma = uniform(rng, 0.0, 1e-3);
    const double dsigma = uniform(rng, 1e-7, 1e-4);
    const double theta = uniform(rng, 0.0, pi / 2 - 0.02);
    const double dtheta = uniform(rng, 1e-6, 0.01);
    const double exit = uniform(rng, 0.0, pi / 2 - 0.02);
    const double rho = rayleigh_roughness_factor(sigma, theta, lambda);
    if (!(rho > 0.0 && rho <= 1.0)) rec.fail(describe(i, "rho", rho, 0.5));
    const double rough = rayleigh_roughness_factor(sigma + dsigma, theta, lambda);
    if (rough > rho) rec.fail(describe(i, "rho(sigma + d)", rough, rho));
    const double steep = rayleigh_roughness_factor(sigma, theta + dtheta, lambda);
    if (steep < rho) rec.fail(describe(i, "rho(theta + d)", steep, rho));
    const double ab = bistatic_roughness_factor(sigma, theta, exit, lambda);
    const double ba = bistatic_roughness_factor(sigma, exit, theta, lambda);
    if (ab != ba) rec.fail(describe(i, "bistatic swap", ab, ba));
    if (std::abs(bistatic_roughness_factor(sigma, theta, theta, lambda) - rho) > 1e-15)
      rec.fail(describe(i, "bistatic diagonal", ab, rho));
  }
  return rec.done();
}

PropertyReport sum_distance_spreading(std::uint64_t seed) {
  Recorder rec("panel spreading loss depends on d1 + d2 only");
  std::mt19937_64 rng(seed);
  FloorPlan plan = open_box();
  plan.bounds = {-50, -50, 50, 50};
  plan.walls = {{0, {-20, 0}, {20, 0}, "metal"}};
  NirsPanel panel;
  panel.wall_id = 0;
  panel.offset_m = 20.0 - 0.05;
  panel.width_m = 0.1;
  plan.panels = {panel};
  TraceOptions options;
  options.max_order = 0;
  const double f = 313.5e9;
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    const double total = uniform(rng, 1.0, 40.0);
    const double d1 = uniform(rng, 0.05 * total, 0.95 * total);
    const double d2 = total - d1;
    const double a = uniform(rng, 0.2, pi - 0.2);
    const double b = uniform(rng, 0.2, pi - 0.2);
    Transceiver tx{{d1 * std::cos(a), d1 * std::sin(a)}, 0.0, AntennaPattern::tx_default(), 13.0};
    const Vec2 rx{d2 * std::cos(b), d2 * std::sin(b)};
    const auto paths = trace_paths(plan, tx, rx, f, options);
    const auto it = std::find_if(paths.begin(), paths.end(),
                                 [](const PropPath& p) { return p.kind == PathKind::kNirsScatter; });
    if (it == paths.end()) {
      rec.fail(describe(i, "scatter path missing", 0, 1));
      continue;
    }
    if (std::abs(it->total_length_m - total) > 1e-9)
      rec.fail(describe(i, "length", it->total_length_m, total));
    const double want = fspl_db(f, total);
    if (std::abs(it->spreading_loss_db - want) > 1e-9)
      rec.fail(describe(i, "spreading", it->spreading_loss_db, want));
  }
  return rec.done();
}

PropertyReport image_method_angles(std::uint64_t seed) {
  Recorder rec("specular vertices: equal angles, length equals image distance");
  std::mt19937_64 rng(seed);
  const double f = 313.5e9;
  int checked_paths = 0;
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    const FloorPlan plan = random_room(rng);
    const Transceiver tx{free_point(rng, plan), 0.0, AntennaPattern::tx_default(), 13.0};
    const Vec2 rx = free_point(rng, plan);
    for (const auto& path : trace_paths(plan, tx, rx, f)) {
      if (path.kind != PathKind::kSpecular) continue;
      ++checked_paths;
      Vec2 image = tx.position;
      for (std::size_t k = 0; k < path.wall_ids.size(); ++k) {
        const WallSegment& wall = *plan.find_wall(path.wall_ids[k]);
        const Vec2 v = path.vertices[k + 1];
        const double in = incidence_at(v, path.vertices[k], wall);
        const double out = incidence_at(v, path.vertices[k + 2], wall);
        if (std::abs(in - out) > 1e-9) rec.fail(describe(i, "reflection angle", out, in));
        image = mirror_across_line(image, wall.p1, wall.p2);
      }
      const double want = distance(image, rx);
      if (std::abs(path.total_length_m - want) > 1e-9)
        rec.fail(describe(i, "path length", path.total_length_m, want));
    }
  }
  if (checked_paths < kPropertyCases) rec.fail(describe(0, "specular paths checked", checked_paths, kPropertyCases));
  return rec.done();
}

PropertyReport panel_addition_monotone(std::uint64_t seed) {
  Recorder rec("adding a panel keeps every path and never lowers received power");
  std::mt19937_64 rng(seed);
  const double f = 313.5e9;
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    FloorPlan plan = random_room(rng);
    const Transceiver tx{free_point(rng, plan), uniform(rng, -pi, pi),
                         AntennaPattern::tx_default(), 13.0};
    const Vec2 rx = free_point(rng, plan);
    const auto before = trace_paths(plan, tx, rx, f);
    plan.panels.push_back(random_panel(rng, plan));
    const auto after = trace_paths(plan, tx, rx, f);
    std::size_t j = 0;
    for (const auto& p : before) {
      while (j < after.size() && after[j].vertices != p.vertices) ++j;
      if (j == after.size() || after[j].interaction_loss_db != p.interaction_loss_db) {
        rec.fail(describe(i, "path lost after adding panel", static_cast<double>(after.size()),
                          static_cast<double>(before.size())));
        break;
      }
      ++j;
    }
    const double g0 = linear_path_gain_sum(before, f);
    const double g1 = linear_path_gain_sum(after, f);
    if (g1 < g0) rec.fail(describe(i, "linear gain", g1, g0));
  }
  return rec.done();
}

PropertyReport enhancement_non_negative(std::uint64_t seed) {
  Recorder rec("enhancement maps lie in [0, 60] dB cell by cell");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    FloorPlan plan = random_room(rng);
    Scenario without = scenario_of(plan, free_point(rng, plan));
    without.tx.boresight_rad = uniform(rng, -pi, pi);
    Scenario with = without;
    const int panels = uniform_int(rng, 1, 2);
    for (int k = 0; k < panels; ++k) with.plan.panels.push_back(random_panel(rng, with.plan));
    const GridSpec spec = GridSpec::covering(plan.bounds, 1.0);
    const LinkParams params = LinkParams::from_scenario(without);
    TraceOptions trace;
    trace.max_order = 1;
    const auto g0 = compute_coverage(without, spec, params, trace);
    const auto g1 = compute_coverage(with, spec, params, trace);
    const auto map = enhancement_map(g1, g0, {uniform_int(rng, 0, 1) == 1});
    for (std::size_t c = 0; c < map.delta_db.size(); ++c) {
      const double d = map.delta_db[c];
      if (!(d >= 0.0 && d <= kEnhancementClampDb)) rec.fail(describe(i, "delta", d, 0.0));
      const auto& p0 = g0.cells[c].link.received_power_dbm;
      const auto& p1 = g1.cells[c].link.received_power_dbm;
      if (p0 && (!p1 || *p1 < *p0)) rec.fail(describe(i, "received power", p1.value_or(-1e9), *p0));
    }
  }
  return rec.done();
}

PropertyReport interpolation_exact(std::uint64_t seed) {
  Recorder rec("interpolation reproduces samples and is idempotent on grid nodes");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    GridSpec spec;
    spec.origin = {uniform(rng, -5, 5), uniform(rng, -5, 5)};
    spec.cell_size_m = uniform(rng, 0.1, 1.0);
    spec.nx = uniform_int(rng, 2, 8);
    spec.ny = uniform_int(rng, 2, 8);
    std::vector<std::size_t> cells(spec.cell_count());
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = c;
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(uniform_int(rng, 1, static_cast<int>(cells.size())));
    std::vector<Sample> samples;
    for (std::size_t c : cells) samples.push_back({spec.cell_center(c), uniform(rng, -120, -40)});
    const auto out = bilinear_interpolate(samples, spec);
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (std::abs(out[cells[k]] - samples[k].value) > 1e-9)
        rec.fail(describe(i, "value at sample", out[cells[k]], samples[k].value));
    std::vector<Sample> nodes;
    for (std::size_t c = 0; c < spec.cell_count(); ++c) nodes.push_back({spec.cell_center(c), out[c]});
    const auto again = bilinear_interpolate(nodes, spec);
    for (std::size_t c = 0; c < spec.cell_count(); ++c)
      if (std::abs(again[c] - out[c]) > 1e-9) rec.fail(describe(i, "re-interpolated", again[c], out[c]));
  }
  return rec.done();
}

PropertyReport path_reciprocity(std::uint64_t seed) {
  Recorder rec("swapping Tx and Rx preserves path lengths and interaction losses");
  std::mt19937_64 rng(seed);
  const double f = 313.5e9;
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    FloorPlan plan = random_room(rng);
    const int panels = uniform_int(rng, 0, 2);
    for (int k = 0; k < panels; ++k) plan.panels.push_back(random_panel(rng, plan));
    const Vec2 a = free_point(rng, plan);
    const Vec2 b = free_point(rng, plan);
    const AntennaPattern ant = AntennaPattern::tx_default();
    const auto forward = trace_paths(plan, {a, 0.0, ant, 13.0}, b, f);
    auto reverse = trace_paths(plan, {b, 0.0, ant, 13.0}, a, f);
    if (forward.size() != reverse.size()) {
      rec.fail(describe(i, "path count", static_cast<double>(reverse.size()),
                        static_cast<double>(forward.size())));
      continue;
    }
    for (const auto& p : forward) {
      const auto match = std::find_if(reverse.begin(), reverse.end(), [&](const PropPath& q) {
        return std::abs(q.total_length_m - p.total_length_m) <= 1e-9 &&
               std::abs(q.interaction_loss_db - p.interaction_loss_db) <= 1e-9;
      });
      if (match == reverse.end()) {
        rec.fail(describe(i, "unmatched path loss", p.interaction_loss_db, p.total_length_m));
        break;
      }
      reverse.erase(match);
    }
  }
  return rec.done();
}

PropertyReport capacity_monotone(std::uint64_t seed) {
  Recorder rec("capacity is non-decreasing in SNR and bandwidth");
  std::mt19937_64 rng(seed);
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    const double snr = uniform(rng, -30, 60);
    const double bw = uniform(rng, 1e8, 5e10);
    const double c = shannon_capacity_bps(snr, bw);
    const double more_snr = shannon_capacity_bps(snr + uniform(rng, 1e-6, 5), bw);
    const double more_bw = shannon_capacity_bps(snr, bw * uniform(rng, 1.0, 2.0));
    if (!(c >= 0.0) || more_snr < c || more_bw < c) rec.fail(describe(i, "capacity", c, more_snr));
  }
  return rec.done();
}

PropertyReport irs_element_doubling(std::uint64_t seed) {
  Recorder rec("doubling IRS elements lowers the concatenated loss by 20 log10 2");
  std::mt19937_64 rng(seed);
  const double want = 20.0 * std::log10(2.0);
  for (int i = 0; i < kPropertyCases; ++i) {
    rec.next_case();
    IrsBaseline base{uniform(rng, 0.5, 20), uniform(rng, 0.5, 20), uniform_int(rng, 1, 100000), 2.0};
    const double f = uniform(rng, 100e9, 1e12);
    IrsBaseline doubled = base;
    doubled.n_elements *= 2;
    const double got = irs_concatenated_loss_db(base, f) - irs_concatenated_loss_db(doubled, f);
    if (std::abs(got - want) > 1e-9) rec.fail(describe(i, "loss drop", got, want));
  }
  return rec.done();
}

std::vector<PropertyReport> run_all_properties(std::uint64_t seed) {
  return {roughness_bounds(seed),        sum_distance_spreading(seed + 1),
          image_method_angles(seed + 2), panel_addition_monotone(seed + 3),
          enhancement_non_negative(seed + 4), interpolation_exact(seed + 5),
          path_reciprocity(seed + 6),    capacity_monotone(seed + 7),
          irs_element_doubling(seed + 8)};
}

}  // namespace nirsplan::testing
