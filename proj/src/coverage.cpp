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

#include "nirsplan/coverage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>

namespace nirsplan {

namespace {

constexpr double kGridTol = 1e-9;
constexpr double kSampleTol = 1e-9;

}  // namespace

GridSpec GridSpec::covering(const Rect& bounds, double cell_size_m) {
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
    throw std::invalid_argument("cell size must be > 0");
  }
  GridSpec g;
  g.origin = {bounds.x_min, bounds.y_min};
  g.cell_size_m = cell_size_m;
  g.nx = std::max(1, static_cast<int>(std::floor(bounds.width() / cell_size_m + kGridTol)));
  g.ny = std::max(1, static_cast<int>(std::floor(bounds.height() / cell_size_m + kGridTol)));
  return g;
}

void validate_grid(const GridSpec& spec, const Rect& bounds) {
  if (!(spec.cell_size_m > 0.0) || !std::isfinite(spec.cell_size_m)) {
    throw std::invalid_argument("grid cell size must be > 0");
  }
  if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("grid needs nx, ny >= 1");
  const Vec2 far = {spec.origin.x + spec.nx * spec.cell_size_m,
                    spec.origin.y + spec.ny * spec.cell_size_m};
  if (!bounds.contains(spec.origin, kGridTol) || !bounds.contains(far, kGridTol)) {
    throw std::invalid_argument("grid extends outside the floor-plan bounds");
  }
}

bool in_stats_domain(const CellResult& cell, const StatsOptions& options) {
  return cell.served && !cell.excluded && (!options.nlos_only || !cell.los);
}

VisibilityMask compute_visibility(const FloorPlan& plan, Vec2 tx, const GridSpec& spec) {
  const std::size_t n = spec.cell_count();
  VisibilityMask m{std::vector<bool>(n, false), std::vector<bool>(n, false),
                   std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 c = spec.cell_center(i);
    bool on_wall = c == tx;
    for (const auto& w : plan.walls) {
      if (point_segment_distance(c, w.p1, w.p2) <= kGridTol) on_wall = true;
    }
    m.excluded[i] = on_wall;
    m.los[i] = !on_wall && line_of_sight(plan, tx, c);
  }

  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.los[i]) {
      m.served[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const int ix = static_cast<int>(i % spec.nx);
    const int iy = static_cast<int>(i / spec.nx);
    const std::array<std::array<int, 2>, 4> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& [dx, dy] : steps) {
      const int jx = ix + dx;
      const int jy = iy + dy;
      if (jx < 0 || jy < 0 || jx >= spec.nx || jy >= spec.ny) continue;
      const std::size_t j = spec.index(jx, jy);
      if (m.served[j] || m.excluded[j]) continue;
      if (!line_of_sight(plan, spec.cell_center(i), spec.cell_center(j))) continue;
      m.served[j] = true;
      queue.push_back(j);
    }
  }
  return m;
}

CoverageGrid compute_coverage(const Scenario& scenario, const GridSpec& spec,
                              const LinkParams& params, const TraceOptions& options) {
  validate_grid(spec, scenario.plan.bounds);
  const VisibilityMask vis = compute_visibility(scenario.plan, scenario.tx.position, spec);
  CoverageGrid grid{spec, std::vector<CellResult>(spec.cell_count())};
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    CellResult& cell = grid.cells[i];
    cell.los = vis.los[i];
    cell.served = vis.served[i];
    cell.excluded = vis.excluded[i];
    if (cell.excluded) continue;
    cell.link = evaluate_link(scenario, spec.cell_center(i), params, options);
  }
  return grid;
}

double cell_enhancement_db(const LinkResult& with, const LinkResult& without) {
  if (!with.covered()) return 0.0;
  if (!without.covered()) return kEnhancementClampDb;
  return std::clamp(*without.effective_path_loss_db - *with.effective_path_loss_db, 0.0,
                    kEnhancementClampDb);
}

double top_decile_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end(), std::greater<>());
  const std::size_t m = (values.size() + 9) / 10;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += values[i];
  return sum / static_cast<double>(m);
}

CoverageStats capacity_summary(const CoverageGrid& with, const CoverageGrid& without,
                               const StatsOptions& options) {
  if (!(with.spec == without.spec) || with.cells.size() != without.cells.size()) {
    throw GridMismatchError();
  }
  CoverageStats s;
  std::vector<double> cap_with;
  std::vector<double> cap_without;
  std::size_t above = 0;
  double sum_with = 0.0;
  double sum_without = 0.0;
  for (std::size_t i = 0; i < with.cells.size(); ++i) {
    if (!in_stats_domain(without.cells[i], options)) continue;
    const double delta = cell_enhancement_db(with.cells[i].link, without.cells[i].link);
    if (delta >= 3.0) ++above;
    s.max_enhancement_db = std::max(s.max_enhancement_db, delta);
    cap_with.push_back(with.cells[i].link.capacity_bps);
    cap_without.push_back(without.cells[i].link.capacity_bps);
    sum_with += cap_with.back();
    sum_without += cap_without.back();
  }
  s.cell_count = cap_with.size();
  if (s.cell_count == 0) return s;
  const double n = static_cast<double>(s.cell_count);
  s.frac_above_3db = static_cast<double>(above) / n;
  s.mean_capacity_with_bps = sum_with / n;
  s.mean_capacity_without_bps = sum_without / n;
  s.top_decile_capacity_with_bps = top_decile_mean(std::move(cap_with));
  s.top_decile_capacity_without_bps = top_decile_mean(std::move(cap_without));
  return s;
}

EnhancementMap enhancement_map(const CoverageGrid& with, const CoverageGrid& without,
                               const StatsOptions& options) {
  EnhancementMap map;
  map.stats = capacity_summary(with, without, options);
  map.spec = with.spec;
  map.delta_db.resize(with.cells.size());
  map.in_domain.resize(with.cells.size());
  for (std::size_t i = 0; i < with.cells.size(); ++i) {
    map.delta_db[i] = cell_enhancement_db(with.cells[i].link, without.cells[i].link);
    map.in_domain[i] = in_stats_domain(without.cells[i], options);
  }
  return map;
}

Visibility classify_nlos(const FloorPlan& plan, Vec2 tx, Vec2 point) {
  return line_of_sight(plan, tx, point) ? Visibility::kLoS : Visibility::kNLoS;
}

// ---------------------------------------------------------------------------
// Interpolation

namespace {

std::vector<Sample> unique_samples(std::span<const Sample> samples) {
  std::vector<Sample> out;
  for (const auto& s : samples) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Sample& o) {
      return distance(o.point, s.point) <= kSampleTol;
    });
    if (!dup) out.push_back(s);
  }
  return out;
}

double nearest_value(const std::vector<Sample>& samples, Vec2 q) {
  double best = std::numeric_limits<double>::infinity();
  double value = samples.front().value;
  for (const auto& s : samples) {
    const double d = distance(s.point, q);
    if (d < best) {
      best = d;
      value = s.value;
    }
  }
  return value;
}

// Sorted distinct coordinates, merged within the sample tolerance.
std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > kSampleTol) out.push_back(x);
  }
  return out;
}

std::size_t locate(const std::vector<double>& axis, double x) {
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (std::abs(axis[k] - x) <= kSampleTol) return k;
  }
  return axis.size();
}

// Position of x in axis as (interval index, fraction) with snapping to nodes.
std::pair<std::size_t, double> bracket(const std::vector<double>& axis, double x) {
  const std::size_t hit = locate(axis, x);
  if (hit != axis.size()) {
    return hit + 1 < axis.size() ? std::pair{hit, 0.0} : std::pair{hit - 1, 1.0};
  }
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(axis.begin(), axis.end(), x) - axis.begin());
  k = std::clamp<std::size_t>(k, 1, axis.size() - 1) - 1;
  const double t = std::clamp((x - axis[k]) / (axis[k + 1] - axis[k]), 0.0, 1.0);
  return {k, t};
}

class Lattice {
 public:
  static std::optional<Lattice> detect(const std::vector<Sample>& samples) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : samples) {
      xs.push_back(s.point.x);
      ys.push_back(s.point.y);
    }
    Lattice l;
    l.xs_ = distinct(std::move(xs));
    l.ys_ = distinct(std::move(ys));
    if (l.xs_.size() < 2 || l.ys_.size() < 2) return std::nullopt;
    if (l.xs_.size() * l.ys_.size() != samples.size()) return std::nullopt;
    l.values_.assign(samples.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& s : samples) {
      const std::size_t i = locate(l.xs_, s.point.x);
      const std::size_t j = locate(l.ys_, s.point.y);
      l.values_[j * l.xs_.size() + i] = s.value;
    }
    for (double v : l.values_) {
      if (std::isnan(v)) return std::nullopt;
    }
    return l;
  }

  std::optional<double> at(Vec2 q) const {
    if (q.x < xs_.front() - kSampleTol || q.x > xs_.back() + kSampleTol ||
        q.y < ys_.front() - kSampleTol || q.y > ys_.back() + kSampleTol) {
      return std::nullopt;
    }
    const auto [i, t] = bracket(xs_, q.x);
    const auto [j, u] = bracket(ys_, q.y);
    const std::size_t w = xs_.size();
    const double v00 = values_[j * w + i];
    const double v10 = values_[j * w + i + 1];
    const double v01 = values_[(j + 1) * w + i];
    const double v11 = values_[(j + 1) * w + i + 1];
    const double v = (1 - t) * (1 - u) * v00 + t * (1 - u) * v10 + (1 - t) * u * v01 +
                     t * u * v11;
    return std::clamp(v, std::min({v00, v10, v01, v11}), std::max({v00, v10, v01, v11}));
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> values_;
};

// Samples on one line, parametrized by arc position along it.
class LineSamples {
 public:
  static std::optional<LineSamples> detect(const std::vector<Sample>& samples) {
    const Vec2 p0 = samples.front().point;
    Vec2 far = p0;
    for (const auto& s : samples) {
      if (distance(p0, s.point) > distance(p0, far)) far = s.point;
    }
    LineSamples l;
    l.origin_ = p0;
    l.dir_ = normalized(far - p0);
    const double scale = std::max(1.0, distance(p0, far));
    for (const auto& s : samples) {
      if (std::abs(cross(l.dir_, s.point - p0)) > kSampleTol * scale) return std::nullopt;
      l.nodes_.emplace_back(dot(s.point - p0, l.dir_), s.value);
    }
    std::sort(l.nodes_.begin(), l.nodes_.end());
    l.scale_ = scale;
    return l;
  }

  std::optional<double> at(Vec2 q) const {
    const Vec2 d = q - origin_;
    if (std::abs(cross(dir_, d)) > kSampleTol * scale_) return std::nullopt;
    const double s = dot(d, dir_);
    if (s < nodes_.front().first - kSampleTol || s > nodes_.back().first + kSampleTol) {
      return std::nullopt;
    }
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
      const auto& [s0, v0] = nodes_[k];
      const auto& [s1, v1] = nodes_[k + 1];
      if (std::abs(s - s0) <= kSampleTol) return v0;
      if (std::abs(s - s1) <= kSampleTol) return v1;
      if (s > s0 && s < s1) {
        const double t = (s - s0) / (s1 - s0);
        return std::clamp((1 - t) * v0 + t * v1, std::min(v0, v1), std::max(v0, v1));
      }
    }
    return nodes_.front().second;
  }

 private:
  Vec2 origin_;
  Vec2 dir_;
  double scale_ = 1.0;
  std::vector<std::pair<double, double>> nodes_;
};

struct Triangle {
  std::array<std::size_t, 3> v;
  Vec2 center;
  double radius2;
};

Triangle make_triangle(const std::vector<Vec2>& pts, std::size_t a, std::size_t b,
                       std::size_t c) {
  const Vec2 A = pts[a];
  const Vec2 B = pts[b];
  const Vec2 C = pts[c];
  const double d = 2.0 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
  Triangle t{{a, b, c}, {}, std::numeric_limits<double>::infinity()};
  if (d == 0.0) return t;
  const double a2 = dot(A, A);
  const double b2 = dot(B, B);
  const double c2 = dot(C, C);
  t.center = {(a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d,
              (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d};
  const Vec2 r = A - t.center;
  t.radius2 = dot(r, r);
  return t;
}

// Bowyer-Watson triangulation over the samples, with a bounding super
// triangle removed at the end.
std::vector<Triangle> delaunay(const std::vector<Sample>& samples) {
  std::vector<Vec2> pts;
  Rect box{samples.front().point.x, samples.front().point.y, samples.front().point.x,
           samples.front().point.y};
  for (const auto& s : samples) {
    pts.push_back(s.point);
    box.x_min = std::min(box.x_min, s.point.x);
    box.y_min = std::min(box.y_min, s.point.y);
    box.x_max = std::max(box.x_max, s.point.x);
    box.y_max = std::max(box.y_max, s.point.y);
  }
  const std::size_t n = pts.size();
  const double span = std::max({box.width(), box.height(), 1.0});
  const Vec2 mid = {(box.x_min + box.x_max) / 2, (box.y_min + box.y_max) / 2};
  pts.push_back({mid.x - 1e4 * span, mid.y - 1e4 * span});
  pts.push_back({mid.x + 1e4 * span, mid.y - 1e4 * span});
  pts.push_back({mid.x, mid.y + 1e4 * span});

  std::vector<Triangle> tris{make_triangle(pts, n, n + 1, n + 2)};
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<std::array<std::size_t, 2>> edges;
    std::vector<Triangle> keep;
    for (const auto& t : tris) {
      const Vec2 r = pts[p] - t.center;
      if (dot(r, r) <= t.radius2 * (1.0 + 1e-12)) {
        for (int e = 0; e < 3; ++e) {
          std::size_t a = t.v[e];
          std::size_t b = t.v[(e + 1) % 3];
          if (a > b) std::swap(a, b);
          edges.push_back({a, b});
        }
      } else {
        keep.push_back(t);
      }
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const bool shared = (k > 0 && edges[k] == edges[k - 1]) ||
                          (k + 1 < edges.size() && edges[k] == edges[k + 1]);
      if (!shared) keep.push_back(make_triangle(pts, edges[k][0], edges[k][1], p));
    }
    tris = std::move(keep);
  }
  std::erase_if(tris, [n](const Triangle& t) {
    return t.v[0] >= n || t.v[1] >= n || t.v[2] >= n;
  });
  return tris;
}

std::optional<double> barycentric(const std::vector<Sample>& samples,
                                  const std::vector<Triangle>& tris, Vec2 q) {
  for (const auto& t : tris) {
    const Vec2 a = samples[t.v[0]].point;
    const Vec2 b = samples[t.v[1]].point;
    const Vec2 c = samples[t.v[2]].point;
    const double det = cross(b - a, c - a);
    if (det == 0.0) continue;
    const double w1 = cross(q - a, c - a) / det;
    const double l1 = cross(b - a, q - a) / det;
    const double l0 = 1.0 - w1 - l1;
    constexpr double kEdgeTol = -1e-12;
    if (l0 < kEdgeTol || w1 < kEdgeTol || l1 < kEdgeTol) continue;
    const double va = samples[t.v[0]].value;
    const double vb = samples[t.v[1]].value;
    const double vc = samples[t.v[2]].value;
    return std::clamp(l0 * va + w1 * vb + l1 * vc, std::min({va, vb, vc}),
                      std::max({va, vb, vc}));
  }
  return std::nullopt;
}

}  // namespace

std::vector<double> bilinear_interpolate(std::span<const Sample> samples, const GridSpec& spec) {
  if (samples.empty()) throw std::invalid_argument("interpolation needs at least one sample");
  for (const auto& s : samples) {
    if (!std::isfinite(s.point.x) || !std::isfinite(s.point.y) || !std::isfinite(s.value)) {
      throw std::invalid_argument("samples must be finite");
    }
  }
  const std::vector<Sample> uniq = unique_samples(samples);
  std::vector<double> out(spec.cell_count());

  std::optional<Lattice> lattice;
  std::optional<LineSamples> line;
  std::vector<Triangle> tris;
  if (uniq.size() >= 2) {
    lattice = Lattice::detect(uniq);
    if (!lattice) line = LineSamples::detect(uniq);
    if (!lattice && !line) tris = delaunay(uniq);
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec2 q = spec.cell_center(i);
    std::optional<double> v;
    for (const auto& s : uniq) {
      if (distance(s.point, q) <= kSampleTol) {
        v = s.value;
        break;
      }
    }
    if (!v && lattice) v = lattice->at(q);
    if (!v && line) v = line->at(q);
    if (!v && !tris.empty()) v = barycentric(uniq, tris, q);
    out[i] = v ? *v : nearest_value(uniq, q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direction-scan sounding

DssResult dss_from_paths(std::span<const PropPath> paths, double frequency_hz,
                         double tx_power_dbm, const AntennaPattern& rx_pattern,
                         double step_deg) {
  if (!(step_deg > 0.0) || !std::isfinite(step_deg)) {
    throw std::invalid_argument("scan step must be > 0");
  }
  const double count = 360.0 / step_deg;
  const long n = std::lround(count);
  if (n < 1 || std::abs(count - static_cast<double>(n)) > 1e-9) {
    throw std::invalid_argument("360 must be divisible by the scan step");
  }

  std::vector<double> power_mw;
  std::vector<double> arrival_deg;
  for (const auto& p : paths) {
    power_mw.push_back(std::pow(10.0, (tx_power_dbm - path_total_loss_db(p, frequency_hz)) / 10.0));
    double h = heading(p.arrival_direction()) * 180.0 / kPi;
    if (h < 0.0) h += 360.0;
    arrival_deg.push_back(h);
  }

  auto gain_lin = [&](double arrival, double az) {
    return std::pow(10.0, antenna_gain_dbi(rx_pattern, (arrival - az) * kPi / 180.0) / 10.0);
  };

  DssResult r;
  std::vector<double> beam_sum(static_cast<std::size_t>(n), 0.0);
  for (long d = 0; d < n; ++d) {
    const double az = static_cast<double>(d) * step_deg;
    for (std::size_t i = 0; i < power_mw.size(); ++i) {
      beam_sum[d] += power_mw[i] * gain_lin(arrival_deg[i], az);
    }
    DssDirection dir{az, std::nullopt};
    if (beam_sum[d] > 0.0) dir.power_dbm = 10.0 * std::log10(beam_sum[d]);
    r.directions.push_back(dir);
  }

  // Max-combining: every direction that is some path's best-aligned beam
  // contributes its measured power once.
  std::vector<bool> best(static_cast<std::size_t>(n), false);
  double truth = 0.0;
  for (std::size_t i = 0; i < power_mw.size(); ++i) {
    const double x = arrival_deg[i] / step_deg;
    long k = static_cast<long>(std::floor(x));
    if (x - static_cast<double>(k) > 0.5) ++k;
    best[static_cast<std::size_t>(k % n)] = true;
    truth += power_mw[i];
  }
  const double peak_lin = std::pow(10.0, rx_pattern.peak_gain_dbi / 10.0);
  double synth = 0.0;
  for (long d = 0; d < n; ++d) {
    if (best[d]) synth += beam_sum[d] / peak_lin;
  }
  if (synth > 0.0) r.synthesized_omni_dbm = 10.0 * std::log10(synth);
  if (truth > 0.0) r.true_omni_dbm = 10.0 * std::log10(truth);
  return r;
}

DssResult dss_emulate(const Scenario& scenario, Vec2 rx, const AntennaPattern& rx_pattern,
                      double step_deg, const TraceOptions& options) {
  TraceOptions omni = options;
  omni.rx_antenna.reset();
  omni.rx_gain_dbi = 0.0;
  const auto paths = trace_paths(scenario.plan, scenario.tx, rx, scenario.band.center_hz, omni);
  return dss_from_paths(paths, scenario.band.center_hz, scenario.tx.tx_power_dbm, rx_pattern,
                        step_deg);
}

}  // namespace nirsplan
