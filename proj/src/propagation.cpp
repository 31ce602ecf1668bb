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

#include "nirsplan/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nirsplan {

namespace {

double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Incidence angle measured from the surface normal, in [0, pi/2].
double incidence_angle(Vec2 travel_dir, const WallSegment& wall) {
  const Vec2 n = perp(wall.direction());
  const double c = std::abs(dot(normalized(travel_dir), n));
  return std::acos(std::min(1.0, c));
}

bool grazing(double incidence_rad) {
  return incidence_rad >= kPi / 2.0 - kGrazingToleranceRad;
}

bool blocked(const std::vector<const WallSegment*>& walls, Vec2 a, Vec2 b, int skip_a = -1,
             int skip_b = -1) {
  for (const WallSegment* w : walls) {
    if (w->id == skip_a || w->id == skip_b) continue;
    if (segments_intersect(a, b, w->p1, w->p2)) return true;
  }
  return false;
}

// Specular loss of one wall bounce: affine reflection loss plus the
// roughness attenuation of the coherent component.
double wall_bounce_loss_db(const Material& material, double incidence_rad,
                           double wavelength_m) {
  const double rho =
      rayleigh_roughness_factor(material.roughness_sigma_m, incidence_rad, wavelength_m);
  return reflection_loss_db(material, incidence_rad) - 20.0 * std::log10(rho);
}

class PathTracer {
 public:
  PathTracer(const FloorPlan& plan, const Transceiver& tx, Vec2 rx, double frequency_hz,
             const TraceOptions& options)
      : plan_(plan),
        tx_(tx),
        rx_(rx),
        frequency_hz_(frequency_hz),
        wavelength_m_(kSpeedOfLight / frequency_hz),
        options_(options) {
    walls_.reserve(plan.walls.size());
    for (const auto& w : plan.walls) walls_.push_back(&w);
    std::sort(walls_.begin(), walls_.end(),
              [](const WallSegment* a, const WallSegment* b) { return a->id < b->id; });
  }

  std::vector<PropPath> run() {
    if (!blocked(walls_, tx_.position, rx_)) {
      emit(PathKind::kLoS, {tx_.position, rx_}, 0.0, {});
    }
    for (int order = 1; order <= options_.max_order; ++order) {
      std::vector<std::size_t> seq;
      enumerate_sequences(order, seq);
    }
    for (std::size_t i = 0; i < plan_.panels.size(); ++i) {
      trace_panel(static_cast<int>(i));
    }
    return std::move(paths_);
  }

  std::vector<PropPath> run_panel(int panel_id) {
    trace_panel(panel_id);
    return std::move(paths_);
  }

 private:
  void emit(PathKind kind, std::vector<Vec2> vertices, double interaction_loss_db,
            std::vector<int> wall_ids, int panel_id = -1, int tile_index = -1) {
    PropPath p;
    p.kind = kind;
    p.wall_ids = std::move(wall_ids);
    p.panel_id = panel_id;
    p.tile_index = tile_index;
    p.vertices = std::move(vertices);
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
      p.total_length_m += distance(p.vertices[i], p.vertices[i + 1]);
    }
    p.spreading_loss_db = fspl_db(frequency_hz_, p.total_length_m);
    p.interaction_loss_db = interaction_loss_db;
    p.tx_gain_dbi = antenna_gain_dbi(
        tx_.antenna, heading(p.departure_direction()) - tx_.boresight_rad);
    if (options_.rx_antenna) {
      p.rx_gain_dbi =
          antenna_gain_dbi(options_.rx_antenna->pattern,
                           heading(p.arrival_direction()) - options_.rx_antenna->boresight_rad);
    } else {
      p.rx_gain_dbi = options_.rx_gain_dbi;
    }
    paths_.push_back(std::move(p));
  }

  void enumerate_sequences(int order, std::vector<std::size_t>& seq) {
    if (static_cast<int>(seq.size()) == order) {
      try_specular(seq);
      return;
    }
    for (std::size_t w = 0; w < walls_.size(); ++w) {
      if (!seq.empty() && seq.back() == w) continue;
      seq.push_back(w);
      enumerate_sequences(order, seq);
      seq.pop_back();
    }
  }

  void try_specular(const std::vector<std::size_t>& seq) {
    const std::size_t k = seq.size();
    std::vector<Vec2> images(k + 1);
    images[0] = tx_.position;
    for (std::size_t j = 0; j < k; ++j) {
      const WallSegment& w = *walls_[seq[j]];
      images[j + 1] = mirror_across_line(images[j], w.p1, w.p2);
    }
    std::vector<Vec2> pts(k + 2);
    pts[0] = tx_.position;
    pts[k + 1] = rx_;
    Vec2 target = rx_;
    for (std::size_t j = k; j-- > 0;) {
      const WallSegment& w = *walls_[seq[j]];
      auto hit = segment_crossing(images[j + 1], target, w.p1, w.p2);
      if (!hit) return;
      pts[j + 1] = *hit;
      target = *hit;
    }
    double loss = 0.0;
    std::vector<int> ids(k);
    for (std::size_t j = 0; j <= k; ++j) {
      const int skip_a = j > 0 ? walls_[seq[j - 1]]->id : -1;
      const int skip_b = j < k ? walls_[seq[j]]->id : -1;
      if (distance(pts[j], pts[j + 1]) <= 0.0) return;
      if (blocked(walls_, pts[j], pts[j + 1], skip_a, skip_b)) return;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const WallSegment& w = *walls_[seq[j]];
      const double theta = incidence_angle(pts[j + 1] - pts[j], w);
      if (grazing(theta)) return;
      loss += wall_bounce_loss_db(plan_.material_of(w), theta, wavelength_m_);
      ids[j] = w.id;
    }
    emit(PathKind::kSpecular, std::move(pts), loss, std::move(ids));
  }

  // Tile index holding the mirror point of `source` towards the receiver,
  // or -1 when the mirror point is off the panel.
  int mirror_tile(const WallSegment& host, const NirsPanel& panel, Vec2 source) const {
    const Vec2 image = mirror_across_line(source, host.p1, host.p2);
    auto hit = segment_crossing(image, rx_, host.p1, host.p2);
    if (!hit) return -1;
    const double s = dot(*hit - host.p1, host.direction()) - panel.offset_m;
    if (s < 0.0 || s > panel.width_m) return -1;
    const int n = panel.tile_count();
    return std::min(n - 1, static_cast<int>(std::floor(s / panel.tile_length())));
  }

  void trace_panel(int panel_id) {
    const NirsPanel& panel = plan_.panels[panel_id];
    const WallSegment* host = plan_.find_wall(panel.wall_id);
    if (host == nullptr) return;
    const int tx_side = side_of_line(tx_.position, host->p1, host->p2);
    const int rx_side = side_of_line(rx_, host->p1, host->p2);
    if (tx_side == 0 || tx_side != rx_side) return;
    Vec2 normal = perp(host->direction());
    if (tx_side < 0) normal = -normal;

    const int direct_mirror = mirror_tile(*host, panel, tx_.position);
    for (int t = 0; t < panel.tile_count(); ++t) {
      const Vec2 c = tile_center(*host, panel, t);
      if (blocked(walls_, c, rx_, host->id)) continue;
      if (!blocked(walls_, tx_.position, c, host->id)) {
        auto loss = tile_scatter_loss_db(panel, normal, c - tx_.position, rx_ - c,
                                         t == direct_mirror, wavelength_m_, options_.scatter);
        if (loss) {
          emit(PathKind::kNirsScatter, {tx_.position, c, rx_}, *loss, {}, panel_id, t);
        }
      }
      if (options_.panel_after_wall) trace_wall_then_tile(*host, panel, panel_id, t, c, normal);
    }
  }

  void trace_wall_then_tile(const WallSegment& host, const NirsPanel& panel, int panel_id,
                            int tile, Vec2 c, Vec2 normal) {
    for (const WallSegment* w : walls_) {
      if (w->id == host.id) continue;
      const Vec2 image = mirror_across_line(tx_.position, w->p1, w->p2);
      auto hit = segment_crossing(image, c, w->p1, w->p2);
      if (!hit) continue;
      const Vec2 p = *hit;
      if (blocked(walls_, tx_.position, p, w->id)) continue;
      if (blocked(walls_, p, c, w->id, host.id)) continue;
      if (side_of_line(p, host.p1, host.p2) != side_of_line(rx_, host.p1, host.p2)) continue;
      const double theta = incidence_angle(p - tx_.position, *w);
      if (grazing(theta)) continue;
      auto tile_loss =
          tile_scatter_loss_db(panel, normal, c - p, rx_ - c, tile == mirror_tile(host, panel, p),
                               wavelength_m_, options_.scatter);
      if (!tile_loss) continue;
      const double loss =
          wall_bounce_loss_db(plan_.material_of(*w), theta, wavelength_m_) + *tile_loss;
      emit(PathKind::kNirsScatter, {tx_.position, p, c, rx_}, loss, {w->id}, panel_id, tile);
    }
  }

  const FloorPlan& plan_;
  const Transceiver& tx_;
  Vec2 rx_;
  double frequency_hz_;
  double wavelength_m_;
  const TraceOptions& options_;
  std::vector<const WallSegment*> walls_;
  std::vector<PropPath> paths_;
};

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::kLoS:
      return "los";
    case PathKind::kSpecular:
      return "specular";
    case PathKind::kNirsScatter:
      return "nirs_scatter";
  }
  return "unknown";
}

Vec2 PropPath::departure_direction() const {
  return normalized(vertices[1] - vertices[0]);
}

Vec2 PropPath::arrival_direction() const {
  const std::size_t n = vertices.size();
  return normalized(vertices[n - 2] - vertices[n - 1]);
}

double fspl_db(double frequency_hz, double distance_m) {
  if (!(frequency_hz > 0.0) || !(distance_m > 0.0)) {
    throw std::domain_error("fspl requires positive frequency and distance");
  }
  return 20.0 * std::log10(4.0 * kPi * distance_m * frequency_hz / kSpeedOfLight);
}

double antenna_gain_dbi(const AntennaPattern& pattern, double off_boresight_rad) {
  const double theta_deg = std::abs(rad_to_deg(wrap_angle(off_boresight_rad)));
  const double ratio = theta_deg / pattern.hpbw_deg;
  return std::max(pattern.sidelobe_floor_dbi, pattern.peak_gain_dbi - 12.0 * ratio * ratio);
}

double reflection_loss_db(const Material& material, double incidence_rad) {
  if (!(incidence_rad >= 0.0 && incidence_rad < kPi / 2.0)) {
    throw std::domain_error("incidence must lie in [0, pi/2)");
  }
  return std::max(0.0, material.reflection_loss_at_normal_db +
                           material.loss_angle_slope_db_per_rad * incidence_rad);
}

double rayleigh_roughness_factor(double sigma_m, double incidence_rad, double wavelength_m) {
  if (!(sigma_m >= 0.0) || !std::isfinite(sigma_m)) {
    throw std::domain_error("roughness sigma must be finite and >= 0");
  }
  if (!(wavelength_m > 0.0)) throw std::domain_error("wavelength must be > 0");
  if (!(incidence_rad >= 0.0 && incidence_rad < kPi / 2.0)) {
    throw std::domain_error("incidence must lie in [0, pi/2)");
  }
  const double root = 4.0 * kPi * sigma_m * std::cos(incidence_rad) / wavelength_m;
  return std::exp(-0.5 * root * root);
}

double bistatic_roughness_factor(double sigma_m, double incidence_rad, double exit_rad,
                                 double wavelength_m) {
  if (!(exit_rad >= 0.0 && exit_rad < kPi / 2.0)) {
    throw std::domain_error("exit angle must lie in [0, pi/2)");
  }
  // Validates sigma, wavelength, and incidence.
  rayleigh_roughness_factor(sigma_m, incidence_rad, wavelength_m);
  const double root =
      2.0 * kPi * sigma_m * (std::cos(incidence_rad) + std::cos(exit_rad)) / wavelength_m;
  return std::exp(-0.5 * root * root);
}

double diffuse_lobe_normalization(double lobe_exponent) {
  // Integral of cos^a over [-pi/2, pi/2] is sqrt(pi) G((a+1)/2) / G(a/2+1).
  const double a = lobe_exponent;
  return std::exp(std::lgamma(a / 2.0 + 1.0) - std::lgamma((a + 1.0) / 2.0)) /
         std::sqrt(kPi);
}

double specular_kernel(double delta_rad, double wavelength_m, double width_m) {
  return std::abs(delta_rad) <= wavelength_m / (2.0 * width_m) ? 1.0 : 0.0;
}

double angle_to_specular(Vec2 normal, Vec2 incident_dir, Vec2 scattered_dir) {
  const Vec2 n = normalized(normal);
  const Vec2 in = normalized(incident_dir);
  const Vec2 mirror = in - 2.0 * dot(in, n) * n;
  const double c = std::clamp(dot(mirror, normalized(scattered_dir)), -1.0, 1.0);
  return std::acos(c);
}

namespace {

struct LobeGeometry {
  double incidence_rad;
  double exit_rad;
  double delta_rad;
};

std::optional<LobeGeometry> lobe_geometry(Vec2 normal, Vec2 incident_dir, Vec2 scattered_dir) {
  Vec2 n = normalized(normal);
  const Vec2 in = normalized(incident_dir);
  if (dot(in, n) > 0.0) n = -n;  // face the incoming wave
  const Vec2 out = normalized(scattered_dir);
  const double incidence = std::acos(std::min(1.0, -dot(in, n)));
  const double exit_from_normal = std::acos(std::clamp(dot(out, n), -1.0, 1.0));
  if (grazing(incidence) || exit_from_normal >= kPi / 2.0 - kGrazingToleranceRad) {
    return std::nullopt;
  }
  return LobeGeometry{incidence, exit_from_normal, angle_to_specular(n, in, out)};
}

double lobe_value(double delta_rad, double lobe_exponent) {
  if (delta_rad >= kPi / 2.0) return 0.0;
  return diffuse_lobe_normalization(lobe_exponent) *
         std::pow(std::cos(delta_rad), lobe_exponent);
}

double gain_to_clamped_loss(double reflectivity_loss_db, double linear_gain) {
  if (!(linear_gain > 0.0)) return kInteractionLossClampDb;
  return std::clamp(reflectivity_loss_db - 10.0 * std::log10(linear_gain), 0.0,
                    kInteractionLossClampDb);
}

}  // namespace

std::optional<double> scatter_lobe_loss_db(const NirsPanel& panel, Vec2 normal,
                                           Vec2 incident_dir, Vec2 scattered_dir,
                                           double wavelength_m, const ScatterParams& params) {
  auto geo = lobe_geometry(normal, incident_dir, scattered_dir);
  if (!geo) return std::nullopt;
  const double rho = bistatic_roughness_factor(panel.roughness_sigma_m, geo->incidence_rad,
                                               geo->exit_rad, wavelength_m);
  const double rho2 = rho * rho;
  const double g = rho2 * specular_kernel(geo->delta_rad, wavelength_m, panel.width_m) +
                   (1.0 - rho2) * lobe_value(geo->delta_rad, params.lobe_exponent);
  return gain_to_clamped_loss(panel.reflectivity_loss_db, g);
}

std::optional<double> tile_scatter_loss_db(const NirsPanel& panel, Vec2 normal,
                                           Vec2 incident_dir, Vec2 scattered_dir,
                                           bool holds_mirror_point, double wavelength_m,
                                           const ScatterParams& params) {
  auto geo = lobe_geometry(normal, incident_dir, scattered_dir);
  if (!geo) return std::nullopt;
  const double rho = bistatic_roughness_factor(panel.roughness_sigma_m, geo->incidence_rad,
                                               geo->exit_rad, wavelength_m);
  const double rho2 = rho * rho;
  const double share = 1.0 / panel.tile_count();
  const double g = rho2 * (holds_mirror_point ? 1.0 : 0.0) +
                   (1.0 - rho2) * lobe_value(geo->delta_rad, params.lobe_exponent) * share;
  return gain_to_clamped_loss(panel.reflectivity_loss_db, g);
}

bool line_of_sight(const FloorPlan& plan, Vec2 a, Vec2 b) {
  for (const auto& w : plan.walls) {
    if (segments_intersect(a, b, w.p1, w.p2)) return false;
  }
  return true;
}

std::vector<PropPath> trace_paths(const FloorPlan& plan, const Transceiver& tx, Vec2 rx,
                                  double frequency_hz, const TraceOptions& options) {
  if (!(frequency_hz > 0.0)) throw std::domain_error("frequency must be > 0");
  if (tx.position == rx) throw std::invalid_argument("tx and rx positions coincide");
  if (options.max_order < 0 || options.max_order > 3) {
    throw std::invalid_argument("max_order must lie in [0, 3]");
  }
  return PathTracer(plan, tx, rx, frequency_hz, options).run();
}

std::vector<PropPath> trace_panel_paths(const FloorPlan& plan, const Transceiver& tx, Vec2 rx,
                                        double frequency_hz, int panel_index,
                                        const TraceOptions& options) {
  if (!(frequency_hz > 0.0)) throw std::domain_error("frequency must be > 0");
  if (tx.position == rx) throw std::invalid_argument("tx and rx positions coincide");
  if (panel_index < 0 || panel_index >= static_cast<int>(plan.panels.size())) {
    throw std::out_of_range("panel index out of range");
  }
  return PathTracer(plan, tx, rx, frequency_hz, options).run_panel(panel_index);
}

double path_total_loss_db(const PropPath& path, double frequency_hz) {
  return fspl_db(frequency_hz, path.total_length_m) + path.interaction_loss_db -
         path.tx_gain_dbi - path.rx_gain_dbi;
}

}  // namespace nirsplan
