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

// Path enumeration (line of sight, image-method wall reflections, panel tile
// scattering) and the per-path loss terms.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nirsplan/geometry.hpp"
#include "nirsplan/scene.hpp"

namespace nirsplan {

// Rounded propagation speed used by every loss figure in this library.
inline constexpr double kSpeedOfLight = 3.0e8;

// Upper clamp on any single interaction loss.
inline constexpr double kInteractionLossClampDb = 60.0;

// Paths grazing a surface within this angle are rejected.
inline constexpr double kGrazingToleranceRad = 1e-6;

enum class PathKind { kLoS, kSpecular, kNirsScatter };

std::string_view to_string(PathKind kind);

struct PropPath {
  PathKind kind = PathKind::kLoS;
  // Reflecting walls in order. For panel paths this holds the optional wall
  // bounce that precedes the panel.
  std::vector<int> wall_ids;
  int panel_id = -1;  // index into FloorPlan::panels
  int tile_index = -1;
  std::vector<Vec2> vertices;  // Tx first, Rx last
  double total_length_m = 0.0;
  double spreading_loss_db = 0.0;
  double interaction_loss_db = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;

  // Number of wall and panel interactions.
  int order() const { return static_cast<int>(vertices.size()) - 2; }
  // Unit vector leaving the transmitter.
  Vec2 departure_direction() const;
  // Unit vector pointing from the receiver back along the last leg.
  Vec2 arrival_direction() const;
};

struct ScatterParams {
  double lobe_exponent = 4.0;
  bool coherent_residual = false;  // reserved; must stay false
};

struct RxAntenna {
  AntennaPattern pattern;
  double boresight_rad = 0.0;
};

struct TraceOptions {
  int max_order = 2;
  // Adds wall -> panel -> Rx paths.
  bool panel_after_wall = false;
  ScatterParams scatter;
  // When set, each path's rx_gain follows this pattern; otherwise every path
  // gets the flat rx_gain_dbi.
  std::optional<RxAntenna> rx_antenna;
  double rx_gain_dbi = 0.0;
};

// Friis free-space loss 20 log10(4 pi d f / c). Throws std::domain_error for
// non-positive inputs.
double fspl_db(double frequency_hz, double distance_m);

// peak - 12 (theta / hpbw)^2, floored at the sidelobe level.
double antenna_gain_dbi(const AntennaPattern& pattern, double off_boresight_rad);

// Affine in the incidence angle (from the surface normal), clamped at 0 dB.
double reflection_loss_db(const Material& material, double incidence_rad);

// Rayleigh roughness factor exp(-g/2) with g = (4 pi sigma cos(theta) / lambda)^2.
double rayleigh_roughness_factor(double sigma_m, double incidence_rad,
                                 double wavelength_m);

// Two-angle form, g = (2 pi sigma (cos(theta_i) + cos(theta_s)) / lambda)^2.
// Equals rayleigh_roughness_factor when theta_s == theta_i and is symmetric
// in the two angles.
double bistatic_roughness_factor(double sigma_m, double incidence_rad, double exit_rad,
                                 double wavelength_m);

// K such that K * cos^alpha integrates to 1 over [-pi/2, pi/2].
double diffuse_lobe_normalization(double lobe_exponent);

// Top-hat of half-width lambda / (2 width) and unit height.
double specular_kernel(double delta_rad, double wavelength_m, double width_m);

// Angle between `scattered_dir` and the mirror direction of `incident_dir`
// about a surface with the given normal. Directions need not be unit length.
double angle_to_specular(Vec2 normal, Vec2 incident_dir, Vec2 scattered_dir);

// Whole-panel scattering loss (dB, >= 0, clamped at 60 dB):
//   reflectivity_loss - 10 log10(rho^2 D_spec + (1 - rho^2) K cos^alpha(delta)),
// with rho the bistatic roughness factor of the incident and exit angles.
// `normal` may point to either side. Returns nullopt for grazing geometry or
// when the scattered direction leaves through the panel.
std::optional<double> scatter_lobe_loss_db(const NirsPanel& panel, Vec2 normal,
                                           Vec2 incident_dir, Vec2 scattered_dir,
                                           double wavelength_m,
                                           const ScatterParams& params);

// Loss of one tile path. The tile holding the mirror point carries the
// specular share; the diffuse lobe is split over tiles by aperture.
std::optional<double> tile_scatter_loss_db(const NirsPanel& panel, Vec2 normal,
                                           Vec2 incident_dir, Vec2 scattered_dir,
                                           bool holds_mirror_point, double wavelength_m,
                                           const ScatterParams& params);

// True when no wall crosses or touches the closed segment a-b.
bool line_of_sight(const FloorPlan& plan, Vec2 a, Vec2 b);

// Enumerates LoS, specular chains up to max_order (image method), and one
// scatter path per visible panel tile. Order: LoS, specular by (order, wall
// id sequence), scatter by (panel index, tile index, pre-bounce wall).
std::vector<PropPath> trace_paths(const FloorPlan& plan, const Transceiver& tx, Vec2 rx,
                                  double frequency_hz, const TraceOptions& options = {});

// The scatter paths of one panel, exactly as trace_paths emits them. Panels
// never occlude, so these do not depend on the other panels.
std::vector<PropPath> trace_panel_paths(const FloorPlan& plan, const Transceiver& tx, Vec2 rx,
                                        double frequency_hz, int panel_index,
                                        const TraceOptions& options = {});

// fspl(total_length) + interaction_loss - tx_gain - rx_gain.
double path_total_loss_db(const PropPath& path, double frequency_hz);

}  // namespace nirsplan
