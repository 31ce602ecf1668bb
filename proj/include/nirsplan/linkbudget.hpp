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

#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "nirsplan/propagation.hpp"
#include "nirsplan/scene.hpp"

namespace nirsplan {

// Received-power sentinel for a receiver that no path reaches.
inline constexpr double kNoCoverageDbm = -std::numeric_limits<double>::infinity();

inline constexpr double kBoltzmann = 1.380649e-23;

struct LinkParams {
  double tx_power_dbm = 13.0;
  Band band;
  double noise_figure_db = 10.0;
  double temperature_k = 290.0;
  double implementation_loss_db = 0.0;
  // Receiver gain applied to every path: the receiver is treated as a beam
  // that steers onto each arrival, so the synthesized omnidirectional power
  // is lifted by the full horn gain.
  double rx_gain_dbi = 25.0;

  // Tx power and band taken from the scenario; other fields default.
  static LinkParams from_scenario(const Scenario& scenario);
};

// Throws std::invalid_argument when an invariant is violated.
void validate_link_params(const LinkParams& params);

struct LinkResult {
  // nullopt means no coverage.
  std::optional<double> received_power_dbm;
  std::optional<double> effective_path_loss_db;
  std::optional<double> snr_db;
  double capacity_bps = 0.0;
  int path_count = 0;
  std::optional<PathKind> strongest_kind;

  bool covered() const { return received_power_dbm.has_value(); }
};

struct IrsBaseline {
  double d1_m = 1.0;
  double d2_m = 1.0;
  long n_elements = 1;
  double path_loss_exponent = 2.0;
};

// Thermal noise 10 log10(k T B / 1 mW) plus the noise figure.
double noise_power_dbm(const Band& band, double noise_figure_db, double temperature_k = 290.0);

// Sum of 10^(-L/10) over the paths, accumulated in list order. Shared by
// every caller that needs the power sum so that results agree bit for bit.
double linear_path_gain_sum(std::span<const PropPath> paths, double frequency_hz);

// tx_power + 10 log10(linear_sum), or kNoCoverageDbm for a zero sum.
double received_power_from_linear(double linear_sum, double tx_power_dbm);

// Incoherent power sum over paths; kNoCoverageDbm for an empty list.
double received_power_dbm(std::span<const PropPath> paths, double frequency_hz,
                          double tx_power_dbm);

// received - noise; the no-coverage sentinel propagates.
double snr_db(double received_dbm, double noise_dbm);

// B log2(1 + 10^(snr/10)); 0 for the -inf sentinel.
double shannon_capacity_bps(double snr_db, double bandwidth_hz);

// Product-distance loss of one IRS element pair, less 20 log10(N) array gain.
double irs_concatenated_loss_db(const IrsBaseline& baseline, double frequency_hz);

// Smallest N for which the IRS link loss is no worse than the direct link.
long irs_elements_to_match_direct(double d1_m, double d2_m, double direct_distance_m,
                                  double frequency_hz);

// Sum-distance NIRS link: fspl(d1 + d2) plus the reflection loss.
double nirs_link_loss_db(double d1_m, double d2_m, double reflection_loss_db,
                         double frequency_hz);

// Link quantities for already-traced paths.
LinkResult link_from_paths(std::span<const PropPath> paths, const Scenario& scenario,
                           const LinkParams& params);

// Composes trace_paths, received power, SNR, and capacity. The effective
// path loss is tx_power + tx peak gain + rx gain - received power.
LinkResult evaluate_link(const Scenario& scenario, Vec2 rx, const LinkParams& params,
                         const TraceOptions& options = {});

// Link quantities from a linear path-gain sum: the shared tail of
// link_from_paths and the optimizer's cached evaluation.
LinkResult link_from_linear(double linear_sum, const Scenario& scenario,
                            const LinkParams& params);

}  // namespace nirsplan
