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

#include "nirsplan/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nirsplan {

LinkParams LinkParams::from_scenario(const Scenario& scenario) {
  LinkParams p;
  p.tx_power_dbm = scenario.tx.tx_power_dbm;
  p.band = scenario.band;
  return p;
}

void validate_link_params(const LinkParams& params) {
  if (!(params.temperature_k > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (!(params.noise_figure_db >= 0.0)) throw std::invalid_argument("noise figure must be >= 0");
  if (!(params.implementation_loss_db >= 0.0)) {
    throw std::invalid_argument("implementation loss must be >= 0");
  }
  if (!(params.band.bandwidth_hz > 0.0 && params.band.center_hz > params.band.bandwidth_hz / 2)) {
    throw std::invalid_argument("band requires center > bandwidth / 2 > 0");
  }
  if (!std::isfinite(params.tx_power_dbm) || !std::isfinite(params.rx_gain_dbi)) {
    throw std::invalid_argument("tx power and rx gain must be finite");
  }
}

double noise_power_dbm(const Band& band, double noise_figure_db, double temperature_k) {
  return 10.0 * std::log10(kBoltzmann * temperature_k * band.bandwidth_hz / 1e-3) +
         noise_figure_db;
}

double linear_path_gain_sum(std::span<const PropPath> paths, double frequency_hz) {
  double sum = 0.0;
  for (const auto& p : paths) sum += std::pow(10.0, -path_total_loss_db(p, frequency_hz) / 10.0);
  return sum;
}

double received_power_from_linear(double linear_sum, double tx_power_dbm) {
  if (!(linear_sum > 0.0)) return kNoCoverageDbm;
  return tx_power_dbm + 10.0 * std::log10(linear_sum);
}

double received_power_dbm(std::span<const PropPath> paths, double frequency_hz,
                          double tx_power_dbm) {
  return received_power_from_linear(linear_path_gain_sum(paths, frequency_hz), tx_power_dbm);
}

double snr_db(double received_dbm, double noise_dbm) {
  if (received_dbm == kNoCoverageDbm) return kNoCoverageDbm;
  return received_dbm - noise_dbm;
}

double shannon_capacity_bps(double snr_db, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw std::domain_error("bandwidth must be > 0");
  if (snr_db == kNoCoverageDbm) return 0.0;
  return bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

double irs_concatenated_loss_db(const IrsBaseline& baseline, double frequency_hz) {
  if (!(baseline.d1_m > 0.0 && baseline.d2_m > 0.0)) {
    throw std::domain_error("IRS distances must be > 0");
  }
  if (baseline.n_elements < 1) throw std::domain_error("IRS needs at least one element");
  return fspl_db(frequency_hz, baseline.d1_m) + fspl_db(frequency_hz, baseline.d2_m) -
         20.0 * std::log10(static_cast<double>(baseline.n_elements));
}

long irs_elements_to_match_direct(double d1_m, double d2_m, double direct_distance_m,
                                  double frequency_hz) {
  if (!(d1_m > 0.0 && d2_m > 0.0 && direct_distance_m > 0.0)) {
    throw std::domain_error("distances must be > 0");
  }
  const double direct = fspl_db(frequency_hz, direct_distance_m);
  auto matches = [&](long n) {
    return irs_concatenated_loss_db({d1_m, d2_m, n, 2.0}, frequency_hz) <= direct;
  };
  const double excess = fspl_db(frequency_hz, d1_m) + fspl_db(frequency_hz, d2_m) - direct;
  long n = std::max(1L, static_cast<long>(std::ceil(std::pow(10.0, excess / 20.0))));
  // The closed form can be off by one at the rounding boundary.
  while (n > 1 && matches(n - 1)) --n;
  while (!matches(n)) ++n;
  return n;
}

double nirs_link_loss_db(double d1_m, double d2_m, double reflection_loss_db,
                         double frequency_hz) {
  return fspl_db(frequency_hz, d1_m + d2_m) + reflection_loss_db;
}

LinkResult link_from_linear(double linear_sum, const Scenario& scenario,
                            const LinkParams& params) {
  LinkResult r;
  const double received = received_power_from_linear(linear_sum, params.tx_power_dbm);
  if (received == kNoCoverageDbm) return r;
  const double rx_dbm = received - params.implementation_loss_db;
  const double noise =
      noise_power_dbm(params.band, params.noise_figure_db, params.temperature_k);
  r.received_power_dbm = rx_dbm;
  r.effective_path_loss_db =
      params.tx_power_dbm + scenario.tx.antenna.peak_gain_dbi + params.rx_gain_dbi - rx_dbm;
  r.snr_db = snr_db(rx_dbm, noise);
  r.capacity_bps = shannon_capacity_bps(*r.snr_db, params.band.bandwidth_hz);
  return r;
}

LinkResult link_from_paths(std::span<const PropPath> paths, const Scenario& scenario,
                           const LinkParams& params) {
  const double f = params.band.center_hz;
  LinkResult r = link_from_linear(linear_path_gain_sum(paths, f), scenario, params);
  r.path_count = static_cast<int>(paths.size());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) {
    const double loss = path_total_loss_db(p, f);
    if (loss < best) {
      best = loss;
      r.strongest_kind = p.kind;
    }
  }
  return r;
}

LinkResult evaluate_link(const Scenario& scenario, Vec2 rx, const LinkParams& params,
                         const TraceOptions& options) {
  TraceOptions opts = options;
  if (!opts.rx_antenna) opts.rx_gain_dbi = params.rx_gain_dbi;
  const auto paths = trace_paths(scenario.plan, scenario.tx, rx, params.band.center_hz, opts);
  return link_from_paths(paths, scenario, params);
}

}  // namespace nirsplan
