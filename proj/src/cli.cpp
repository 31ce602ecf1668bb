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

#include "nirsplan/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nirsplan/app.hpp"
#include "nirsplan/grid_io.hpp"
#include "nirsplan/presets.hpp"
#include "nirsplan/scenario_io.hpp"
#include "nirsplan/service.hpp"

namespace nirsplan {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string scenario;
  std::string out = ".";
  std::uint64_t seed = 0;
  double cell_size = 0.25;
  int max_order = 2;
  std::string band;
  std::optional<double> noise_figure;
  std::string format = "csv";
  bool all_cells = false;
};

void init_logging() {
  static bool done = false;
  if (!done) {
    auto logger = spdlog::stderr_color_mt("nirsplan");
    spdlog::set_default_logger(logger);
    done = true;
  }
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("NIRS_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

Scenario load_scenario_arg(const std::string& arg) {
  if (arg.empty()) throw CLI::RequiredError("--scenario");
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    try {
      return load_scenario_file(arg);
    } catch (const std::ios_base::failure& e) {
      throw IoError(e.what());
    }
  }
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return preset(arg);
  throw IoError("cannot read scenario '" + arg + "': no such file or preset");
}

RunSettings settings_from(const Globals& g) {
  RunSettings s;
  s.cell_size_m = g.cell_size;
  s.max_order = g.max_order;
  if (!g.band.empty()) s.band = parse_band(g.band);
  s.noise_figure_db = g.noise_figure;
  s.nlos_only = !g.all_cells;
  return s;
}

fs::path output_dir(const Globals& g) {
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + g.out + "'");
  }
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  spdlog::info("wrote {}", path.string());
}

std::string grid_csv(const GridData& grid) {
  std::ostringstream s;
  write_grid_csv(s, grid, 4);
  return s.str();
}

std::string grid_pgm(const GridData& grid) {
  std::ostringstream s;
  write_grid_pgm(s, grid);
  return s.str();
}

std::string pretty(const json& doc) { return doc.dump(2) + "\n"; }

void cmd_coverage(const Globals& g, std::ostream& out) {
  const CoverageRequest req{load_scenario_arg(g.scenario), settings_from(g)};
  const CoverageRun run = run_coverage(req);
  const fs::path dir = output_dir(g);
  write_file(dir / "coverage_with.csv", grid_csv(path_loss_grid(run.with)));
  write_file(dir / "coverage_without.csv", grid_csv(path_loss_grid(run.without)));
  const GridData enh = enhancement_grid(run.enhancement);
  write_file(dir / "enhancement.csv", grid_csv(enh));
  write_file(dir / "stats.json", pretty(stats_to_json(run.enhancement.stats, run.nlos_only)));
  if (g.format == "pgm") write_file(dir / "enhancement.pgm", grid_pgm(enh));
  if (g.format == "json") write_file(dir / "coverage.json", pretty(coverage_to_json(run)));
  const CoverageStats& s = run.enhancement.stats;
  out << "cells " << s.cell_count << ", max enhancement " << format_fixed(s.max_enhancement_db, 4)
      << " dB, frac >= 3 dB " << format_fixed(s.frac_above_3db, 4) << "\n";
}

struct OptimizeFlags {
  int k = 1;
  std::string algorithm = "greedy";
  std::string objective = "percentile_capacity";
  double percentile = 0.1;
  double snr_threshold = 10.0;
  double step = 0.3;
  int iterations = 2000;
  std::optional<double> initial_temperature;
  double panel_width = 1.2;
};

void cmd_optimize(const Globals& g, const OptimizeFlags& f, std::ostream& out) {
  OptimizeRequest req;
  req.scenario = load_scenario_arg(g.scenario);
  req.settings = settings_from(g);
  req.k = f.k;
  req.algorithm = f.algorithm;
  req.seed = g.seed;
  req.step_m = f.step;
  req.objective.kind = parse_objective_kind(f.objective);
  req.objective.percentile = f.percentile;
  req.objective.snr_threshold_db = f.snr_threshold;
  req.schedule.iterations = f.iterations;
  req.schedule.initial_temperature = f.initial_temperature;
  req.panel_template.width_m = f.panel_width;
  const OptimizeRun run = run_optimize(req);
  const fs::path dir = output_dir(g);
  write_file(dir / "solution.json", pretty(optimize_to_json(run, req)));
  const GridData enh = enhancement_grid(run.coverage.enhancement);
  write_file(dir / "enhancement.csv", grid_csv(enh));
  if (g.format == "pgm") write_file(dir / "enhancement.pgm", grid_pgm(enh));
  for (const auto& c : run.solution.chosen) {
    out << "wall " << c.wall_id << " offset " << format_fixed(c.offset_m, 4) << " m\n";
  }
  out << "objective " << format_fixed(run.solution.objective_value, 4) << " (baseline "
      << format_fixed(run.solution.baseline_value, 4) << "), " << run.solution.evaluations
      << " evaluations\n";
}

struct IrsFlags {
  double frequency = 300e9;
  double d1 = 1.0;
  double d2 = 1.0;
  std::optional<double> direct;
  long n = 1;
  double reflection_loss = 0.0;
};

void cmd_compare_irs(const Globals& g, const IrsFlags& f, std::ostream& out, bool write_out) {
  const IrsComparison c =
      compare_irs(f.frequency, f.d1, f.d2, f.direct.value_or(f.d1 + f.d2), f.n, f.reflection_loss);
  const json doc = irs_to_json(c);
  if (write_out) write_file(output_dir(g) / "compare_irs.json", pretty(doc));
  if (g.format == "json") {
    out << pretty(doc);
    return;
  }
  out << "product-distance loss (N=" << c.n_elements
      << "): " << format_fixed(c.product_distance_loss_db, 4) << " dB\n"
      << "sum-distance loss: " << format_fixed(c.sum_distance_loss_db - c.reflection_loss_db, 4)
      << " dB + reflection " << format_fixed(c.reflection_loss_db, 4)
      << " dB = " << format_fixed(c.sum_distance_loss_db, 4) << " dB\n"
      << "direct loss (" << c.direct_m << " m): " << format_fixed(c.direct_loss_db, 4) << " dB\n"
      << "elements to match direct: " << c.elements_to_match_direct << "\n";
}

struct DssFlags {
  std::vector<double> rx;
  double step = 10.0;
  double rx_gain = AntennaPattern::rx_default().peak_gain_dbi;
  double rx_hpbw = AntennaPattern::rx_default().hpbw_deg;
  double rx_floor = AntennaPattern::rx_default().sidelobe_floor_dbi;
};

void cmd_dss(const Globals& g, const DssFlags& f, std::ostream& out, bool write_out) {
  const double steps = 360.0 / f.step;
  if (!(f.step > 0.0) || std::abs(steps - std::round(steps)) > 1e-9) {
    throw std::invalid_argument("--step must divide 360");
  }
  const Scenario scenario = effective_scenario(load_scenario_arg(g.scenario), settings_from(g));
  const Vec2 rx{f.rx.at(0), f.rx.at(1)};
  const DssResult r = dss_emulate(scenario, rx, {f.rx_gain, f.rx_hpbw, f.rx_floor}, f.step,
                                  effective_trace(settings_from(g)));
  std::string csv = "azimuth_deg,power_dbm\n";
  for (const auto& d : r.directions) {
    csv += format_fixed(d.azimuth_deg, 4) + "," + (d.power_dbm ? format_fixed(*d.power_dbm, 4) : "") +
           "\n";
  }
  auto db = [](const std::optional<double>& v) { return v ? json(round_db(*v)) : json(nullptr); };
  const json stats = {{"rx", {rx.x, rx.y}},
                      {"step_deg", f.step},
                      {"directions", r.directions.size()},
                      {"synthesized_omni_dbm", db(r.synthesized_omni_dbm)},
                      {"true_omni_dbm", db(r.true_omni_dbm)}};
  if (write_out) {
    const fs::path dir = output_dir(g);
    write_file(dir / "dss.csv", csv);
    write_file(dir / "dss.json", pretty(stats));
  }
  if (g.format == "json") {
    out << pretty(stats);
  } else {
    out << csv << "# synthesized_omni_dbm: "
        << (r.synthesized_omni_dbm ? format_fixed(*r.synthesized_omni_dbm, 4) : "") << "\n";
  }
}

void cmd_presets(const Globals& g, const std::string& name, std::ostream& out, bool write_out) {
  json doc;
  if (name.empty()) {
    doc = presets_to_json();
  } else {
    try {
      doc = scenario_to_json(preset(name));
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("unknown preset '" + name + "'");
    }
  }
  if (write_out) {
    write_file(output_dir(g) / (name.empty() ? "presets.json" : name + ".json"), pretty(doc));
  } else {
    out << pretty(doc);
  }
}

struct ServeFlags {
  std::string listen = "127.0.0.1:8787";
  std::size_t max_cells = 40000;
  std::vector<std::string> cors_origins;
};

int cmd_serve(const ServeFlags& f, std::ostream& err) {
  const auto [host, port] = parse_listen(f.listen);
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service({f.max_cells, 100, f.cors_origins});
  const int bound = port == 0 ? service.bind_any_port(host) : -1;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    spdlog::info("signal {}, shutting down", sig);
    service.stop();
  });
  spdlog::warn("listening on {}:{}", host, port == 0 ? bound : port);
  const bool ok = port == 0 ? bound > 0 && service.listen_after_bind() : service.listen(host, port);
  if (!ok) {
    err << "error: cannot listen on " << f.listen << "\n";
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return kExitIo;
  }
  waiter.join();
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  init_logging();
  CLI::App app{"THz non-intelligent reflecting surface coverage planner", "nirsplan"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--scenario", g.scenario, "Scenario JSON file or preset name");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--cell-size", g.cell_size, "Grid cell size in meters");
  app.add_option("--max-order", g.max_order, "Maximum reflection order (0-3)");
  app.add_option("--band", g.band, "306, 356, or custom:CENTER_HZ,BANDWIDTH_HZ");
  app.add_option("--noise-figure", g.noise_figure, "Receiver noise figure in dB");
  app.add_option("--format", g.format, "Extra output format")
      ->check(CLI::IsMember({"csv", "json", "pgm"}));
  app.add_flag("--all-cells", g.all_cells, "Include line-of-sight cells in statistics");

  auto* coverage = app.add_subcommand("coverage", "Coverage with and without panels");
  auto* optimize = app.add_subcommand("optimize", "Choose panel placements");
  OptimizeFlags of;
  optimize->add_option("-k,--k", of.k, "Number of panels");
  optimize->add_option("--algorithm", of.algorithm)
      ->check(CLI::IsMember({"single", "greedy", "exhaustive", "anneal"}));
  optimize->add_option("--objective", of.objective)
      ->check(CLI::IsMember({"mean_capacity", "percentile_capacity", "min_capacity",
                             "frac_above_snr"}));
  optimize->add_option("--percentile", of.percentile);
  optimize->add_option("--snr-threshold", of.snr_threshold, "dB, for frac_above_snr");
  optimize->add_option("--step", of.step, "Candidate spacing along walls in meters");
  optimize->add_option("--iterations", of.iterations, "Annealing iterations");
  optimize->add_option("--initial-temperature", of.initial_temperature);
  optimize->add_option("--panel-width", of.panel_width, "Panel width in meters");

  auto* irs = app.add_subcommand("compare-irs", "IRS product-distance versus NIRS sum-distance");
  IrsFlags irf;
  irs->add_option("--frequency", irf.frequency, "Hz");
  irs->add_option("--d1", irf.d1, "Transmitter to surface, m");
  irs->add_option("--d2", irf.d2, "Surface to receiver, m");
  irs->add_option("--direct", irf.direct, "Direct distance, m (default d1 + d2)");
  irs->add_option("-n,--elements", irf.n, "IRS elements");
  irs->add_option("--reflection-loss", irf.reflection_loss, "NIRS reflection loss, dB");

  auto* dss = app.add_subcommand("dss", "Direction-scan sounding at one receiver position");
  DssFlags df;
  dss->add_option("--rx", df.rx, "Receiver position X Y")->expected(2)->delimiter(',')->required();
  dss->add_option("--step", df.step, "Scan step in degrees");
  dss->add_option("--rx-gain", df.rx_gain, "Scan antenna peak gain, dBi");
  dss->add_option("--rx-hpbw", df.rx_hpbw, "Scan antenna half-power beamwidth, degrees");

  auto* presets = app.add_subcommand("presets", "Dump built-in scenarios");
  std::string preset_name;
  presets->add_option("--name", preset_name, "Single preset to dump");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  ServeFlags sf;
  serve->add_option("--listen", sf.listen, "HOST:PORT");
  serve->add_option("--max-cells", sf.max_cells, "Coverage grid cell cap");
  serve->add_option("--cors-origin", sf.cors_origins, "Allowed origin (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const bool out_given = app.count("--out") > 0;
  try {
    if (coverage->parsed()) cmd_coverage(g, out);
    if (optimize->parsed()) cmd_optimize(g, of, out);
    if (irs->parsed()) cmd_compare_irs(g, irf, out, out_given);
    if (dss->parsed()) cmd_dss(g, df, out, out_given);
    if (presets->parsed()) cmd_presets(g, preset_name, out, out_given);
    if (serve->parsed()) return cmd_serve(sf, err);
  } catch (const CLI::RequiredError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    err << "error: invalid scenario\n";
    for (const auto& v : e.violations()) err << "  " << v.path << ": " << v.message << "\n";
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace nirsplan
