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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nirsplan/app.hpp"
#include "nirsplan/coverage.hpp"
#include "nirsplan/linkbudget.hpp"
#include "nirsplan/presets.hpp"
#include "nirsplan/propagation.hpp"
#include "nirsplan/scenario_io.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Documents cross the boundary as JSON text; the Python side decodes.
std::string coverage_doc(const std::string& body) {
  const auto req = nirsplan::coverage_request_from_json(json::parse(body));
  py::gil_scoped_release release;
  return nirsplan::coverage_to_json(nirsplan::run_coverage(req)).dump();
}

std::string optimize_doc(const std::string& body) {
  const auto req = nirsplan::optimize_request_from_json(json::parse(body));
  py::gil_scoped_release release;
  return nirsplan::optimize_to_json(nirsplan::run_optimize(req), req).dump();
}

std::string dss_doc(const std::string& scenario, double x, double y, double step_deg,
                    int max_order) {
  const auto s = nirsplan::load_scenario(scenario);
  nirsplan::TraceOptions opts;
  opts.max_order = max_order;
  const auto r = nirsplan::dss_emulate(s, {x, y}, nirsplan::AntennaPattern::rx_default(),
                                       step_deg, opts);
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json dirs = json::array();
  for (const auto& d : r.directions) {
    dirs.push_back({{"azimuth_deg", d.azimuth_deg}, {"power_dbm", opt(d.power_dbm)}});
  }
  return json{{"directions", dirs},
              {"synthesized_omni_dbm", opt(r.synthesized_omni_dbm)},
              {"true_omni_dbm", opt(r.true_omni_dbm)}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "THz NIRS coverage simulation and placement";

  py::register_exception<nirsplan::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<nirsplan::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<nirsplan::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  m.def("fspl_db", &nirsplan::fspl_db, py::arg("frequency_hz"), py::arg("distance_m"));
  m.def(
      "irs_concatenated_loss_db",
      [](double d1, double d2, long n, double f) {
        return nirsplan::irs_concatenated_loss_db({d1, d2, n, 2.0}, f);
      },
      py::arg("d1_m"), py::arg("d2_m"), py::arg("n_elements"), py::arg("frequency_hz"));
  m.def("irs_elements_to_match_direct", &nirsplan::irs_elements_to_match_direct, py::arg("d1_m"),
        py::arg("d2_m"), py::arg("direct_m"), py::arg("frequency_hz"));
  m.def("nirs_link_loss_db", &nirsplan::nirs_link_loss_db, py::arg("d1_m"), py::arg("d2_m"),
        py::arg("reflection_loss_db"), py::arg("frequency_hz"));
  m.def("rayleigh_roughness_factor", &nirsplan::rayleigh_roughness_factor, py::arg("sigma_m"),
        py::arg("incidence_rad"), py::arg("wavelength_m"));
  m.def("shannon_capacity_bps", &nirsplan::shannon_capacity_bps, py::arg("snr_db"),
        py::arg("bandwidth_hz"));
  m.def(
      "compare_irs_json",
      [](double f, double d1, double d2, double direct, long n, double refl) {
        return nirsplan::irs_to_json(nirsplan::compare_irs(f, d1, d2, direct, n, refl)).dump();
      },
      py::arg("frequency_hz"), py::arg("d1_m"), py::arg("d2_m"), py::arg("direct_m"),
      py::arg("n_elements"), py::arg("reflection_loss_db"));

  m.def("preset_names", &nirsplan::preset_names);
  m.def(
      "preset_json",
      [](const std::string& name) {
        return nirsplan::serialize_scenario(nirsplan::preset(name));
      },
      py::arg("name"));
  m.def(
      "normalize_scenario_json",
      [](const std::string& text) {
        return nirsplan::serialize_scenario(nirsplan::load_scenario(text));
      },
      py::arg("text"));

  m.def("coverage_json", &coverage_doc, py::arg("body"));
  m.def("optimize_json", &optimize_doc, py::arg("body"));
  m.def("dss_json", &dss_doc, py::arg("scenario"), py::arg("x"), py::arg("y"),
        py::arg("step_deg") = 10.0, py::arg("max_order") = 2);
}
