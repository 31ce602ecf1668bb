# Copyright 2026 The nirsplan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""THz non-intelligent reflecting surface coverage planning."""

import json

from . import _core
from ._core import (
    InfeasibleError,
    ParseError,
    ValidationError,
    fspl_db,
    irs_concatenated_loss_db,
    irs_elements_to_match_direct,
    nirs_link_loss_db,
    rayleigh_roughness_factor,
    shannon_capacity_bps,
)

__all__ = [
    "InfeasibleError",
    "ParseError",
    "ValidationError",
    "compare_irs",
    "coverage",
    "dss",
    "fspl_db",
    "irs_concatenated_loss_db",
    "irs_elements_to_match_direct",
    "nirs_link_loss_db",
    "optimize",
    "preset",
    "preset_names",
    "rayleigh_roughness_factor",
    "shannon_capacity_bps",
]


def preset_names():
    return list(_core.preset_names())


def preset(name):
    """Scenario document of a built-in preset."""
    if name not in _core.preset_names():
        raise KeyError(name)
    return json.loads(_core.preset_json(name))


def _body(scenario, options):
    body = dict(options)
    if isinstance(scenario, str):
        body["preset"] = scenario
    else:
        body["scenario"] = scenario
    return json.dumps(body)


def coverage(scenario, **options):
    """Coverage with and without panels.

    `scenario` is a preset name or a scenario document. Keyword options match
    the service request body: cell_size_m, max_order, band, noise_figure_db,
    nlos_only, grid.
    """
    return json.loads(_core.coverage_json(_body(scenario, options)))


def optimize(scenario, **options):
    """Panel placement; options as the service body (k, algorithm, seed, ...)."""
    return json.loads(_core.optimize_json(_body(scenario, options)))


def compare_irs(d1_m=1.0, d2_m=1.0, direct_m=None, n_elements=1,
                reflection_loss_db=0.0, frequency_hz=300e9):
    if direct_m is None:
        direct_m = d1_m + d2_m
    return json.loads(_core.compare_irs_json(
        frequency_hz, d1_m, d2_m, direct_m, n_elements, reflection_loss_db))


def dss(scenario, rx, step_deg=10.0, max_order=2):
    doc = preset(scenario) if isinstance(scenario, str) else scenario
    return json.loads(_core.dss_json(json.dumps(doc), rx[0], rx[1], step_deg,
                                     max_order))
