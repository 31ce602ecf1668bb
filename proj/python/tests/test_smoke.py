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

import math

import pytest

import nirsplan


def test_fspl_one_meter():
    assert nirsplan.fspl_db(300e9, 1.0) == pytest.approx(81.98, abs=0.01)


def test_irs_comparison():
    r = nirsplan.compare_irs()
    assert r["product_distance_loss_db"] == pytest.approx(163.96, abs=0.1)
    assert r["sum_distance_loss_db"] == pytest.approx(88.00, abs=0.01)
    assert r["elements_to_match_direct"] == 6284


def test_presets():
    names = nirsplan.preset_names()
    assert {"l-corridor", "l-corridor-nirs", "room-obstacle"} <= set(names)
    doc = nirsplan.preset("l-corridor-nirs")
    assert doc["panels"]
    with pytest.raises(KeyError):
        nirsplan.preset("nope")


def test_coverage_document():
    doc = nirsplan.coverage("l-corridor-nirs")
    n = doc["grid"]["nx"] * doc["grid"]["ny"]
    assert len(doc["enhancement_db"]) == n
    s = doc["stats"]
    assert 0.0 <= s["frac_above_3db"] <= 1.0
    assert s["mean_capacity_with_bps"] >= 2 * s["mean_capacity_without_bps"]
    assert all(v is None or v >= 0 for v in doc["enhancement_db"])


def test_coverage_accepts_document():
    doc = nirsplan.preset("l-corridor")
    a = nirsplan.coverage(doc, cell_size_m=0.5)
    b = nirsplan.coverage("l-corridor", cell_size_m=0.5)
    assert a == b
    assert all(v is None or v == 0 for v in a["enhancement_db"])


def test_validation_error():
    doc = nirsplan.preset("l-corridor")
    doc["walls"][0]["p2"] = doc["walls"][0]["p1"]
    with pytest.raises(ValueError, match="walls"):
        nirsplan.coverage(doc)


def test_optimize_deterministic():
    a = nirsplan.optimize("l-corridor", k=2, algorithm="anneal", seed=3,
                          cell_size_m=0.5, schedule={"iterations": 200})
    b = nirsplan.optimize("l-corridor", k=2, algorithm="anneal", seed=3,
                          cell_size_m=0.5, schedule={"iterations": 200})
    assert a == b
    assert len(a["chosen"]) == 2
    assert a["objective_value"] >= a["baseline_value"]


def test_optimize_infeasible():
    with pytest.raises(nirsplan.InfeasibleError):
        nirsplan.optimize("l-corridor", panel={"width_m": 50.0})


def test_dss_rows():
    r = nirsplan.dss("l-corridor", (9.0, 5.0), step_deg=10)
    assert len(r["directions"]) == 36
    assert math.isfinite(r["true_omni_dbm"])
