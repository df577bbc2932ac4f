# Copyright 2026 The xdual Authors.
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

import json
import os
import pathlib

import pytest

import xdual

DATA = pathlib.Path(
    os.environ.get("XDUAL_DATA_DIR",
                   pathlib.Path(__file__).resolve().parents[2] / "data"))

E1 = {"A": "known", "T": "new", "L": "long", "W": "home"}
E2 = {"A": "known", "T": "new", "L": "short", "W": "work"}


@pytest.fixture(scope="module")
def poole():
    return xdual.load_model(str(DATA / "poole.json"))


def test_model_metadata(poole):
    assert poole.kind == "tree"
    assert poole.classes == ["reads", "skips"]
    assert [name for name, _ in poole.features] == ["A", "T", "L", "W"]


def test_predict(poole):
    assert poole.predict(E1) == "skips"
    assert poole.predict(["known", "new", "short", "work"]) == "reads"


def test_axp_and_cxp(poole):
    assert xdual.extract_axp(poole, E2) == {"T": "new", "L": "short"}
    assert xdual.extract_axp(poole, E2, order=["T", "A", "L", "W"]) == {
        "A": "known", "L": "short"}
    result = xdual.extract_cxp(poole, E2)
    assert result["cxp"] == {"L": "short"}
    assert result["witness"] == {"L": "long"}
    assert result["witness_prediction"] == "skips"


def test_enumerate_all_matches_brute_force(poole):
    found = xdual.enumerate_all(poole, E2)
    axps = sorted(sorted(a) for a in found["axps"])
    cxps = sorted(sorted(c) for c in found["cxps"])
    assert axps == [["A", "L"], ["L", "T"]]
    assert cxps == [["A", "T"], ["L"]]
    assert found["entailment_calls"] + found["witness_calls"] > 0
    brute_axps, brute_cxps = xdual.brute_force(poole, E2)
    assert sorted(brute_axps) == ["{A, L}", "{T, L}"]
    assert sorted(brute_cxps) == ["{A, T}", "{L}"]
    assert xdual.verify(poole, E2) == []


def test_targeted_cxp():
    model = xdual.load_model(str(DATA / "three_class.json"))
    result = xdual.extract_cxp(model, {"X": "a", "Y": "0"}, targets=["k3"])
    assert result["cxp"] == {"X": "a"}
    assert result["witness"] == {"X": "c"}


def test_minimal_hitting_set():
    assert xdual.minimal_hitting_set(4, [[2], [1, 0]]) == [1, 2]
    assert xdual.minimal_hitting_set(4, [[2], [1, 0]], [[1, 2]]) == [0, 2]
    assert xdual.minimal_hitting_set(4, [], [[]]) is None


def test_round_trip(poole):
    text = (DATA / "poole.json").read_text()
    assert poole.to_json() == text
    assert xdual.parse_model(text).to_json() == text


def test_errors(poole):
    with pytest.raises(xdual.XdualError, match="schema"):
        xdual.parse_model('{"format_version": 1, "kind": "forest"}')
    with pytest.raises(xdual.XdualError):
        poole.predict({"A": "known"})


def test_cli():
    code, out, err = xdual.run_cli(
        ["enum", "--mode", "all", "-m", str(DATA / "poole.json"),
         "-i", str(DATA / "e2.csv")])
    assert code == 0, err
    records = [json.loads(line) for line in out.splitlines()]
    kinds = [r["kind"] for r in records]
    assert kinds.count("axp") == 2 and kinds.count("cxp") == 2
    assert kinds[-1] == "summary"
    code, _, _ = xdual.run_cli(["predict"])
    assert code == 2
