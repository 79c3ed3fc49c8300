import json
from pathlib import Path

import pytest

import spectra_cert as sc

DATA = Path(__file__).resolve().parents[2] / "data"


def load(name):
    return json.loads((DATA / name).read_text())


def test_motivating_system_is_weakly_infeasible():
    report = sc.analyze(load("motivating.json"))
    assert report["verdict"] == "infeasible"
    assert report["k"] == 1
    assert report["strength"] == "weak"
    assert sc.verify(load("motivating.json"), report)["accepted"]


def test_feasible_example_has_rank_two():
    report = sc.analyze(load("ex2.json"))
    assert report["verdict"] == "feasible"
    assert report["p"] == 2


def test_hinted_run_reproduces_final_rhs():
    report = sc.analyze(load("ex1.json"), hints=load("ex1_hints.json"))
    assert report["system"]["b"] == ["0", "0", "-1", "2", "1", "3"]
    report["system"]["b"][2] = "0"
    assert not sc.verify(load("ex1.json"), report)["accepted"]


def test_generate_round_trip():
    inst = sc.generate("feasible", n=4, m=3, p=2, seed=5)
    assert inst["ground_truth"]["certificate"]["p"] == 2
    report = sc.analyze(inst)
    assert report["verdict"] == "feasible"
    assert report["p"] == 2
    assert sc.generate("infeasible", 4, 3, seed=1) == sc.generate("infeasible", 4, 3, seed=1)


def test_probe_zero_objective():
    out = sc.probe(load("ex2.json"), [["0"] * 4] * 4)
    assert out["gap"] == 0.0
    assert out["exact"] is False


def test_import_sdpa_matches_json():
    text = (DATA / "motivating.dat-s").read_text()
    assert sc.import_sdpa(text) == load("motivating.json")


def test_is_psd():
    assert sc.is_psd([[2, -1], [-1, 2]])
    assert not sc.is_psd([["1", "2"], ["2", "1"]])
    assert sc.is_psd([["1/4", "1/2"], ["1/2", "1"]])


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        sc.analyze({"n": 2, "m": 1, "A": [[["1", "2"], ["3", "1"]]], "b": ["0"]})
    with pytest.raises(ValueError):
        sc.import_sdpa("")
    with pytest.raises(ValueError):
        sc.generate("weakly-infeasible", 3, 3, k=1)
    with pytest.raises(sc.ResampleExhausted):
        sc.generate("infeasible", 3, 2, k=1, entry_bound=0)
