import os
from pathlib import Path

import pytest

import ditalg

DATA = Path(os.environ.get("DITALG_DATA", Path(__file__).resolve().parents[2] / "data"))


def test_load_and_certify():
    d = ditalg.load(str(DATA / "exl.json"))
    assert (d.npoints, d.narrows, d.field) == (5, 6, "F101")
    certs = d.certificates()
    assert certs["roiter"][0]
    assert certs["layer_filtration"][0]


def test_cycle_fails_directed():
    certs = ditalg.load(str(DATA / "cycle.json")).certificates()
    assert not certs["directed"][0]
    assert "cycle" in certs["directed"][1]


def test_parse_error_is_value_error():
    with pytest.raises(ValueError, match="line 4"):
        ditalg.load(str(DATA / "bad_syntax.json"))


def test_round_trip():
    d = ditalg.fixture("EXK", "F3")
    again = ditalg.parse(d.to_json())
    assert again.to_json() == d.to_json()


def test_hom_dims():
    ex1 = ditalg.fixture("EX1")
    assert ex1.hom_dim("S:1", "S:1") == 1
    assert ex1.hom_dim("S:1", "S:2") == 0
    interval = {"dims": {"1": 1, "2": 1}, "maps": {"a": [["1"]]}}
    assert ex1.hom_dim(interval, interval) == 1
    assert ex1.is_indecomposable(interval)
    assert ditalg.fixture("EX2").hom_dim("S:1", "S:2") == 0


def test_reduce_ex2():
    out = ditalg.reduce(ditalg.fixture("EX2"), 2)
    assert out["obstruction"] is None
    assert [s["kind"] for s in out["steps"]] == ["regularization"]
    assert out["minimal"]["arrows"] == []


def test_budget_obstruction():
    out = ditalg.reduce(ditalg.fixture("EX1"), 3, budget=0)
    assert "budget" in out["obstruction"]["reason"]


def test_classify_exk():
    rep = ditalg.classify(ditalg.load(str(DATA / "exk.json")), 2, lambdas=[0, 1, 2])
    assert rep["obstruction"] is None
    assert len(rep["indecomposables"]) == 6
    (fam,) = rep["families"]
    assert fam["specializations_ok"]
    assert fam["lambdas"] == ["0", "1", "2"]
    dims = sorted(tuple(m["module"]["dims"].values()) for m in rep["indecomposables"])
    assert dims.count((1, 1)) == 4


def test_classify_is_deterministic():
    d = ditalg.fixture("EX1", "F2")
    assert ditalg.classify(d, 3) == ditalg.classify(d, 3)
    assert len(ditalg.classify(d, 3)["indecomposables"]) == 3
