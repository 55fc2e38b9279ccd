"""End-to-end smoke tests for the Python module."""

import json
import os

import pytest

import hoteq_py


def fixture(name):
    path = os.path.join(os.environ.get("HOTEQ_FIXTURES", "fixtures"), name)
    with open(path, encoding="utf-8") as f:
        return f.read()


def uniform01(m):
    return json.dumps(
        {
            "m": m,
            "space": {"type": "interval", "R": "1"},
            "voters": {"density": [{"x": "0", "f": "1"}, {"x": "1", "f": "1"}]},
            "M": "1",
        }
    )


UNITS5 = json.dumps(
    {
        "m": 2,
        "space": {"type": "finite", "positions": ["0", "1", "2", "3", "4"]},
        "voters": {
            "atoms": [{"pos": str(i), "weight": "1"} for i in range(5)]
        },
    }
)


def test_dp_agrees_with_oracle():
    found = hoteq_py.solve_dp(UNITS5)
    everything = hoteq_py.oracle(UNITS5)
    assert found in everything
    assert sorted(everything) == [["1", "2"], ["2", "3"]]


def test_dp_eps_and_none():
    contested = json.dumps(
        {
            "m": 3,
            "space": {"type": "finite", "positions": ["0", "1", "2", "3", "4"]},
            "voters": {
                "atoms": [
                    {"pos": "1", "weight": "2"},
                    {"pos": "2", "weight": "1"},
                    {"pos": "3", "weight": "1"},
                    {"pos": "4", "weight": "2"},
                ]
            },
        }
    )
    assert hoteq_py.solve_dp(contested) is None
    assert hoteq_py.solve_dp(contested, epsilon="1") is not None


def test_grid_solver_and_verify():
    text = fixture("fig1.json")
    S = hoteq_py.solve_grid(text)
    assert S == ["0", "2", "10"]
    report = json.loads(hoteq_py.verify(text, S))
    assert report["ok"] is True
    assert report["utilities"] == ["10", "10", "10"]
    assert "witness" not in report


def test_verify_rejects_with_witness():
    text = fixture("fig1.json")
    report = json.loads(hoteq_py.verify(text, ["0", "5", "10"]))
    assert report["ok"] is False
    assert report["witness"]["candidate"] == 1
    assert report["witness"]["gain"] == "10"


def test_deviate_closed_gap():
    text = fixture("fig1.json")
    rep = json.loads(hoteq_py.deviate(text, ["0", "2", "10"], 3))
    assert rep["sup"] == "0"
    assert rep["gap"] == 3


def test_shift_canonicalizes():
    text = fixture("fig4.json")
    start = ["0", "2", "26/3", "16", "18"]
    result = json.loads(hoteq_py.shift(text, start))
    assert result["profile"][2] == "17/2"
    assert result["trace"][0]["kind"] == "shift_left"
    # Idempotent on its own output.
    again = json.loads(hoteq_py.shift(text, result["profile"]))
    assert again["profile"] == result["profile"]
    assert again["trace"] == []


def test_hard_family_roundtrip():
    doc = json.loads(hoteq_py.gen_hard(2))
    report = json.loads(hoteq_py.verify(json.dumps(doc), doc["profile"]))
    assert report["ok"] is True
    assert report["utilities"] == ["1", "1", "2", "1", "1", "2", "1", "1"]


def test_continuous_routes():
    grid = json.loads(hoteq_py.solve_cc(uniform01(2), epsilon="1/100"))
    assert grid["kind"] == "grid_dp"
    assert grid["guarantee"] == "1/25"
    quant = json.loads(hoteq_py.solve_cc(uniform01(4), epsilon="1/2"))
    assert quant["kind"] == "quantile_fallback"
    assert quant["profile"] == ["1/5", "2/5", "3/5", "4/5"]
    assert hoteq_py.quantiles(uniform01(4)) == ["1/5", "2/5", "3/5", "4/5"]


def test_el_conditions():
    doc = json.loads(fixture("violation.json"))
    checks = json.loads(
        hoteq_py.el_check(json.dumps(doc), doc["profile"], doc["delta"])
    )
    assert checks == {"c1": True, "c2": True, "c3": True, "c4": True, "all": True}
    # ...and yet the profile is not an equilibrium.
    report = json.loads(hoteq_py.verify(json.dumps(doc), doc["profile"]))
    assert report["ok"] is False


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        hoteq_py.solve_dp("{not json")
    with pytest.raises(ValueError):
        hoteq_py.gen_hard(0)
    with pytest.raises(ValueError):
        hoteq_py.verify(UNITS5, ["2/4", "3"])
    with pytest.raises(ValueError):
        hoteq_py.deviate(UNITS5, ["1", "2"], 5)
