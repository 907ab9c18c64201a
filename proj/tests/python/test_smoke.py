import json
import pathlib

import pytest

import ccw

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def test_darboux_constants():
    assert [ccw.check_contact(ccw.darboux(n))["constant"] for n in (1, 2, 3)] == ["1", "2", "6"]
    assert ccw.check_contact(ccw.darboux(1))["kind"] == "ExactConstant"


def test_expansion_and_round_trip():
    b = ccw.standard_convex(1, 3)
    assert ccw.expansion_coefficient(b) == "-1"
    assert ccw.round_trip_ok(b)
    assert ccw.field_to_ham(ccw.standard_convex(1, 0)) == "z"
    assert b.dim == 3 and len(b.coordinates) == 3


def test_scan():
    b = ccw.standard_convex(1, 1)
    r = ccw.grad_like_scan(b, grid=5, critical=[["0", "0", "0"]])
    assert r["certified"] and r["best_delta"] > 0 and r["points"] == 125


def test_handles():
    text = (FIXTURES / "decomp_mixed.json").read_text()
    assert ccw.validate_handles(text)["valid"]
    split = ccw.rearrange_split(text)
    assert ccw.rearrange_split(split) == split
    original = {k: v for k, v in json.loads(text).items() if v != []}
    assert json.loads(ccw.dualize(ccw.dualize(text))) == original
    assert ccw.framing_group(1, 2) == "Z"
    with pytest.raises(ccw.CcwError):
        ccw.cancel_pair(text, 0, 0)
    with pytest.raises(ccw.HandleMoveError):
        ccw.cancel_pair(text, 0, 1)


def test_session():
    code, reports = ccw.run("bundle B = catalog stdconvex 1 1\ncheck contact B\nreeb B\n")
    assert code == 0
    assert [r["command"].split()[0] for r in reports] == ["check", "reeb"]
    assert "timing_ms" not in reports[0]
    with pytest.raises(ccw.ParseError):
        ccw.run("check contact\n")
    code, _ = ccw.run((FIXTURES / "session.ccw").read_text(), base_dir=FIXTURES)
    assert code == 0
