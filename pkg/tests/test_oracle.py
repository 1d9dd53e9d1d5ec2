"""Symbolic-oracle checks: exact identities and fixture round-trips.

These tests exercise the optional ``oracle`` package, which derives every
quantity from the metric function by differentiation rather than from the
closed forms the main library implements.  They are skipped when sympy is
not installed; the installed package never imports the oracle.
"""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sympy = pytest.importorskip("sympy")

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from oracle import derive, generate_fixtures  # noqa: E402

FIXTURES = REPO_ROOT / "oracle" / "fixtures.json"


def test_metric_closed_form_matches_hessian_symbolically():
    residuals = derive.metric_identity_residuals()
    assert residuals, "no residuals returned"
    for name, value in residuals.items():
        assert value == 0, f"metric identity {name} is not identically zero: {value}"


def test_coefficient_relations_hold_symbolically():
    residuals = derive.coefficient_relation_residuals()
    assert set(residuals) == {
        "difference-relation",
        "difference-relation-core",
        "current-scalar-factorization",
    }
    for name, value in residuals.items():
        assert value == 0, f"coefficient relation {name} is not identically zero: {value}"


def test_fixture_file_regenerates_deterministically():
    import json

    import mpmath as mp

    pinned = {
        case["case"]: case
        for case in json.loads(FIXTURES.read_text())["cases"]
    }
    case = next(c for c in generate_fixtures.CASES if c.case == "metric-pd")
    fresh = generate_fixtures.build_case(case)
    stored = pinned["metric-pd"]
    assert fresh["background"] == stored["background"]
    assert fresh["x"] == stored["x"] and fresh["y"] == stored["y"]
    with mp.workdps(50):
        for key, value in fresh["values"].items():
            old, new = stored["values"][key], value
            flat_old = old if isinstance(old, list) else [old]
            flat_new = new if isinstance(new, list) else [new]
            while isinstance(flat_old[0], list):
                flat_old = [c for row in flat_old for c in row]
                flat_new = [c for row in flat_new for c in row]
            for a, b in zip(flat_old, flat_new):
                assert abs(mp.mpf(a) - mp.mpf(b)) <= mp.mpf("1e-35") * (
                    1 + abs(mp.mpf(a))
                ), f"{key} drifted on regeneration"


def test_fixtures_round_trip_through_primary():
    from finsleroid import verification

    records = verification.fixture_records(FIXTURES)
    assert len(records) == len(generate_fixtures.CASES)
    for rec in records:
        assert rec.passed, (
            f"{rec.identity}: residual {rec.max_residual:.3e} exceeds "
            f"tolerance {rec.tolerance:.1e}"
        )


def test_cli_accepts_fixtures_flag(capsys):
    from finsleroid.cli import main

    code = main(
        ["verify", "--suite", "metric", "--samples", "2", "--fixtures", str(FIXTURES)]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "fixture-metric-pd" in out
