import json

import numpy as np
import pytest

from finsleroid import (
    ConfigError,
    FinsleroidCharge,
    TOLERANCES,
    VerificationCell,
    run_suite,
    sample_line_elements,
    scalars,
)
from finsleroid.verification import POLE_MARGIN, SECTOR_MARGIN, _record


def test_sampler_respects_margins():
    cell = VerificationCell(signature="SR", g=1.5, samples=0)
    bg, charge = cell.background(), cell.charge()
    rng = np.random.default_rng(11)
    h = np.sqrt(1.0 + 0.25 * charge.g**2)
    for le in sample_line_elements(bg, charge, rng, 30):
        sc = scalars(bg, charge, le)
        assert sc.q >= POLE_MARGIN
        assert sc.b - (0.5 * charge.g + h) * sc.q >= SECTOR_MARGIN


def test_sampler_deterministic():
    cell = VerificationCell(g=0.5)
    bg, charge = cell.background(), cell.charge()
    a = sample_line_elements(bg, charge, np.random.default_rng(5), 4)
    b = sample_line_elements(bg, charge, np.random.default_rng(5), 4)
    for la, lb in zip(a, b):
        assert np.array_equal(la.x, lb.x) and np.array_equal(la.y, lb.y)


def test_record_pass_fail_logic():
    ok = _record("x", "d", [1e-12, 1e-11], "DUAL")
    assert ok.passed and ok.max_residual == 1e-11
    bad = _record("x", "d", [1e-9], "DUAL")
    assert not bad.passed
    control = _record("x", "d", [100 * TOLERANCES["DUAL"]], "DUAL", expect_failure=True)
    assert control.passed
    weak_control = _record("x", "d", [2 * TOLERANCES["DUAL"]], "DUAL", expect_failure=True)
    assert not weak_control.passed


def test_unknown_suite_rejected():
    with pytest.raises(ConfigError):
        run_suite("nope", VerificationCell())


def test_cell_from_config_errors():
    with pytest.raises(ConfigError):
        VerificationCell.from_config({"dimension": "four"})


def test_report_json_shape():
    cell = VerificationCell(samples=3, g=0.5)
    rep = run_suite("metric", cell)
    dump = json.loads(rep.to_json())
    assert dump["suite"] == "metric"
    assert dump["passed"] is True
    ids = [r["identity"] for r in dump["records"]]
    assert len(ids) == len(set(ids))  # each identity appears exactly once
    table = rep.to_table()
    assert "overall: PASS" in table


def test_riemannian_metric_suite_passes():
    rep = run_suite("metric", VerificationCell(samples=10, g=0.0))
    assert rep.passed
