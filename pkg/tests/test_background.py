import json

import numpy as np
import pytest

from finsleroid import ConfigError, ScaleFactor, WarpedBackground, load_background
from finsleroid.numerics import ChartBoundary


def test_constructor_validation():
    with pytest.raises(ConfigError):
        WarpedBackground(signature="QQ")
    with pytest.raises(ConfigError):
        WarpedBackground(kappa1=2)
    with pytest.raises(ConfigError):
        WarpedBackground(dimension=1)


def test_from_config_roundtrip(tmp_path):
    cfg = {
        "signature": "SR",
        "dimension": 5,
        "kappa1": -1,
        "scale_factor": {"family": "power", "params": {"C": 2.0, "exponent": 0.5}},
    }
    path = tmp_path / "bg.json"
    path.write_text(json.dumps(cfg))
    bg = load_background(path)
    assert bg.signature == "SR" and bg.N == 5 and bg.kappa1 == -1
    assert bg.scale_factor.L(4.0) == pytest.approx(4.0)


def test_chart_boundary_open_slices():
    bg = WarpedBackground(kappa1=-1)
    with pytest.raises(ChartBoundary):
        bg.metric_at(np.array([0.1, 2.5, 0.0, 0.0]))  # |z|^2 >= 4


def test_b_field_unit_and_frame():
    bg = WarpedBackground(kappa1=1, scale_factor=ScaleFactor.exponential(0.2))
    x = np.array([0.3, 0.2, -0.1, 0.4])
    fr = bg.b_frame(x)
    assert float(fr.b_cov @ fr.b_con) == pytest.approx(1.0, abs=1e-14)
    a = bg.metric_at(x)
    assert np.allclose(fr.r_proj, a - np.outer(fr.b_cov, fr.b_cov), atol=1e-14)


@pytest.mark.parametrize("kappa1", [-1, 0, 1])
@pytest.mark.parametrize("signature", ["PD", "SR"])
def test_landsberg_property_clean(kappa1, signature):
    bg = WarpedBackground(
        signature=signature, kappa1=kappa1, scale_factor=ScaleFactor.exponential(0.3)
    )
    x = np.array([0.5, 0.2, -0.3, 0.1])
    report = bg.landsberg_check(x)
    assert max(abs(v) for v in report.values()) < 1e-6


def test_landsberg_property_broken_by_perturbation():
    bg = WarpedBackground(kappa1=0, scale_factor=ScaleFactor.exponential(0.3))
    bad = bg.with_perturbed_b(0.05)
    x = np.array([0.5, 0.2, -0.3, 0.1])
    clean = max(abs(v) for v in bg.landsberg_check(x).values())
    broken = max(abs(v) for v in bad.landsberg_check(x).values())
    assert broken > 1e3 * max(clean, 1e-12)


def test_riemann_curvature_matches_numeric():
    bg = WarpedBackground(kappa1=1, scale_factor=ScaleFactor.exponential(0.3))
    x = np.array([0.5, 0.2, -0.3, 0.1])
    closed = bg.riemann_curvature(x)
    numeric = bg.riemann_curvature_numeric(x)
    assert np.max(np.abs(closed - numeric)) < 1e-5 * (np.max(np.abs(closed)) + 1.0)


def test_isotropic_xi_sign_convention():
    # PD: xi = -k^2 + kappa1 / L^2; SR: xi = -k^2 - kappa1 / L^2.
    for sig, sign in (("PD", 1.0), ("SR", -1.0)):
        bg = WarpedBackground(
            signature=sig, kappa1=1, scale_factor=ScaleFactor.exponential(0.3)
        )
        x = np.array([0.5, 0.2, -0.3, 0.1])
        k = bg.landsberg_data(x).k
        L = bg.scale_factor.L(x[0])
        assert bg.isotropic_xi(x) == pytest.approx(-k * k + sign / L**2, rel=1e-12)
