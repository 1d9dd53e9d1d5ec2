import numpy as np
import pytest

from finsleroid import (
    ConfigError,
    FinsleroidCharge,
    LineElement,
    PoleProximity,
    SectorViolation,
    WarpedBackground,
    cartan,
    classify_sector,
    indicatrix_curvature,
    metric_tensor,
    scalars,
)
from finsleroid.metric import metric_squared_generic
from finsleroid.numerics import derive_y


def test_charge_validation():
    with pytest.raises(ConfigError):
        FinsleroidCharge(g=2.0, signature="PD")  # PD demands |g| < 2
    with pytest.raises(ConfigError):
        FinsleroidCharge(g=1.0, signature="XX")
    FinsleroidCharge(g=3.0, signature="SR")  # any g admissible relativistically


def test_g_eff_square_real():
    pd = FinsleroidCharge(g=0.8, signature="PD")
    sr = FinsleroidCharge(g=0.8, signature="SR")
    assert (pd.g_eff**2).real == pytest.approx(0.64)
    assert (sr.g_eff**2).real == pytest.approx(-0.64)
    assert abs((pd.g_eff**2).imag) == 0.0
    assert abs((sr.g_eff**2).imag) == 0.0


def test_metric_is_one_on_axis(pd_background, pd_charge):
    x = np.array([0.4, 0.1, -0.2, 0.05])
    b_con = pd_background.metric_inverse_at(x) @ pd_background.b_covector(x)
    sc = scalars(pd_background, pd_charge, LineElement(x, b_con))
    assert sc.K == pytest.approx(1.0, abs=1e-14)
    assert sc.q == 0.0


def test_pole_band_rejected(pd_background, pd_charge):
    x = np.array([0.4, 0.0, 0.0, 0.0])
    b_con = pd_background.metric_inverse_at(x) @ pd_background.b_covector(x)
    y = b_con.copy()
    y[1] += 1e-6  # inside the pole exclusion band but off the axis
    with pytest.raises(PoleProximity):
        scalars(pd_background, pd_charge, LineElement(x, y))


def test_sr_sector_violation(sr_background, sr_charge):
    x = np.array([0.4, 0.0, 0.0, 0.0])
    y = np.array([0.1, 1.0, 0.0, 0.0])  # space-like direction
    with pytest.raises(SectorViolation):
        scalars(sr_background, sr_charge, LineElement(x, y))


def test_metric_hessian_identity(pd_background, pd_charge, pd_elements):
    for le in pd_elements:
        _, g_dd, _, _ = metric_tensor(pd_background, pd_charge, le)
        hess = 0.5 * derive_y(
            lambda xs, ys: metric_squared_generic(pd_background, pd_charge, xs, ys),
            le.x,
            le.y,
            order=2,
        ).array
        assert np.max(np.abs(hess - g_dd)) < 1e-10 * np.max(np.abs(g_dd))


def test_sr_signature(sr_background, sr_charge, sr_elements):
    for le in sr_elements:
        _, g_dd, _, _ = metric_tensor(sr_background, sr_charge, le)
        eigs = np.sort(np.linalg.eigvalsh(g_dd))
        assert eigs[-1] > 0 and np.all(eigs[:-1] < 0)


def test_cartan_norm(pd_background, pd_charge, pd_elements):
    for le in pd_elements:
        A_d, A_u, norm, _ = cartan(pd_background, pd_charge, le)
        target = 16 * pd_charge.g**2 / 4.0  # N^2 g^2 / 4 at N = 4
        assert float(A_d @ A_u) == pytest.approx(target, rel=1e-12)


def test_cartan_norm_sr_sign(sr_background, sr_charge, sr_elements):
    le = sr_elements[0]
    A_d, A_u, _, _ = cartan(sr_background, sr_charge, le)
    target = -16 * sr_charge.g**2 / 4.0
    assert float(A_d @ A_u) == pytest.approx(target, rel=1e-12)


def test_riemannian_degeneration(pd_background, pd_elements):
    riem = FinsleroidCharge(g=0.0, signature="PD")
    for le in pd_elements:
        sc = scalars(pd_background, riem, le)
        _, g_dd, _, _ = metric_tensor(pd_background, riem, le)
        a = pd_background.metric_at(le.x)
        assert np.max(np.abs(g_dd - a)) < 1e-12 * np.max(np.abs(a))
        assert sc.K**2 == pytest.approx(float(le.y @ a @ le.y), rel=1e-12)


def test_indicatrix_curvature_signs():
    pd = FinsleroidCharge(g=1.0, signature="PD")
    sr = FinsleroidCharge(g=1.0, signature="SR")
    assert indicatrix_curvature(pd) == pytest.approx(1.0 - 0.25)
    assert indicatrix_curvature(sr) == pytest.approx(-(1.0 + 0.25))


def test_classify_sector(sr_background, sr_charge, sr_elements):
    assert classify_sector(sr_background, sr_charge, sr_elements[0]) == "S+"
