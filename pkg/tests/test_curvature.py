import numpy as np
import pytest

from finsleroid import (
    FinsleroidCharge,
    LineElement,
    ScaleFactor,
    WarpedBackground,
    curvature_tensors,
    cyclic_identity_check,
    deviation_closed,
    deviation_generic,
    scalar_isotropic_closed,
    scalars,
)
from finsleroid.curvature import (
    curvature_three_closed,
    curvature_three_numeric,
    curvature_two_closed,
)


def test_deviation_closed_vs_generic(pd_background, pd_charge, pd_elements):
    for le in pd_elements[:3]:
        closed = deviation_closed(pd_background, pd_charge, le)
        generic = deviation_generic(pd_background, pd_charge, le)
        scale = np.max(np.abs(generic)) + 1e-30
        assert np.max(np.abs(closed - generic)) < 1e-5 * scale


def test_fibre_derivative_chain(sr_background, sr_charge, sr_elements):
    le = sr_elements[0]
    # The full curvature tensor is the exact fibre derivative of the
    # two-index form, and its first-slot y-contraction recovers it.
    r2c = curvature_two_closed(sr_background, sr_charge, le)
    r3c = curvature_three_closed(sr_background, sr_charge, le)
    r3n = curvature_three_numeric(sr_background, sr_charge, le)
    assert np.max(np.abs(r3c - r3n)) < 1e-6 * (np.max(np.abs(r3c)) + 1e-30)
    contr = np.einsum("nikm,n->ikm", r3c, le.y)
    assert np.max(np.abs(contr - r2c)) < 1e-10 * (np.max(np.abs(r2c)) + 1e-30)


def test_curvature_antisymmetry(pd_background, pd_charge, pd_elements):
    le = pd_elements[0]
    r3 = curvature_three_closed(pd_background, pd_charge, le)
    assert np.max(np.abs(r3 + np.einsum("nimk->nikm", r3))) < 1e-12 * np.max(np.abs(r3))


def test_isotropic_scalar(pd_background, pd_charge, pd_elements):
    for le in pd_elements[:3]:
        bundle = curvature_tensors(pd_background, pd_charge, le)
        sc = scalars(pd_background, pd_charge, le)
        iso = scalar_isotropic_closed(pd_background, pd_charge, le)
        assert iso == pytest.approx(sc.K**2 * bundle.scalar, rel=1e-10)


def test_cyclic_identity(sr_background, sr_charge, sr_elements):
    assert cyclic_identity_check(sr_background, sr_charge, sr_elements[0]) < 1e-4


def test_riemannian_de_sitter_limit():
    # g = 0 on an exponential warp: the deviation tensor must agree with the
    # background sectional form y^n a_n^i_km y^m.
    bg = WarpedBackground(kappa1=0, scale_factor=ScaleFactor.exponential(0.4))
    charge = FinsleroidCharge(g=0.0, signature="PD")
    x = np.array([0.5, 0.1, -0.2, 0.3])
    b_con = bg.metric_inverse_at(x) @ bg.b_covector(x)
    y = b_con + np.array([0.0, 0.3, -0.1, 0.2])
    le = LineElement(x, y)
    closed = deviation_closed(bg, charge, le)
    sc = scalars(bg, charge, le)
    expected = np.einsum("n,nikm,m->ik", y, bg.riemann_curvature(x), y) / sc.K**2
    assert np.max(np.abs(closed - expected)) < 1e-12 * (np.max(np.abs(expected)) + 1.0)


def test_bundle_json_dump(pd_background, pd_charge, pd_elements):
    bundle = curvature_tensors(pd_background, pd_charge, pd_elements[0])
    dump = bundle.to_json_dict()
    assert set(dump) >= {"scalar", "mu", "deviation", "sum_tensor", "ricci"}
    assert dump["deviation"]["variance"] == ["u", "d"]
