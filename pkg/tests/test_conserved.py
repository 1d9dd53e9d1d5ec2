import numpy as np
import pytest

from finsleroid import (
    FinsleroidCharge,
    LineElement,
    ScaleFactor,
    WarpedBackground,
    coefficient_expansion,
    conservation_residuals,
    conserved_bundle,
    curvature_tensors,
    hydrodynamic_pressure_scalar,
    osculated_current,
    rho_tensor,
    skew_part,
    special_case_scalars,
)


def test_special_scalars_consistency(pd_background, pd_charge, pd_elements):
    for le in pd_elements[:3]:
        ss = special_case_scalars(pd_background, pd_charge, le)
        # The assembled current scalar and its closed form agree identically.
        assert ss.P_y == pytest.approx(ss.P, rel=1e-12)


def test_coefficient_expansions(sr_background, sr_charge, sr_elements):
    for le in sr_elements[:3]:
        ce = coefficient_expansion(sr_background, sr_charge, le)
        assert ce.residual_frame_basis < 1e-10
        assert ce.residual_metric_basis < 1e-10
        assert ce.residual_T_relations < 1e-10
        assert ce.residual_T7_consistency < 1e-10


def test_skew_part_closed_forms(pd_background, pd_charge, pd_elements):
    for le in pd_elements[:3]:
        sk = skew_part(pd_background, pd_charge, le)
        assert sk.residual_closed < 1e-10
        assert sk.residual_tensorial < 1e-10
        assert sk.residual_curvature_contraction < 1e-10


def test_skew_vanishes_for_riemannian_charge(pd_background, pd_elements):
    charge = FinsleroidCharge(g=0.0, signature="PD")
    le = pd_elements[0]
    rho_dd, _, _ = rho_tensor(pd_background, charge, le)
    scale = np.max(np.abs(rho_dd)) + 1e-30
    assert np.max(np.abs(rho_dd - rho_dd.T)) < 1e-12 * scale


def test_conservation_residuals(pd_background, pd_charge, pd_elements):
    r = conservation_residuals(pd_background, pd_charge, pd_elements[0])
    assert r["tensor"] < 1e-4
    assert r["current"] < 1e-4


def test_conservation_broken_by_perturbation(pd_background, pd_charge, pd_elements):
    bad = pd_background.with_perturbed_b(0.05)
    le = pd_elements[0]
    r = conservation_residuals(bad, pd_charge, le)
    assert max(r.values()) > 1e-3


def test_osculated_divergence_law(sr_background, sr_charge):
    x = np.array([0.5, 0.2, -0.1, 0.3])
    out = osculated_current(sr_background, sr_charge, x)
    assert out["residual_divergence"] < 1e-5
    assert out["residual_transport"] < 1e-10


def test_pressure_scalar_offset(sr_background, sr_charge):
    # The hydrodynamic scalar and the divergence-law scalar differ by
    # (N-1)/2 g_eff^2 (bkt) by construction.
    x = np.array([0.5, 0.2, -0.1, 0.3])
    out = osculated_current(sr_background, sr_charge, x)
    hydro = hydrodynamic_pressure_scalar(sr_background, sr_charge, x)
    ld = sr_background.landsberg_data(x)
    g2 = float(np.real(sr_charge.g_eff**2))
    offset = 0.5 * (sr_background.N - 1) * g2 * ld.bkt
    assert hydro - out["P_script"] == pytest.approx(offset, rel=1e-10)


def test_conserved_bundle_json(pd_background, pd_charge, pd_elements):
    bundle = conserved_bundle(pd_background, pd_charge, pd_elements[0])
    dump = bundle.to_json_dict()
    assert set(dump) == {"rho_dd", "rho_ud", "rho_u", "scalars", "coefficients", "residuals"}
    assert all(v < 1e-6 for v in dump["residuals"].values())


def test_n5_spot_check():
    bg = WarpedBackground(
        signature="PD", dimension=5, kappa1=1, scale_factor=ScaleFactor.exponential(0.3)
    )
    charge = FinsleroidCharge(g=0.8, signature="PD")
    x = np.array([0.5, 0.1, -0.2, 0.3, 0.05])
    b_con = bg.metric_inverse_at(x) @ bg.b_covector(x)
    y = b_con + np.array([0.0, 0.3, -0.2, 0.1, 0.25])
    le = LineElement(x, y)
    ce = coefficient_expansion(bg, charge, le)
    assert ce.residual_frame_basis < 1e-10
    assert ce.residual_metric_basis < 1e-10
    sk = skew_part(bg, charge, le)
    assert sk.residual_closed < 1e-10
