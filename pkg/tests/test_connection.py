import numpy as np
import pytest

from finsleroid import (
    LineElement,
    connection_coeffs,
    covariant_derivative,
    geodesic_trace_csv,
    integrate_geodesic,
    metric_tensor,
    scalars,
    spray,
    spray_generic,
)


def test_spray_closed_vs_generic(pd_background, pd_charge, pd_elements):
    for le in pd_elements:
        bundle = spray(pd_background, pd_charge, le)
        generic = spray_generic(pd_background, pd_charge, le)
        scale = np.max(np.abs(generic)) + 1e-30
        assert np.max(np.abs(bundle.G - generic)) < 1e-5 * scale


def test_spray_euler_identities(sr_background, sr_charge, sr_elements):
    le = sr_elements[0]
    b = spray(sr_background, sr_charge, le)
    assert np.allclose(b.G1 @ le.y, 2.0 * b.G, rtol=1e-10, atol=1e-12)
    assert np.allclose(b.G2 @ le.y, b.G1, rtol=1e-10, atol=1e-12)
    assert np.allclose(b.G3 @ le.y, 0.0 * b.G2, atol=1e-8 * (np.max(np.abs(b.G2)) + 1.0))


def test_metricity(pd_background, pd_charge, pd_elements):
    le = pd_elements[0]
    coeffs = connection_coeffs(pd_background, pd_charge, le)

    def K_field(xs, ys):
        return scalars(pd_background, pd_charge, LineElement(np.asarray(xs), np.asarray(ys, float))).K

    def g_field(xs, ys):
        return metric_tensor(pd_background, pd_charge, LineElement(np.asarray(xs), np.asarray(ys, float)))[1]

    covK = covariant_derivative(K_field, (), pd_background, pd_charge, le, coeffs=coeffs)
    covg = covariant_derivative(g_field, ("d", "d"), pd_background, pd_charge, le, coeffs=coeffs)
    sc = scalars(pd_background, pd_charge, le)
    assert np.max(np.abs(covK)) < 1e-5 * sc.K
    gmax = np.max(np.abs(metric_tensor(pd_background, pd_charge, le)[1]))
    assert np.max(np.abs(covg)) < 1e-5 * gmax


def test_b_scalar_covariant_derivative(sr_background, sr_charge, sr_elements):
    le = sr_elements[0]
    coeffs = connection_coeffs(sr_background, sr_charge, le)

    def b_field(xs, ys):
        return float(sr_background.b_covector(np.asarray(xs)) @ np.asarray(ys, float))

    covb = covariant_derivative(b_field, (), sr_background, sr_charge, le, coeffs=coeffs)
    sc = scalars(sr_background, sr_charge, le)
    k = sr_background.landsberg_data(le.x).k
    target = k * sc.v_cov
    assert np.max(np.abs(covb - target)) < 1e-5 * (np.max(np.abs(target)) + abs(k))


def test_geodesic_first_integral(pd_background, pd_charge, pd_elements):
    le = pd_elements[0]
    rows = integrate_geodesic(pd_background, pd_charge, le.x, le.y, span=0.3, steps=150)
    K0 = rows[0]["K"]
    drift = max(abs(r["K"] - K0) for r in rows) / K0
    assert drift < 1e-8


def test_geodesic_trace_csv_schema(pd_background, pd_charge, pd_elements):
    le = pd_elements[0]
    rows = integrate_geodesic(pd_background, pd_charge, le.x, le.y, span=0.1, steps=5)
    csv_text = geodesic_trace_csv(rows)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "sigma,x0,x1,x2,x3,y0,y1,y2,y3,K"
    assert len(lines) == 7
