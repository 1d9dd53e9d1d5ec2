"""Acceptance gate: every primary identity at its stated tolerance.

Each parametrized case emits one pass/fail line.  Suites run once per
configuration (100 random line elements each) and are cached at module
level; the individual tests only inspect the cached records.
"""

from __future__ import annotations

import functools

import pytest

from finsleroid.verification import VerificationCell, run_suite

CELLS = {
    "pd": VerificationCell(
        signature="PD", dimension=4, kappa1=1,
        scale_family="exponential", scale_params={"H": 0.3},
        g=0.5, samples=100, seed=11,
    ),
    "sr": VerificationCell(
        signature="SR", dimension=4, kappa1=-1,
        scale_family="exponential", scale_params={"H": 0.3},
        g=1.2, samples=100, seed=12,
    ),
    "pd-g0": VerificationCell(
        signature="PD", dimension=4, kappa1=1,
        scale_family="exponential", scale_params={"H": 0.3},
        g=0.0, samples=100, seed=13,
    ),
    "pd-g1": VerificationCell(
        signature="PD", dimension=4, kappa1=0,
        scale_family="power", scale_params={"C": 1.0, "exponent": 0.8},
        g=1.0, samples=100, seed=14,
    ),
    "sr-g2": VerificationCell(
        signature="SR", dimension=4, kappa1=-1,
        scale_family="exponential", scale_params={"H": 0.25},
        g=2.0, samples=100, seed=15,
    ),
    "pd-n5": VerificationCell(
        signature="PD", dimension=5, kappa1=1,
        scale_family="exponential", scale_params={"H": 0.3},
        g=0.8, samples=100, seed=16,
    ),
}


@functools.lru_cache(maxsize=None)
def _report(cell_key: str, suite: str):
    return run_suite(suite, CELLS[cell_key])


def _case(cell_key: str, suite: str, identity: str):
    return pytest.param(cell_key, suite, identity, id=f"{identity}[{cell_key}]")


CASES = [
    # Metric structure: unit norm on the axis, inverse, Hessian form,
    # determinant relation, positive homogeneity, eigenvalue signature.
    *[
        _case(key, "metric", ident)
        for key in ("pd", "sr", "pd-n5")
        for ident in (
            "metric-unit-on-axis",
            "metric-inverse",
            "metric-hessian",
            "metric-determinant",
            "metric-homogeneity",
            "metric-signature",
            "cartan-norm",
            "cartan-closed-vs-numeric",
        )
    ],
    # Connection: spray closed form vs generic route, Euler homogeneity
    # identities, metricity of the covariant derivative, b-scalar gradient.
    *[
        _case(key, "connection", ident)
        for key in ("pd", "sr")
        for ident in (
            "spray-closed-vs-generic",
            "spray-euler-identities",
            "connection-metricity",
            "b-scalar-derivative",
        )
    ],
    # Curvature: deviation tensor closed vs generic, contraction algebra,
    # trace consistency, isotropic scalar, cyclic identity.
    *[
        _case(key, "curvature", ident)
        for key in ("pd", "sr", "pd-n5")
        for ident in (
            "deviation-closed-vs-generic",
            "curvature-contraction-algebra",
            "curvature-trace-consistency",
            "curvature-isotropic-scalar",
            "curvature-cyclic-identity",
        )
    ],
    # Conservation: divergences vanish across the charge sweep
    # g in {0, 0.5, 1, 2} (g = 2 in the SR sector), basis reconstructions,
    # coefficient relations, skew part and its on-axis vanishing.
    *[
        _case(key, "conserved", ident)
        for key in ("pd", "sr", "pd-g0", "pd-g1", "sr-g2", "pd-n5")
        for ident in (
            "conservation-tensor",
            "conservation-current",
            "current-scalar-identity",
            "osculated-divergence",
        )
    ],
    _case("pd-g0", "conserved", "skew-vanishes-riemannian"),
    *[
        _case(key, "conserved", ident)
        for key in ("pd", "sr", "pd-n5")
        for ident in (
            "basis-frame-reconstruction",
            "basis-metric-reconstruction",
            "coefficient-T-relation",
            "skew-closed-forms",
            "skew-axis-vanishing",
        )
    ],
    # Cosmology: Riemannian reduction of the corrected Friedmann system,
    # zero-pressure charge root, density ratio, dust invariant, osculated
    # divergence law, pressure-scalar consistency.
    *[
        _case(key, "cosmo", ident)
        for key in ("pd", "sr")
        for ident in (
            "cosmo-friedmann-reduction",
            "cosmo-zero-pressure-charge",
            "cosmo-density-ratio",
            "cosmo-dust-invariant",
            "cosmo-osculated-divergence",
            "cosmo-pressure-consistency",
        )
    ],
    # Negative controls: a non-Landsberg perturbation must push the
    # Landsberg and conservation residuals above 10x tolerance.
    *[
        _case(key, "controls", ident)
        for key in ("pd", "sr")
        for ident in (
            "control-landsberg-violation",
            "control-conservation-violation",
        )
    ],
]


@pytest.mark.parametrize("cell_key,suite,identity", CASES)
def test_acceptance(cell_key: str, suite: str, identity: str) -> None:
    report = _report(cell_key, suite)
    records = {rec.identity: rec for rec in report.records}
    assert identity in records, (
        f"suite '{suite}' on cell '{cell_key}' produced no record "
        f"'{identity}' (got: {sorted(records)})"
    )
    rec = records[identity]
    assert rec.passed, (
        f"{identity} on cell '{cell_key}': max residual {rec.max_residual:.3e} "
        f"vs {rec.tolerance_class} tolerance {rec.tolerance:.0e}"
        + (" (expected-failure control did not exceed 10x tolerance)"
           if rec.expect_failure else "")
    )
