"""Spray coefficients, connection coefficients, covariant derivative, osculation.

The spray has a closed form on Landsberg-compatible (warped) backgrounds:

    G^m = sgn * k g q v^m + a^m_{jn} y^j y^n,

with ``sgn = +1`` (PD) / ``-1`` (SR); its fibre derivatives are obtained by
exact dual-number differentiation of this expression.  The generic spray is
built from base-derivatives of the fibre metric and serves as the independent
cross-check.

The connection coefficients follow the conventional rule

    Gamma^k_ij = gamma^k_ij - Gbar^n_i C_n{}^k{}_j - Gbar^n_j C_n{}^k{}_i
                 + Gbar^{kn} C_{nij},

with C the Cartan tensor over the metric function and Gbar^n_i half the spray
derivative; the horizontal covariant derivative built from them annihilates
the metric function, the support vector, and the fibre metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .background import WarpedBackground
from .metric import (
    FinsleroidCharge,
    LineElement,
    _check_compatible,
    _scalar_chain,
    cartan,
    metric_function,
    metric_tensor,
    scalars,
)
from .numerics import (
    DEFAULT_DIFF,
    DiffConfig,
    HomogeneityViolation,
    derive_x,
    derive_y,
    sqrt,
)

__all__ = [
    "SprayBundle",
    "ConnectionCoeffs",
    "spray",
    "spray_generic",
    "spray_components",
    "connection_coeffs",
    "covariant_derivative",
    "osculate",
    "integrate_geodesic",
    "geodesic_trace_csv",
]

_CENTRAL = DiffConfig(mode="central")


@dataclass(frozen=True)
class SprayBundle:
    """Spray coefficients and their fibre derivatives at a line element."""

    G: np.ndarray  # G^i
    G1: np.ndarray  # G^i_k
    G2: np.ndarray  # G^i_{km}
    G3: np.ndarray  # G^i_{kmn}

    @property
    def Gbar(self) -> np.ndarray:
        return 0.5 * self.G

    @property
    def Gbar1(self) -> np.ndarray:
        return 0.5 * self.G1

    @property
    def Gbar2(self) -> np.ndarray:
        return 0.5 * self.G2

    def euler_residuals(self, y: np.ndarray) -> dict[str, float]:
        """Max-norm residuals of the degree-two homogeneity identities."""
        scale = float(np.max(np.abs(self.G1))) + 1e-30
        return {
            "G1_contract": float(np.max(np.abs(self.G1 @ y - 2.0 * self.G))) / scale,
            "G2_contract": float(np.max(np.abs(self.G2 @ y - self.G1))) / scale,
            "G3_contract": float(np.max(np.abs(self.G3 @ y))) / scale,
        }


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Connection coefficients at a line element (symmetric lower pair)."""

    Gamma: np.ndarray  # Gamma^k_{ij}
    Gbar1: np.ndarray  # Gbar^n_i


def spray_components(
    bg: WarpedBackground, charge: FinsleroidCharge, x, y: Sequence
):
    """Closed-form spray G^m; accepts dual fibre components."""
    _check_compatible(bg, charge)
    a_gam = bg.riemann_connection(np.asarray(x, dtype=float))
    ld = bg.landsberg_data(np.asarray(x, dtype=float))
    _, _, _, b, v_con, _, vv = _scalar_chain(bg, charge, x, y)
    n = bg.N
    sgn = 1.0 if charge.signature == "PD" else -1.0
    q = sqrt(sgn * vv)
    coeff = sgn * ld.k * charge.g * q
    riem = [
        sum(a_gam[m, j, k] * y[j] * y[k] for j in range(n) for k in range(n))
        for m in range(n)
    ]
    return [coeff * v_con[m] + riem[m] for m in range(n)]


def spray(
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    le: LineElement,
    config: DiffConfig = DEFAULT_DIFF,
) -> SprayBundle:
    """Closed-form spray bundle with exact fibre derivatives up to third order."""
    sc = scalars(bg, charge, le)  # validates sector / pole band
    del sc
    field = lambda xs, ys: spray_components(bg, charge, xs, ys)
    G = np.array(
        [float(v) for v in spray_components(bg, charge, le.x, list(le.y))]
    )
    G1 = derive_y(field, le.x, le.y, order=1, config=config).array
    G2 = derive_y(field, le.x, le.y, order=2, config=config).array
    G3 = derive_y(field, le.x, le.y, order=3, config=config).array
    return SprayBundle(G=G, G1=G1, G2=G2, G3=G3)


def spray_generic(
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    le: LineElement,
    config: DiffConfig = DEFAULT_DIFF,
) -> np.ndarray:
    """Generic spray G^k = gamma^k_{ij} y^i y^j from base-derivatives of g_ij."""
    gamma = finsler_gamma(bg, charge, le, config=config)
    return np.einsum("kij,i,j->k", gamma, le.y, le.y)


def finsler_gamma(
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    le: LineElement,
    config: DiffConfig = DEFAULT_DIFF,
) -> np.ndarray:
    """Formal Christoffel symbols gamma^k_{ij} of the fibre metric."""
    _, _, g_uu, _ = metric_tensor(bg, charge, le)
    dg = derive_x(
        lambda xs: metric_tensor(bg, charge, LineElement(xs, le.y))[1],
        le.x,
        config=config,
    ).array  # dg[n, i, j] = d_j g_ni
    low = 0.5 * (
        np.einsum("nij->inj", dg) + np.einsum("nji->inj", dg) - np.einsum("jin->inj", dg)
    )  # gamma_inj
    return np.einsum("kn,inj->kij", g_uu, low)


def connection_coeffs(
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    le: LineElement,
    config: DiffConfig = DEFAULT_DIFF,
) -> ConnectionCoeffs:
    """Connection coefficients Gamma^k_{ij} by the conventional rule."""
    gamma = finsler_gamma(bg, charge, le, config=config)
    bundle = spray(bg, charge, le)
    Gbar1 = bundle.Gbar1
    sc = scalars(bg, charge, le)
    _, _, g_uu, _ = metric_tensor(bg, charge, le)
    _, _, _, A_ddd = cartan(bg, charge, le)
    C_ddd = A_ddd / sc.K
    C_dud = np.einsum("km,nmj->nkj", g_uu, C_ddd)
    Gbar_uu = np.einsum("km,nm->kn", g_uu, Gbar1)  # Gbar^{kn}
    Gamma = (
        gamma
        - np.einsum("ni,nkj->kij", Gbar1, C_dud)
        - np.einsum("nj,nki->kij", Gbar1, C_dud)
        + np.einsum("kn,nij->kij", Gbar_uu, C_ddd)
    )
    return ConnectionCoeffs(Gamma=Gamma, Gbar1=Gbar1)


def covariant_derivative(
    field: Callable[[np.ndarray, np.ndarray], np.ndarray],
    variance: tuple[str, ...],
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    le: LineElement,
    config: DiffConfig = DEFAULT_DIFF,
    coeffs: ConnectionCoeffs | None = None,
) -> np.ndarray:
    """Horizontal covariant derivative of a tensor field over line elements.

    ``field(x, y)`` returns a tensor with the given per-axis variance; the
    result appends the (covariant) derivative axis last:

        T_{...|j} = d_j T - Gbar^h_j dT/dy^h  (+/-) Gamma terms per axis.
    """
    if coeffs is None:
        coeffs = connection_coeffs(bg, charge, le, config=config)
    dx = derive_x(lambda xs: field(xs, le.y), le.x, config=config).array
    dy = derive_y(
        lambda xs, ys: field(np.asarray(xs), np.asarray(ys, dtype=float)),
        le.x,
        le.y,
        order=1,
        config=_CENTRAL,
    ).array
    out = dx - np.einsum("...h,hj->...j", dy, coeffs.Gbar1)
    base = np.asarray(field(le.x, le.y), dtype=float)
    rank = base.ndim
    for axis, var in enumerate(variance):
        # Move the contracted axis to the front, apply Gamma, move back.
        moved = np.moveaxis(base, axis, 0)
        if var == "u":
            corr = np.einsum("inj,n...->i...j", coeffs.Gamma, moved)
        else:
            corr = -np.einsum("nij,n...->i...j", coeffs.Gamma, moved)
        out += np.moveaxis(corr, 0, axis)
    return out


def osculate(
    field: Callable[[np.ndarray, np.ndarray], np.ndarray],
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    x: np.ndarray,
    config: DiffConfig = DEFAULT_DIFF,
    homogeneity_tol: float = 1e-8,
):
    """Evaluate a degree-one homogeneous current along y = b(x).

    Returns ``(rho_b, gamma_b, divergence, relation_residual)`` where the
    relation residual measures

        div(rho_b) - [ b^i d_i gamma_b + (N-1) k gamma_b ]

    and is meaningful when the osculated field is parallel to b^i (the scalar
    gamma_b is its coefficient).
    """
    x = np.asarray(x, dtype=float)
    frame = bg.b_frame(x)
    b_con = frame.b_con
    rho_b = np.asarray(field(x, b_con), dtype=float)
    lam = 2.0
    scaled = np.asarray(field(x, lam * b_con), dtype=float)
    scale = float(np.max(np.abs(rho_b))) + 1e-30
    if np.max(np.abs(scaled - lam * rho_b)) > homogeneity_tol * max(scale, 1.0):
        raise HomogeneityViolation(
            "field is not positively homogeneous of degree one along the axis"
        )

    def osculated(xs: np.ndarray) -> np.ndarray:
        return np.asarray(field(xs, bg.b_frame(xs).b_con), dtype=float)

    drho = derive_x(osculated, x, config=config).array  # [i, j] = d_j rho^i
    a_gam = bg.riemann_connection(x)
    divergence = float(np.trace(drho)) + float(
        np.einsum("iik,k->", a_gam, rho_b)
    )

    gamma_b = float(rho_b @ frame.b_cov)

    def gamma_scalar(xs: np.ndarray) -> float:
        fr = bg.b_frame(xs)
        return float(np.asarray(field(xs, fr.b_con), dtype=float) @ fr.b_cov)

    dgam = derive_x(gamma_scalar, x, config=config).array
    ld = bg.landsberg_data(x)
    expected = float(b_con @ dgam) + (bg.N - 1) * ld.k * gamma_b
    return rho_b, gamma_b, divergence, divergence - expected


# ---------------------------------------------------------------------------
# Geodesics
# ---------------------------------------------------------------------------


def integrate_geodesic(
    bg: WarpedBackground,
    charge: FinsleroidCharge,
    x0: np.ndarray,
    y0: np.ndarray,
    span: float,
    steps: int,
) -> list[dict]:
    """Fixed-step RK4 integration of the geodesic system (x' = y, y' = -G).

    Each row carries the affine parameter, the state, and the metric function
    value (a first integral, monitored for drift).
    """
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    h = span / steps
    rows = []

    def rhs(xv, yv):
        G = np.array(
            [float(c) for c in spray_components(bg, charge, xv, list(yv))]
        )
        return yv, -G

    for i in range(steps + 1):
        sigma = i * h
        rows.append(
            {
                "sigma": sigma,
                "x": x.copy(),
                "y": y.copy(),
                "K": metric_function(bg, charge, LineElement(x, y)),
            }
        )
        if i == steps:
            break
        k1x, k1y = rhs(x, y)
        k2x, k2y = rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y)
        k3x, k3y = rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y)
        k4x, k4y = rhs(x + h * k3x, y + h * k3y)
        x = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y)
    return rows


def geodesic_trace_csv(rows: list[dict]) -> str:
    """Serialize a geodesic trace as CSV (sigma, coordinates, fibre, K)."""
    n = len(rows[0]["x"])
    header = (
        ["sigma"]
        + [f"x{i}" for i in range(n)]
        + [f"y{i}" for i in range(n)]
        + ["K"]
    )
    lines = [",".join(header)]
    for row in rows:
        vals = (
            [row["sigma"]]
            + list(row["x"])
            + list(row["y"])
            + [row["K"]]
        )
        lines.append(",".join(f"{v:.12g}" for v in vals))
    return "\n".join(lines) + "\n"
