"""The Finsleroid--Finsler metric function and its fibre tensors.

Two signatures are supported:

* ``PD`` (positive-definite), metric function ``K``, defined for charge
  ``|g| < 2``;
* ``SR`` (relativistic / time--space), metric function ``F``, defined for any
  real ``g`` and evaluated in the time-like sector ``S+`` only.

Every closed form is implemented once, in its positive-definite shape.  The
relativistic value is obtained by evaluating the rational structure at the
imaginary substitution ``g -> i g``, ``q -> i q`` (which flips the quadratic
form ``B`` to its relativistic shape automatically) and taking the real part,
while the positive conformal prefactor ``K^2/B`` is computed per signature.
The imaginary residue of every such evaluation is asserted to be numerical
noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .background import WarpedBackground
from .numerics import (
    ConfigError,
    PoleProximity,
    SectorViolation,
    arctan,
    exp,
    log,
    real_if_close,
    sqrt,
    value,
)

__all__ = [
    "EPS_POLE",
    "LineElement",
    "FinsleroidCharge",
    "FinsleroidScalars",
    "SECTOR_LABELS",
    "scalars",
    "metric_function",
    "metric_function_generic",
    "metric_squared_generic",
    "metric_tensor",
    "cartan",
    "indicatrix_curvature",
    "classify_sector",
]

#: Pole exclusion band: line elements with q < EPS_POLE * S are rejected for
#: fibre-tensor work (the geometry is C^2 but not C^3 on the axis).
EPS_POLE = 1e-4

#: Tolerance below which q/S is treated as exactly on the axis.
_AXIS_EPS = 1e-12

SECTOR_LABELS = ("S+", "Sigma+", "R+", "R0", "R-", "Sigma-", "S-")


@dataclass(frozen=True)
class LineElement:
    """A base point together with a supported tangent vector."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.shape != self.y.shape:
            raise ConfigError("x and y must have the same dimension")


@dataclass(frozen=True)
class FinsleroidCharge:
    """The scalar deformation parameter g and its signature-derived constants."""

    g: float
    signature: str = "PD"

    def __post_init__(self) -> None:
        if self.signature not in ("PD", "SR"):
            raise ConfigError(f"signature must be 'PD' or 'SR', got {self.signature!r}")
        if self.signature == "PD" and not -2.0 < self.g < 2.0:
            raise ConfigError(
                f"positive-definite charge must satisfy |g| < 2, got g = {self.g}"
            )

    @property
    def h(self) -> float:
        if self.signature == "PD":
            return math.sqrt(1.0 - self.g * self.g / 4.0)
        return math.sqrt(1.0 + self.g * self.g / 4.0)

    @property
    def G(self) -> float:
        return self.g / self.h

    @property
    def g_eff(self) -> complex:
        """Charge entering the signature-agnostic rational closed forms."""
        return complex(self.g) if self.signature == "PD" else 1j * self.g

    # Root data of the quadratic form B (relativistic factorization).
    @property
    def g_plus(self) -> float:
        if self.signature == "PD":
            return self.g / 2.0 + self.h
        return -self.g / 2.0 + self.h

    @property
    def g_minus(self) -> float:
        if self.signature == "PD":
            return self.g / 2.0 - self.h
        return -self.g / 2.0 - self.h

    @property
    def g_up_plus(self) -> float:
        return 1.0 / self.g_plus

    @property
    def g_up_minus(self) -> float:
        return 1.0 / self.g_minus

    @property
    def G_plus(self) -> float:
        return self.g_plus / self.h

    @property
    def G_minus(self) -> float:
        return self.g_minus / self.h


@dataclass(frozen=True)
class FinsleroidScalars:
    """The auxiliary scalar bundle at a line element.

    ``axis`` marks line elements lying exactly on the b-axis (q = 0), where
    the limits b-dependent quantities take are stored and the axial vector
    ``e_i`` is undefined (None).
    """

    b: float
    q: float
    S: float
    B: float
    L: float
    A: float
    J: float
    f: float
    w: float
    K: float
    v_con: np.ndarray
    v_cov: np.ndarray
    e_cov: np.ndarray | None
    axis: bool


def _check_compatible(bg: WarpedBackground, charge: FinsleroidCharge) -> None:
    if bg.signature != charge.signature:
        raise ConfigError(
            f"background signature {bg.signature} != charge signature {charge.signature}"
        )


# ---------------------------------------------------------------------------
# Scalar chain (dual-capable)
# ---------------------------------------------------------------------------


def _scalar_chain(bg: WarpedBackground, charge: FinsleroidCharge, x, y: Sequence):
    """Compute (b, q, vv, v_con, v_cov, a, b_cov, b_con) with dual-capable y."""
    a = bg.metric_at(x)
    b_cov = bg.b_covector(x)
    b_con = bg.metric_inverse_at(x) @ b_cov
    n = bg.N
    b = sum(b_cov[i] * y[i] for i in range(n))
    v_con = [y[i] - b * b_con[i] for i in range(n)]
    v_cov = [sum(a[i, j] * v_con[j] for j in range(n)) for i in range(n)]
    vv = sum(v_cov[i] * v_con[i] for i in range(n))
    return a, b_cov, b_con, b, v_con, v_cov, vv


def metric_squared_generic(bg: WarpedBackground, charge: FinsleroidCharge, x, y: Sequence):
    """K^2 (or F^2) evaluated through plain arithmetic; accepts dual components.

    This is the field every fibre-derivative oracle differentiates; it never
    consults a closed-form tensor.
    """
    _check_compatible(bg, charge)
    _, _, _, b, _, _, vv = _scalar_chain(bg, charge, x, y)
    g = charge.g
    h = charge.h
    if charge.signature == "PD":
        q = sqrt(vv)
        B = b * b + g * q * b + q * q
        if g == 0.0:
            return B
        G = charge.G
        Lq = q + 0.5 * g * b
        f = -arctan(0.5 * G) + arctan(Lq / (h * b))
        if value(b) <= 0.0:
            f = f + math.pi
        return B * exp(-G * f)
    # Relativistic sector S+: both factors positive.
    q = sqrt(-vv)
    fac_minus = b + charge.g_minus * q
    fac_plus = b + charge.g_plus * q
    if value(fac_minus) <= 0.0 or value(fac_plus) <= 0.0:
        raise SectorViolation("relativistic evaluation requires the S+ sector")
    return exp(charge.G_plus * log(fac_minus) - charge.G_minus * log(fac_plus))


def metric_function_generic(bg: WarpedBackground, charge: FinsleroidCharge, x, y: Sequence):
    """K (or F) through plain arithmetic; accepts dual components."""
    return sqrt(metric_squared_generic(bg, charge, x, y))


# ---------------------------------------------------------------------------
# Scalars at a concrete line element
# ---------------------------------------------------------------------------


def scalars(
    bg: WarpedBackground, charge: FinsleroidCharge, le: LineElement
) -> FinsleroidScalars:
    """The auxiliary scalar bundle (b, q, S, B, L, A, J, f, w, K, v, e)."""
    _check_compatible(bg, charge)
    if not np.any(le.y):
        raise PoleProximity("scalars undefined at y = 0")
    _, _, _, b, v_con, v_cov, vv = _scalar_chain(bg, charge, le.x, list(le.y))
    g, h = charge.g, charge.h
    sr = charge.signature == "SR"

    S2 = b * b - vv if sr else b * b + vv
    qq = -vv if sr else vv
    if qq < 0.0:
        qq = 0.0 if abs(qq) < _AXIS_EPS * S2 else qq
    if sr and (S2 <= 0.0 or qq < 0.0):
        raise SectorViolation("line element outside the time-like region")
    S = math.sqrt(S2)
    q = math.sqrt(max(qq, 0.0))
    axis = q <= _AXIS_EPS * S
    if axis:
        q = 0.0
    elif q < EPS_POLE * S:
        raise PoleProximity(
            f"q/S = {q / S:.3e} inside the pole exclusion band ({EPS_POLE:g})"
        )

    if sr:
        if classify_from_bq(charge, b, q, S) != "S+":
            raise SectorViolation("relativistic line element outside sector S+")
        B = b * b - g * q * b - q * q
        Lq = q + 0.5 * g * b
        A = b - 0.5 * g * q
        fac_minus = b + charge.g_minus * q
        fac_plus = b + charge.g_plus * q
        J = math.exp(-0.25 * charge.G * (math.log(fac_minus) - math.log(fac_plus)))
        f = float("nan")  # the arctan angle is a positive-definite construct
        F2 = B * J * J
        K = math.sqrt(F2)
    else:
        B = b * b + g * q * b + q * q
        Lq = q + 0.5 * g * b
        A = b + 0.5 * g * q
        if axis:
            f = 0.0 if b > 0.0 else math.pi
        else:
            f = -math.atan(0.5 * charge.G) + (
                math.atan(Lq / (h * b)) if b != 0.0 else 0.5 * math.pi
            )
            if b < 0.0:
                f += math.pi
        J = math.exp(-0.5 * charge.G * f)
        K = math.sqrt(B) * J

    w = q / b if b != 0.0 else math.inf
    e_cov = None
    if not axis:
        b_cov = bg.b_covector(le.x)
        e_cov = -b_cov + (b / (q * q)) * np.array([value(c) for c in v_cov])
    return FinsleroidScalars(
        b=float(b),
        q=float(q),
        S=float(S),
        B=float(B),
        L=float(Lq),
        A=float(A),
        J=float(J),
        f=float(f),
        w=float(w),
        K=float(K),
        v_con=np.array([value(c) for c in v_con], dtype=float),
        v_cov=np.array([value(c) for c in v_cov], dtype=float),
        e_cov=e_cov,
        axis=axis,
    )


def metric_function(bg: WarpedBackground, charge: FinsleroidCharge, le: LineElement) -> float:
    """The Finsleroid metric function K (PD) or F (SR) at the line element."""
    return scalars(bg, charge, le).K


# ---------------------------------------------------------------------------
# Metric tensor and Cartan tensor (closed forms)
# ---------------------------------------------------------------------------


def metric_tensor(bg: WarpedBackground, charge: FinsleroidCharge, le: LineElement):
    """Closed-form (y_i, g_ij, g^ij, h_ij) at the line element."""
    sc = scalars(bg, charge, le)
    a = bg.metric_at(le.x)
    a_inv = bg.metric_inverse_at(le.x)
    frame = bg.b_frame(le.x)
    b_d, b_u = frame.b_cov, frame.b_con
    n = bg.N
    K2 = sc.K * sc.K
    J2 = sc.J * sc.J

    if sc.axis:
        # Axial limit: the fibre metric osculates the background metric.
        y_cov = a @ le.y
        return y_cov, a.copy(), a_inv.copy(), a - np.outer(y_cov, y_cov) / K2

    ge = charge.g_eff
    qe = sc.q if charge.signature == "PD" else 1j * sc.q
    b, v_d, v_u = sc.b, sc.v_cov, sc.v_con
    Be = b * b + ge * qe * b + qe * qe
    scale = float(np.max(np.abs(a))) + 1.0

    # y_i = (v_i + (b + g q) b_i) K^2 / B
    bgq = real_if_close(b + ge * qe, 1e-9, abs(b) + sc.q)
    y_cov = (v_d + bgq * b_d) * (K2 / sc.B)

    # g_ij = [a_ij + (g/B)(q(b+gq) b_i b_j + q(b_i v_j + b_j v_i) - b v_i v_j / q)] K^2/B
    coeff_bb = real_if_close(ge * qe * (b + ge * qe) / Be, 1e-9, scale)
    coeff_bv = real_if_close(ge * qe / Be, 1e-9, scale)
    coeff_vv = real_if_close(-ge * b / (qe * Be), 1e-9, scale)
    sym_bv = np.outer(b_d, v_d) + np.outer(v_d, b_d)
    g_dd = (a + coeff_bb * np.outer(b_d, b_d) + coeff_bv * sym_bv + coeff_vv * np.outer(v_d, v_d)) * J2

    # g^ij = [a^ij + (g/B)(-bq b^i b^j - q(b^i v^j + b^j v^i) + (b+gq) v^i v^j / q)] B/K^2
    icoeff_bb = real_if_close(-ge * b * qe / Be, 1e-9, scale)
    icoeff_bv = real_if_close(-ge * qe / Be, 1e-9, scale)
    icoeff_vv = real_if_close(ge * (b + ge * qe) / (qe * Be), 1e-9, scale)
    sym_bv_u = np.outer(b_u, v_u) + np.outer(v_u, b_u)
    g_uu = (a_inv + icoeff_bb * np.outer(b_u, b_u) + icoeff_bv * sym_bv_u + icoeff_vv * np.outer(v_u, v_u)) / J2

    h_dd = g_dd - np.outer(y_cov, y_cov) / K2
    return y_cov, g_dd, g_uu, h_dd


def cartan(bg: WarpedBackground, charge: FinsleroidCharge, le: LineElement):
    """Closed-form Cartan data (A_i, A^i, A_h A^h, A_ijk) at the line element."""
    sc = scalars(bg, charge, le)
    if sc.axis:
        raise PoleProximity("Cartan tensor is singular on the b-axis (q = 0)")
    frame = bg.b_frame(le.x)
    b_d, b_u = frame.b_cov, frame.b_con
    n = bg.N
    ge = charge.g_eff
    qe = sc.q if charge.signature == "PD" else 1j * sc.q
    b = sc.b
    Be = b * b + ge * qe * b + qe * qe
    K = sc.K
    scale = 1.0 + abs(b) + sc.q

    # A_i = (N K / 2) (g / (q B)) (q^2 b_i - b v_i)
    c_b = real_if_close(ge * qe / Be, 1e-9, scale)
    c_v = real_if_close(-ge * b / (qe * Be), 1e-9, scale)
    A_d = 0.5 * n * K * (c_b * b_d + c_v * sc.v_cov)

    # A^i = (N g / (2 q K)) [q^2 b^i - (b + gq) v^i]
    cu_b = real_if_close(ge * qe / 2.0, 1e-9, scale)
    cu_v = real_if_close(-ge * (b + ge * qe) / (2.0 * qe), 1e-9, scale)
    A_u = (n / K) * (cu_b * b_u + cu_v * sc.v_con)

    norm = real_if_close(n * n * ge * ge / 4.0, 1e-12, 1.0 + charge.g**2)

    _, g_dd, _, h_dd = metric_tensor(bg, charge, le)
    if charge.g == 0.0:
        A_ddd = np.zeros((n, n, n))
    else:
        A_ddd = (
            np.einsum("ij,k->ijk", h_dd, A_d)
            + np.einsum("ik,j->ijk", h_dd, A_d)
            + np.einsum("jk,i->ijk", h_dd, A_d)
            - np.einsum("i,j,k->ijk", A_d, A_d, A_d) / norm
        ) / n
    return A_d, A_u, norm, A_ddd


def indicatrix_curvature(charge: FinsleroidCharge, signature: str | None = None) -> float:
    """Constant curvature of the indicatrix for the given charge."""
    sig = signature or charge.signature
    if sig == "PD":
        return 1.0 - charge.g * charge.g / 4.0
    return -(1.0 + charge.g * charge.g / 4.0)


# ---------------------------------------------------------------------------
# Relativistic sector classification
# ---------------------------------------------------------------------------


def classify_from_bq(charge: FinsleroidCharge, b: float, q: float, scale: float) -> str:
    """Sector label from the raw (b, q) pair; ``scale`` sets the equality band."""
    upper = -charge.g_minus * q  # g/2 + h > 0 times q
    lower = -charge.g_plus * q  # g/2 - h < 0 times q
    tol = 1e-12 * max(scale, 1.0)
    if b > upper + tol:
        return "S+"
    if abs(b - upper) <= tol:
        return "Sigma+"
    if b > tol:
        return "R+"
    if abs(b) <= tol:
        return "R0"
    if b > lower + tol:
        return "R-"
    if abs(b - lower) <= tol:
        return "Sigma-"
    return "S-"


def classify_sector(bg: WarpedBackground, charge: FinsleroidCharge, le: LineElement) -> str:
    """Classify a relativistic line element into one of the seven sectors."""
    if charge.signature != "SR":
        raise ConfigError("sector classification applies to the relativistic signature")
    _check_compatible(bg, charge)
    _, _, _, b, _, _, vv = _scalar_chain(bg, charge, le.x, list(le.y))
    q = math.sqrt(max(-vv, 0.0))
    scale = math.sqrt(abs(b * b) + abs(vv)) + 1e-300
    return classify_from_bq(charge, float(b), q, scale)
