"""The associated (pseudo-)Riemannian background space.

A warped background is the Robertson--Walker-type metric

* positive-definite (``PD``):   ds^2 = (dx^0)^2 + L(x^0)^2 p_ab dz^a dz^b
* relativistic (``SR``):        ds^2 = (dx^0)^2 - L(x^0)^2 p_ab dz^a dz^b

where the axis coordinate x^0 comes first, L is the scale factor, and p_ab
is a constant-curvature spatial metric in the conformally flat chart
p_ab = delta_ab / (1 + kappa1 |z|^2 / 4)^2.

The distinguished unit covector field is b_i = (1, 0, ..., 0).  Throughout
the package the projection tensor is taken as

    r_mn := a_mn - b_m b_n        (both signatures)

so that the geodesic/Landsberg property reads uniformly as
nabla_n b_m = k r_mn with k = L'/L.  (In the relativistic signature this is
the negative of the positive-definite spatial projector; the uniform sign
convention keeps every closed form signature-agnostic.)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .numerics import (
    ChartBoundary,
    ConfigError,
    DiffConfig,
    DEFAULT_DIFF,
    SingularMetric,
    derive_x,
)

__all__ = [
    "ScaleFactor",
    "BFieldFrame",
    "LandsbergData",
    "WarpedBackground",
    "load_background",
]


# ---------------------------------------------------------------------------
# Scale factor families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaleFactor:
    """Scale factor L(t) supplied with analytic first and second derivatives."""

    L: Callable[[float], float]
    Ldot: Callable[[float], float]
    Lddot: Callable[[float], float]
    family: str = "user"
    params: tuple = ()

    @classmethod
    def exponential(cls, H: float) -> "ScaleFactor":
        """L = e^{H t}: constant expansion rate."""
        return cls(
            L=lambda t: np.exp(H * t),
            Ldot=lambda t: H * np.exp(H * t),
            Lddot=lambda t: H * H * np.exp(H * t),
            family="exponential",
            params=(H,),
        )

    @classmethod
    def power(cls, C: float = 1.0, exponent: float = 2.0 / 3.0) -> "ScaleFactor":
        """L = C t^e: dust-like expansion for e = 2/3."""
        return cls(
            L=lambda t: C * t**exponent,
            Ldot=lambda t: C * exponent * t ** (exponent - 1.0),
            Lddot=lambda t: C * exponent * (exponent - 1.0) * t ** (exponent - 2.0),
            family="power",
            params=(C, exponent),
        )

    @classmethod
    def constant(cls, value: float = 1.0) -> "ScaleFactor":
        """Static background: k = 0."""
        return cls(
            L=lambda t: value,
            Ldot=lambda t: 0.0,
            Lddot=lambda t: 0.0,
            family="constant",
            params=(value,),
        )

    @classmethod
    def from_config(cls, data: dict) -> "ScaleFactor":
        family = data.get("family")
        params = data.get("params", {})
        allowed = {"exponential": {"H"}, "power": {"C", "exponent"}, "constant": {"value"}}
        if family not in allowed:
            raise ConfigError(f"unknown scale-factor family {family!r}")
        unknown = set(params) - allowed[family]
        if unknown:
            raise ConfigError(
                f"unknown parameter(s) {sorted(unknown)} for scale-factor family "
                f"{family!r}; allowed: {sorted(allowed[family])}"
            )
        if family == "exponential":
            return cls.exponential(float(params.get("H", 0.1)))
        if family == "power":
            return cls.power(
                float(params.get("C", 1.0)), float(params.get("exponent", 2.0 / 3.0))
            )
        return cls.constant(float(params.get("value", 1.0)))


@dataclass(frozen=True)
class BFieldFrame:
    """The distinguished unit field and its projection tensor at a point."""

    b_cov: np.ndarray  # b_i
    b_con: np.ndarray  # b^i
    r_proj: np.ndarray  # r_mn = a_mn - b_m b_n


@dataclass(frozen=True)
class LandsbergData:
    """Scalar data of the Landsberg factor k at a point.

    ``k`` doubles as the Hubble rate on cosmological backgrounds; ``bk`` is
    the scalar in k_n = (bk) b_n, ``kt_n`` the combination k_n + k^2 b_n,
    ``bkt`` its scalar coefficient, and ``beta = kdot - k^2``.
    """

    k: float
    k_n: np.ndarray
    bk: float
    kt_n: np.ndarray
    bkt: float
    beta: float


# ---------------------------------------------------------------------------
# Warped background
# ---------------------------------------------------------------------------


class WarpedBackground:
    """A warped background with conformally flat constant-curvature slices."""

    def __init__(
        self,
        signature: str = "PD",
        dimension: int = 4,
        kappa1: int = 0,
        scale_factor: ScaleFactor | None = None,
        b_perturbation: float = 0.0,
    ) -> None:
        if signature not in ("PD", "SR"):
            raise ConfigError(f"signature must be 'PD' or 'SR', got {signature!r}")
        if dimension < 2:
            raise ConfigError("dimension must be >= 2")
        if kappa1 not in (-1, 0, 1):
            raise ConfigError("spatial curvature sign must be -1, 0 or +1")
        self.signature = signature
        self.N = int(dimension)
        self.kappa1 = int(kappa1)
        self.scale_factor = scale_factor or ScaleFactor.constant(1.0)
        # Nonzero amplitude bends the b-field away from the geodesic frame;
        # used as a negative control to show residual checks detect it.
        self.b_perturbation = float(b_perturbation)
        self.sigma = 1.0 if signature == "PD" else -1.0

    # -- chart ------------------------------------------------------------

    def _check_chart(self, x: np.ndarray) -> None:
        z2 = float(np.dot(x[1:], x[1:]))
        if self.kappa1 == -1 and z2 >= 4.0:
            raise ChartBoundary(
                f"|z|^2 = {z2:g} outside the open-space conformal chart (|z|^2 < 4)"
            )
        if 1.0 + self.kappa1 * z2 / 4.0 <= 0.0:
            raise ChartBoundary("conformal factor nonpositive at this point")

    def conformal_factor(self, x: np.ndarray) -> float:
        """Omega(z) with p_ab = Omega^2 delta_ab."""
        self._check_chart(x)
        z2 = float(np.dot(x[1:], x[1:]))
        return 1.0 / (1.0 + self.kappa1 * z2 / 4.0)

    # -- metric -----------------------------------------------------------

    def metric_at(self, x: np.ndarray) -> np.ndarray:
        """Components a_mn at x."""
        x = np.asarray(x, dtype=float)
        omega = self.conformal_factor(x)
        L = self.scale_factor.L(x[0])
        if not L > 0.0:
            raise ChartBoundary(f"scale factor nonpositive at t = {x[0]:g}")
        a = np.zeros((self.N, self.N))
        a[0, 0] = 1.0
        spatial = self.sigma * (L * omega) ** 2
        for i in range(1, self.N):
            a[i, i] = spatial
        return a

    def metric_inverse_at(self, x: np.ndarray) -> np.ndarray:
        a = self.metric_at(x)
        diag = np.diagonal(a)
        if np.any(diag == 0.0):
            raise SingularMetric("degenerate warped metric")
        return np.diag(1.0 / diag)

    # -- b-field ----------------------------------------------------------

    def b_covector(self, x: np.ndarray) -> np.ndarray:
        b = np.zeros(self.N)
        b[0] = 1.0
        if self.b_perturbation:
            # A closed but non-geodesic deformation: gradient of eps*sum(sin z^a).
            b[1:] += self.b_perturbation * np.cos(np.asarray(x[1:], dtype=float))
        return b

    def b_frame(self, x: np.ndarray) -> BFieldFrame:
        a = self.metric_at(x)
        b_cov = self.b_covector(x)
        b_con = self.metric_inverse_at(x) @ b_cov
        r = a - np.outer(b_cov, b_cov)
        return BFieldFrame(b_cov=b_cov, b_con=b_con, r_proj=r)

    # -- Landsberg scalar data ---------------------------------------------

    def landsberg_data(self, x: np.ndarray) -> LandsbergData:
        t = float(np.asarray(x, dtype=float)[0])
        L = self.scale_factor.L(t)
        Ld = self.scale_factor.Ldot(t)
        Ldd = self.scale_factor.Lddot(t)
        k = Ld / L
        kdot = Ldd / L - k * k
        b = self.b_covector(x)
        k_n = kdot * b
        kt_n = k_n + k * k * b
        return LandsbergData(
            k=k, k_n=k_n, bk=kdot, kt_n=kt_n, bkt=kdot + k * k, beta=kdot - k * k
        )

    # -- connection ---------------------------------------------------------

    def riemann_connection(self, x: np.ndarray) -> np.ndarray:
        """Christoffel symbols a^k_{ij} of the warped metric (closed form)."""
        x = np.asarray(x, dtype=float)
        self._check_chart(x)
        N = self.N
        ld = self.landsberg_data(x)
        k = ld.k
        L = self.scale_factor.L(x[0])
        omega = self.conformal_factor(x)
        # d(ln Omega)/dz^a for the conformally flat slice.
        dln = -0.5 * self.kappa1 * np.asarray(x[1:], dtype=float) * omega

        gamma = np.zeros((N, N, N))
        p = omega * omega * np.eye(N - 1)
        # Axis-spatial blocks of the warped product.
        gamma[0, 1:, 1:] = -self.sigma * L * L * k * p  # = -k r_ab
        for a_idx in range(1, N):
            gamma[a_idx, 0, a_idx] = k
            gamma[a_idx, a_idx, 0] = k
        # Purely spatial conformal block.
        for a_idx in range(1, N):
            for b_idx in range(1, N):
                for c_idx in range(1, N):
                    val = 0.0
                    if a_idx == b_idx:
                        val += dln[c_idx - 1]
                    if a_idx == c_idx:
                        val += dln[b_idx - 1]
                    if b_idx == c_idx:
                        val -= dln[a_idx - 1]
                    gamma[a_idx, b_idx, c_idx] = val
        return gamma

    def riemann_connection_numeric(
        self, x: np.ndarray, config: DiffConfig = DEFAULT_DIFF
    ) -> np.ndarray:
        """Christoffel symbols by direct differencing of the metric."""
        x = np.asarray(x, dtype=float)
        da = derive_x(lambda xs: self.metric_at(xs), x, config=config).array
        a_inv = self.metric_inverse_at(x)
        gamma = np.zeros((self.N, self.N, self.N))
        for kk in range(self.N):
            for i in range(self.N):
                for j in range(self.N):
                    gamma[kk, i, j] = 0.5 * np.sum(
                        a_inv[kk, :] * (da[:, i, j] + da[:, j, i] - da[i, j, :])
                    )
        return gamma

    # -- curvature ----------------------------------------------------------

    def isotropic_xi(self, x: np.ndarray) -> float:
        """Isotropic curvature coefficient xi = -k^2 + sigma * kappa1 / L^2.

        In the relativistic signature (sigma = -1) this is -k^2 - kappa with
        kappa = kappa1 / L^2, the cosmological spatial-curvature combination.
        """
        ld = self.landsberg_data(x)
        L = self.scale_factor.L(float(np.asarray(x, dtype=float)[0]))
        return -ld.k * ld.k + self.sigma * self.kappa1 / (L * L)

    def riemann_curvature(self, x: np.ndarray) -> np.ndarray:
        """Curvature a_n{}^i{}_{km} of the warped metric (closed isotropic form).

        With the isotropic coefficient xi (see :meth:`isotropic_xi`) and the
        uniform projector r_mn:

            a_n{}^i{}_{km} = xi (r_nm r^i_k - r_nk r^i_m)
                             + (bkt) (b^i b_m r_nk - b^i b_k r_nm
                                      - b_n b_m r^i_k + b_n b_k r^i_m)
        """
        frame = self.b_frame(x)
        ld = self.landsberg_data(x)
        xi = self.isotropic_xi(x)
        r_dd = frame.r_proj
        r_ud = np.eye(self.N) - np.outer(frame.b_con, frame.b_cov)
        b_d, b_u = frame.b_cov, frame.b_con
        curv = xi * (
            np.einsum("nm,ik->nikm", r_dd, r_ud) - np.einsum("nk,im->nikm", r_dd, r_ud)
        )
        curv += ld.bkt * (
            np.einsum("i,m,nk->nikm", b_u, b_d, r_dd)
            - np.einsum("i,k,nm->nikm", b_u, b_d, r_dd)
            - np.einsum("n,m,ik->nikm", b_d, b_d, r_ud)
            + np.einsum("n,k,im->nikm", b_d, b_d, r_ud)
        )
        return curv

    def riemann_curvature_numeric(
        self, x: np.ndarray, config: DiffConfig = DEFAULT_DIFF
    ) -> np.ndarray:
        """Curvature by differencing the closed-form Christoffel symbols."""
        x = np.asarray(x, dtype=float)
        dgam = derive_x(lambda xs: self.riemann_connection(xs), x, config=config).array
        gam = self.riemann_connection(x)
        curv = np.zeros((self.N, self.N, self.N, self.N))
        # a_n{}^i{}_{km} = d_k a^i_{nm} - d_m a^i_{nk}
        #                  + a^u_{nm} a^i_{uk} - a^u_{nk} a^i_{um}
        curv += np.einsum("inmk->nikm", dgam)
        curv -= np.einsum("inkm->nikm", dgam)
        curv += np.einsum("unm,iuk->nikm", gam, gam)
        curv -= np.einsum("unk,ium->nikm", gam, gam)
        return curv

    # -- residual reports ----------------------------------------------------

    def landsberg_check(
        self, x: np.ndarray, config: DiffConfig = DEFAULT_DIFF
    ) -> dict[str, float]:
        """Max-norm residuals of the geodesic/Landsberg frame properties.

        Reported: the defining property nabla_n b_m - k r_mn, the geodesic
        property b^n nabla_n b_m, the gradient alignment k_n - (bk) b_n, and
        the curl-type identity
        nabla_m kt_k - nabla_k kt_m + k (kt_k b_m - kt_m b_k).
        """
        x = np.asarray(x, dtype=float)
        frame = self.b_frame(x)
        ld = self.landsberg_data(x)
        gamma = self.riemann_connection_numeric(x, config=config)

        db = derive_x(lambda xs: self.b_covector(xs), x, config=config).array
        nabla_b = db.T - np.einsum("knm,k->nm", gamma, frame.b_cov)
        res_landsberg = float(np.max(np.abs(nabla_b - ld.k * frame.r_proj)))
        res_geodesic = float(np.max(np.abs(frame.b_con @ nabla_b)))

        def k_scalar(xs: np.ndarray) -> float:
            d = self.landsberg_data(xs)
            return d.k

        k_n = derive_x(lambda xs: k_scalar(xs), x, config=config).array
        res_gradient = float(np.max(np.abs(k_n - ld.bk * frame.b_cov)))

        def kt_field(xs: np.ndarray) -> np.ndarray:
            return self.landsberg_data(xs).kt_n

        dkt = derive_x(lambda xs: kt_field(xs), x, config=config).array
        nabla_kt = dkt.T - np.einsum("knm,k->mn", gamma, ld.kt_n)
        curl = (
            nabla_kt
            - nabla_kt.T
            + ld.k * (np.outer(frame.b_cov, ld.kt_n) - np.outer(frame.b_cov, ld.kt_n).T)
        )
        res_curl = float(np.max(np.abs(curl)))
        return {
            "landsberg": res_landsberg,
            "geodesic": res_geodesic,
            "gradient": res_gradient,
            "curl_identity": res_curl,
        }

    # -- configuration ---------------------------------------------------------

    def with_perturbed_b(self, amplitude: float) -> "WarpedBackground":
        """Copy of this background with a non-geodesic b-field (negative control)."""
        return WarpedBackground(
            signature=self.signature,
            dimension=self.N,
            kappa1=self.kappa1,
            scale_factor=self.scale_factor,
            b_perturbation=amplitude,
        )

    @classmethod
    def from_config(cls, data: dict) -> "WarpedBackground":
        try:
            return cls(
                signature=data.get("signature", "PD"),
                dimension=int(data.get("dimension", 4)),
                kappa1=int(data.get("kappa1", 0)),
                scale_factor=ScaleFactor.from_config(
                    data.get("scale_factor", {"family": "constant"})
                ),
                b_perturbation=float(data.get("b_perturbation", 0.0)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid background configuration: {exc}") from exc


def load_background(path: str | Path) -> WarpedBackground:
    """Load a background from a declarative JSON configuration file."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read background config {path}: {exc}") from exc
    return WarpedBackground.from_config(data)
