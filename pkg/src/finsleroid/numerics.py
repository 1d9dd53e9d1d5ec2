"""Differentiation kernel and small dense-tensor algebra.

Everything geometric in this package reduces to evaluating scalar or tensor
fields of a line element (a point ``x`` plus a tangent vector ``y``) and
differentiating them:

* derivatives in the fibre variable ``y`` use nested dual numbers and are
  exact to machine precision up to third order;
* derivatives in the base variable ``x`` use central differences with a step
  scaled to the coordinate magnitude, because background fields are supplied
  as closures whose analytic ``x``-dependence may be opaque.

Dual numbers here are complex-capable: a number ``a + eps*b`` where the
components may themselves be dual numbers (for nesting) or complex scalars.
Complex support matters because several closed forms for the relativistic
signature are obtained by evaluating the positive-definite form at imaginary
parameter values and taking the real part.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "FinsleroidError",
    "StepUnderflow",
    "PoleProximity",
    "ChartBoundary",
    "SingularMetric",
    "SectorViolation",
    "HomogeneityViolation",
    "SpecialCaseViolation",
    "GridTooCoarse",
    "RecollapseBoundary",
    "ConfigError",
    "Dimension",
    "DiffConfig",
    "DenseTensor",
    "Dual",
    "value",
    "real_if_close",
    "sqrt",
    "exp",
    "log",
    "arctan",
    "derive_y",
    "derive_x",
]


# ---------------------------------------------------------------------------
# Error types
# ---------------------------------------------------------------------------


class FinsleroidError(Exception):
    """Base class for all package-specific errors."""


class StepUnderflow(FinsleroidError):
    """An adaptive differencing step collapsed below machine epsilon."""


class PoleProximity(FinsleroidError):
    """The line element lies inside the exclusion band around the axis pole.

    Third-order fibre derivatives blow up like 1/q near q = 0; callers must
    stay outside the band q >= eps_q * S.
    """


class ChartBoundary(FinsleroidError):
    """A coordinate (or a differencing step) left the chart's validity region."""


class SingularMetric(FinsleroidError):
    """A metric tensor was not invertible at the requested point."""


class SectorViolation(FinsleroidError):
    """A relativistic line element lies outside the supported time-like sector."""


class HomogeneityViolation(FinsleroidError):
    """A field failed its Euler (positive homogeneity) check beyond tolerance."""


class SpecialCaseViolation(FinsleroidError):
    """The background does not satisfy the special isotropic-case hypotheses."""


class GridTooCoarse(FinsleroidError):
    """Differencing error dominates the residual being asserted on a grid."""


class RecollapseBoundary(FinsleroidError):
    """The energy density crossed zero during evolution (closed-space turnaround)."""


class ConfigError(FinsleroidError):
    """Invalid or inconsistent configuration input."""


# ---------------------------------------------------------------------------
# Small domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dimension:
    """Shared dimension of every tensor axis in a computation."""

    n: int = 4

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ConfigError(f"dimension must be an integer >= 2, got {self.n!r}")


@dataclass(frozen=True)
class DiffConfig:
    """Differentiation strategy and step sizes.

    ``mode`` selects dual numbers (exact) or central differences for fibre
    derivatives; base derivatives always use central differences.  ``order``
    bounds the derivative order requested through this configuration.
    """

    mode: str = "dual"
    h_y: float = 1e-6
    h_x: float = 1e-6
    order: int = 3

    def __post_init__(self) -> None:
        if self.mode not in ("dual", "central"):
            raise ConfigError(f"mode must be 'dual' or 'central', got {self.mode!r}")
        if self.h_y <= 0 or self.h_x <= 0:
            raise ConfigError("differencing steps must be positive")
        if not 1 <= self.order <= 3:
            raise ConfigError("derivative order must be between 1 and 3")

    def step_x(self, coordinate: float) -> float:
        """Base-space step scaled to the coordinate magnitude."""
        h = self.h_x * (1.0 + abs(coordinate))
        if h < 1e3 * np.finfo(float).eps * (1.0 + abs(coordinate)):
            raise StepUnderflow(f"x-step underflow at coordinate {coordinate!r}")
        return h


DEFAULT_DIFF = DiffConfig()


@dataclass(frozen=True)
class DenseTensor:
    """A small dense tensor with per-axis index variance.

    ``variance`` holds one flag per axis: ``'u'`` for a contravariant (upper)
    index, ``'d'`` for a covariant (lower) index.  Contraction pairs one
    upper with one lower axis, as in classical index calculus.
    """

    array: np.ndarray
    variance: tuple[str, ...]

    def __post_init__(self) -> None:
        arr = np.asarray(self.array)
        object.__setattr__(self, "array", arr)
        if len(self.variance) != arr.ndim:
            raise ConfigError(
                f"variance length {len(self.variance)} != tensor rank {arr.ndim}"
            )
        if any(v not in ("u", "d") for v in self.variance):
            raise ConfigError(f"variance flags must be 'u' or 'd', got {self.variance!r}")
        if arr.ndim > 5:
            raise ConfigError("tensors of rank > 5 are out of scope")
        if arr.ndim and len(set(arr.shape)) > 1:
            raise ConfigError("all tensor axes must share one dimension")

    @property
    def rank(self) -> int:
        return self.array.ndim

    @property
    def dim(self) -> int:
        return self.array.shape[0] if self.rank else 0

    def contract(self, axis_a: int, axis_b: int) -> "DenseTensor":
        """Trace over one upper and one lower axis."""
        va, vb = self.variance[axis_a], self.variance[axis_b]
        if {va, vb} != {"u", "d"}:
            raise ConfigError(
                "contraction must pair one contravariant with one covariant axis"
            )
        arr = np.trace(self.array, axis1=axis_a, axis2=axis_b)
        keep = tuple(
            v for i, v in enumerate(self.variance) if i not in (axis_a, axis_b)
        )
        return DenseTensor(arr, keep)

    def to_json_dict(self) -> dict:
        """Serializable form with explicit shape and index-variance metadata."""
        return {
            "shape": list(self.array.shape),
            "variance": list(self.variance),
            "entries": np.asarray(self.array, dtype=float).ravel().tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DenseTensor":
        arr = np.array(data["entries"], dtype=float).reshape(data["shape"])
        return cls(arr, tuple(data["variance"]))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# Dual numbers
# ---------------------------------------------------------------------------


class Dual:
    """A (possibly nested, possibly complex) first-order dual number.

    ``a`` is the value part and ``b`` the derivative part; either may itself
    be a :class:`Dual` for higher-order seeding.  Plain scalars mix freely
    with duals of any depth (they act as constants).
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=0.0):
        self.a = a
        self.b = b

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a + other.a, self.b + other.b)
        return Dual(self.a + other, self.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a - other.a, self.b - other.b)
        return Dual(self.a - other, self.b)

    def __rsub__(self, other):
        return Dual(other - self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a * other.a, self.a * other.b + self.b * other.a)
        return Dual(self.a * other, self.b * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.a
            return Dual(self.a * inv, (self.b - self.a * inv * other.b) * inv)
        return Dual(self.a / other, self.b / other)

    def __rtruediv__(self, other):
        inv = 1.0 / self.a
        val = other * inv
        return Dual(val, -val * inv * self.b)

    def __pow__(self, exponent):
        if isinstance(exponent, int):
            if exponent == 0:
                return Dual(self.a * 0 + 1.0, self.b * 0)
            if exponent < 0:
                return 1.0 / (self ** (-exponent))
            out = self
            for _ in range(exponent - 1):
                out = out * self
            return out
        return exp(log(self) * exponent)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Dual({self.a!r}, {self.b!r})"


def value(x):
    """Strip all dual layers, returning the underlying scalar."""
    while isinstance(x, Dual):
        x = x.a
    return x


def real_if_close(z, tol: float = 1e-9, scale: float = 1.0):
    """Return the real part of ``z``, asserting the imaginary part is noise."""
    z = complex(z)
    if abs(z.imag) > tol * max(1.0, abs(scale)):
        raise FinsleroidError(
            f"imaginary residue {z.imag:g} exceeds tolerance {tol:g}"
        )
    return z.real


def _scalar_fn(x, f_real, f_complex, derivative):
    """Apply an elementary function through any depth of dual nesting."""
    if isinstance(x, Dual):
        return Dual(_scalar_fn(x.a, f_real, f_complex, derivative), derivative(x.a) * x.b)
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        return f_complex(complex(x))
    return f_real(float(x))


def sqrt(x):
    return _scalar_fn(x, math.sqrt, cmath.sqrt, lambda a: 0.5 / sqrt(a))


def exp(x):
    return _scalar_fn(x, math.exp, cmath.exp, lambda a: exp(a))


def log(x):
    return _scalar_fn(x, math.log, cmath.log, lambda a: 1.0 / a)


def arctan(x):
    return _scalar_fn(x, math.atan, cmath.atan, lambda a: 1.0 / (1.0 + a * a))


# ---------------------------------------------------------------------------
# Seed construction for nested duals
# ---------------------------------------------------------------------------


def _zero(depth: int):
    return 0.0 if depth == 0 else Dual(_zero(depth - 1), _zero(depth - 1))


def _const(c, depth: int):
    return c if depth == 0 else Dual(_const(c, depth - 1), _zero(depth - 1))


def _seeded(v, seeds: Sequence[float]):
    """Lift scalar ``v`` to a nested dual with one derivative seed per level."""
    if not seeds:
        return v
    return Dual(_seeded(v, seeds[1:]), _const(seeds[0], len(seeds) - 1))


def _extract(result, depth: int):
    """Read off the fully mixed derivative from a nested dual result."""
    for _ in range(depth):
        result = result.b if isinstance(result, Dual) else 0.0
    return value(result)


def _result_shape(sample) -> tuple[int, ...]:
    shape = []
    while isinstance(sample, (list, tuple, np.ndarray)):
        shape.append(len(sample))
        sample = sample[0]
    return tuple(shape)


def _result_entry(res, multi):
    for i in multi:
        res = res[i]
    return res


# ---------------------------------------------------------------------------
# Derivative operators
# ---------------------------------------------------------------------------


def derive_y(
    field: Callable,
    x: np.ndarray,
    y: np.ndarray,
    order: int = 1,
    config: DiffConfig = DEFAULT_DIFF,
) -> DenseTensor:
    """Fibre derivative of ``field(x, y)`` of the given order.

    The field may return a scalar or a (nested) sequence of scalars; the
    derivative axes are appended after the field's own axes, one per order,
    each covariant.  Dual mode is exact; central-difference mode is second
    order accurate and only supports ``order == 1``.
    """
    if not 1 <= order <= config.order:
        raise ConfigError(f"order {order} outside configured bound {config.order}")
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if np.allclose(y, 0.0):
        raise PoleProximity("fibre derivatives are undefined at y = 0")

    if config.mode == "central":
        if order != 1:
            raise ConfigError("central-difference mode supports first order only")
        return _derive_y_central(field, x, y, config)

    base_shape = _result_shape(field(x, [float(c) for c in y]))
    out_shape = base_shape + (n,) * order
    out = np.empty(out_shape, dtype=float)
    for multi in product(range(n), repeat=order):
        lifted = [
            _seeded(float(y[j]), [1.0 if j == multi[level] else 0.0 for level in range(order)])
            for j in range(n)
        ]
        res = field(x, lifted)
        if base_shape:
            for base_multi in product(*(range(s) for s in base_shape)):
                entry = _result_entry(res, base_multi)
                out[base_multi + multi] = _extract(entry, order)
        else:
            out[multi] = _extract(res, order)
    variance = ("u",) * len(base_shape) + ("d",) * order
    return DenseTensor(out, variance)


def _derive_y_central(field, x, y, config: DiffConfig) -> DenseTensor:
    n = y.shape[0]
    base_shape = _result_shape(field(x, list(map(float, y))))
    out = np.empty(base_shape + (n,), dtype=float)
    for j in range(n):
        h = config.h_y * (1.0 + abs(float(y[j])))
        yp, ym = y.copy(), y.copy()
        yp[j] += h
        ym[j] -= h
        fp = np.asarray(field(x, list(yp)), dtype=float)
        fm = np.asarray(field(x, list(ym)), dtype=float)
        out[..., j] = (fp - fm) / (2.0 * h)
    return DenseTensor(out, ("u",) * len(base_shape) + ("d",))


def derive_x(
    field: Callable,
    x: np.ndarray,
    y: np.ndarray | None = None,
    config: DiffConfig = DEFAULT_DIFF,
) -> DenseTensor:
    """Base-space partial derivative of ``field(x, y)`` with ``y`` held fixed.

    The tangent components are held numerically fixed during the ``x`` step,
    matching the plain partial-derivative convention of index calculus.  The
    derivative axis is appended last and is covariant.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    sample = field(x, y) if y is not None else field(x)
    base_shape = _result_shape(sample)
    out = np.empty(base_shape + (n,), dtype=float)
    for j in range(n):
        h = config.step_x(float(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        try:
            fp = field(xp, y) if y is not None else field(xp)
            fm = field(xm, y) if y is not None else field(xm)
        except ChartBoundary:
            raise
        out[..., j] = (np.asarray(fp, dtype=float) - np.asarray(fm, dtype=float)) / (2.0 * h)
    variance = ("u",) * len(base_shape) + ("d",)
    return DenseTensor(out, variance)
