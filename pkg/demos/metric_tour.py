"""Tour of the Finsleroid metric layer at a single line element.

Shows, on a warped positive-definite background:
  * the scalar chain (b, q, B, J, K) at a generic fibre vector,
  * K = 1 and g_ij = a_ij on the unit shell y = b(x),
  * the Riemannian degeneration at g = 0,
  * the indicatrix curvature -(1 + g^2/4) in both signatures.

Run from the repository root:  python3 demos/metric_tour.py
"""

from __future__ import annotations

import numpy as np

from finsleroid import (
    FinsleroidCharge,
    LineElement,
    WarpedBackground,
    indicatrix_curvature,
    metric_tensor,
    scalars,
)


def main() -> None:
    bg = WarpedBackground.from_config(
        {"signature": "PD", "N": 4, "kappa1": 1,
         "scale": {"family": "exponential", "H": 0.3}}
    )
    charge = FinsleroidCharge(g=0.5, signature="PD")
    x = np.array([0.2, 0.1, -0.05, 0.15])

    print("=== generic fibre vector ===")
    y = bg.b_frame(x).b_con + np.array([0.0, 0.3, -0.2, 0.25])
    le = LineElement(x, y)
    sc = scalars(bg, charge, le)
    print(f"b = {sc.b:.6f}   q = {sc.q:.6f}   B = {sc.B:.6f}")
    print(f"J = {sc.J:.6f}   K = {sc.K:.6f}")

    y_cov, g_dd, g_uu, _ = metric_tensor(bg, charge, le)
    print(f"g_ij y^i y^j - K^2 = {y_dot(g_dd, y) - sc.K**2:+.3e}  (homogeneity)")
    print(f"y_i - g_ij y^j     = {np.max(np.abs(y_cov - g_dd @ y)):.3e}")
    print(f"|g g^-1 - 1|_max   = {np.max(np.abs(g_dd @ g_uu - np.eye(4))):.3e}")

    print("\n=== unit shell y = b(x): K = 1 and g_ij = a_ij ===")
    le_b = LineElement(x, bg.b_frame(x).b_con)
    sc_b = scalars(bg, charge, le_b)
    _, g_b, _, _ = metric_tensor(bg, charge, le_b)
    a = bg.metric_at(x)
    print(f"K(x, b(x)) - 1        = {sc_b.K - 1.0:+.3e}")
    print(f"max |g_ij - a_ij| at b = {np.max(np.abs(g_b - a)):.3e}")

    print("\n=== g = 0: the Riemannian limit ===")
    riem = FinsleroidCharge(g=0.0, signature="PD")
    sc0 = scalars(bg, riem, le)
    _, g0, _, _ = metric_tensor(bg, riem, le)
    print(f"K^2 - a_ij y^i y^j    = {sc0.K**2 - y_dot(a, y):+.3e}")
    print(f"max |g_ij - a_ij|     = {np.max(np.abs(g0 - a)):.3e}")

    print("\n=== indicatrix curvature ===")
    for sig, gval, expected in (
        ("PD", 0.5, 1 - 0.5**2 / 4), ("SR", 1.2, -(1 + 1.2**2 / 4)),
        ("SR", 2.0, -(1 + 2.0**2 / 4)),
    ):
        val = indicatrix_curvature(FinsleroidCharge(g=gval, signature=sig))
        print(f"signature {sig}, g = {gval}:  {val:+.12f}  (expected {expected:+.12f})")


def y_dot(g_dd: np.ndarray, y: np.ndarray) -> float:
    return float(y @ g_dd @ y)


if __name__ == "__main__":
    main()
