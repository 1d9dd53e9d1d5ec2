"""Finsleroid-corrected cosmology: the dust law and the |g| = 2 locus.

Three short experiments on the flat (kappa1 = 0) homogeneous system:
  1. a dust trajectory (pressure = 0 closure) integrated over ten e-folds,
     checking that the invariant rho * L^3 stays constant;
  2. the density enhancement rho(g) / rho(0) = 1 + g^2/4 at fixed H;
  3. a charge scan at fixed deceleration q = -1: the pressure crosses zero
     exactly at |g| = 2, where the indicatrix curvature reaches -2.

Run from the repository root:  python3 demos/cosmology_dust.py
"""

from __future__ import annotations

import numpy as np

from finsleroid import (
    Closure,
    dust_invariant_drift,
    energy_density,
    evolve,
    pressure,
    zero_pressure_charge,
)


def main() -> None:
    print("=== dust trajectory, g = 1, ten e-folds ===")
    states = evolve(
        g=1.0, kappa1=0.0, closure=Closure.eos(0.0),
        L0=1.0, H0=1.0, t_span=(0.0, 2.2e6), n_points=400,
    )
    inv = [s.rho * s.L**3 for s in states]
    efolds = np.log(states[-1].L / states[0].L)
    print(f"e-folds covered          : {efolds:.2f}")
    print(f"rho L^3 relative drift   : {dust_invariant_drift(states):.3e}")
    print(f"rho L^3 first/last       : {inv[0]:.9f} / {inv[-1]:.9f}")

    print("\n=== density enhancement at fixed H = 1, kappa = 0 ===")
    rho0, _ = energy_density(0.0, 1.0, 0.0)
    for g in (0.0, 0.5, 1.0, 2.0):
        rho, _ = energy_density(g, 1.0, 0.0)
        print(f"g = {g}:  rho/rho_riemannian = {rho / rho0:.6f}"
              f"   (1 + g^2/4 = {1 + g * g / 4:.6f})")

    print("\n=== pressure scan at deceleration q = -1 ===")
    for g in np.arange(0.0, 2.6, 0.5):
        p = pressure(g, 1.0, -1.0, 0.0)
        print(f"g = {g:3.1f}:  p = {p:+.6f}")
    g_star = zero_pressure_charge(-1.0)
    print(f"root solve: p = 0 at |g| = {g_star:.12f}")


if __name__ == "__main__":
    main()
