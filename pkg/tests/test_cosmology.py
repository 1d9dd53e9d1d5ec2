import numpy as np
import pytest

from finsleroid import (
    Closure,
    ConfigError,
    GridTooCoarse,
    RecollapseBoundary,
    ScaleFactor,
    continuity_residual,
    deceleration_from_pressure,
    dust_invariant_drift,
    energy_density,
    evolve,
    pressure,
    pressure_conserved,
    states_from_scale_factor,
    trajectory_csv,
    zero_pressure_charge,
)


def test_friedmann_reduction_at_zero_charge():
    rng = np.random.default_rng(3)
    for _ in range(50):
        H, q, kappa = rng.uniform(0.05, 2.0), rng.uniform(-2, 2), rng.uniform(-1, 1)
        assert pressure(0.0, H, q, kappa) == pytest.approx(
            -(1.0 - 2.0 * q) * H * H - kappa, rel=1e-14
        )


def test_zero_pressure_charge_root():
    assert zero_pressure_charge(-1.0) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ConfigError):
        zero_pressure_charge(0.3)  # would need an imaginary charge


def test_density_ratio_flat():
    for g in (0.0, 1.0, 2.0):
        _, ratio = energy_density(g, 0.7, 0.0)
        assert ratio == pytest.approx(1.0 + g * g / 4.0, rel=1e-14)
    rho, _ = energy_density(2.0, 0.7, 0.0)
    rho0, _ = energy_density(0.0, 0.7, 0.0)
    assert rho / rho0 == pytest.approx(2.0, rel=1e-14)


def test_deceleration_from_pressure_poles():
    with pytest.raises(ConfigError):
        deceleration_from_pressure(np.sqrt(2.0), 1.0, 1.0, 0.0)  # g^2 = 2
    with pytest.raises(ConfigError):
        deceleration_from_pressure(1.0, 0.0, 0.0, 0.0)  # static H


def test_closure_validation():
    with pytest.raises(ConfigError):
        Closure.eos(1.5)
    Closure.eos(-1.0)
    Closure.deceleration(0.5)


def test_de_sitter_constant_h():
    states = evolve(0.0, 0, Closure.eos(-1.0), 1.0, 0.5, (0.0, 10.0), n_points=100)
    H = np.array([s.H for s in states])
    assert np.max(np.abs(H - 0.5)) < 1e-10
    res = continuity_residual(states)
    assert np.max(np.abs(res)) < 1e-8


def test_dust_invariant_and_deceleration():
    states = evolve(1.3, 0, Closure.eos(0.0), 1.0, 1.0, (0.0, 200.0), n_points=300)
    assert dust_invariant_drift(states) < 1e-8
    # Dust settles onto q = 1/2 regardless of the charge.
    assert states[-1].q_cosm == pytest.approx(0.5, abs=1e-9)


def test_recollapse_detected():
    with pytest.raises(RecollapseBoundary):
        evolve(0.0, 1, Closure.eos(0.0), 1.0, 0.05, (0.0, 500.0), n_points=200)


def test_grid_too_coarse_minimum_points():
    states = evolve(0.0, 0, Closure.eos(0.0), 1.0, 1.0, (0.0, 1.0), n_points=50)
    with pytest.raises(GridTooCoarse):
        continuity_residual(states[:4])


def test_states_from_scale_factor_pressure_modes():
    sf = ScaleFactor.power(1.0, 2.0 / 3.0)
    ts = np.linspace(1.0, 5.0, 200)
    alg = states_from_scale_factor(sf, ts, 0.0, 0, pressure_mode="algebraic")
    con = states_from_scale_factor(sf, ts, 0.0, 0, pressure_mode="conserved")
    # Dust power law at g = 0: both evaluations give p = 0.
    assert max(abs(s.p) for s in alg) < 1e-12
    assert max(abs(s.p) for s in con) < 1e-12


def test_pressure_evaluations_differ_at_order_g2():
    # The algebraic relation and the continuity-consistent scalar differ by
    # (3/2) g^2 (H_dot + H^2) away from coasting.
    g, H, H_dot, kappa = 1.0, 0.7, -0.2, 0.1
    q = -(H_dot + H * H) / (H * H)
    p_alg = pressure(g, H, q, kappa)
    p_con = pressure_conserved(g, H, H_dot, kappa)
    assert p_alg - p_con == pytest.approx(1.5 * g * g * (H_dot + H * H), rel=1e-12)


def test_trajectory_csv_deterministic():
    states = evolve(0.5, 0, Closure.eos(0.0), 1.0, 1.0, (0.0, 3.0), n_points=40)
    a = trajectory_csv(states)
    b = trajectory_csv(states)
    assert a == b
    assert a.splitlines()[0] == "t,L,H,q_cosm,p,rho,residual"
