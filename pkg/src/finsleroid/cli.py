"""Command-line driver: verification suites, tensor dumps, cosmology runs.

Exit codes: 0 all checks pass, 1 at least one identity failed, 2 invalid
configuration or arguments.  Reports are deterministic for a fixed seed and
configuration (a timestamp field aside).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .background import WarpedBackground
from .connection import spray
from .conserved import conserved_bundle
from .cosmology import Closure, continuity_residual, dust_invariant_drift, evolve, trajectory_csv
from .curvature import curvature_tensors
from .metric import FinsleroidCharge, LineElement, cartan, metric_tensor, scalars
from .numerics import (
    ConfigError,
    FinsleroidError,
    GridTooCoarse,
    PoleProximity,
    RecollapseBoundary,
)
from .verification import SUITES, SuiteReport, VerificationCell, fixture_records, run_suite

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON config {path}: {exc}") from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    config = _load_json(args.config) if args.config else {}
    if args.g is not None:
        config["g"] = args.g
    if args.samples is not None:
        config["samples"] = args.samples
    if args.seed is not None:
        config["seed"] = args.seed
    config.setdefault("samples", 100)
    config.setdefault("seed", 0)
    cell = VerificationCell.from_config(config)

    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports: list[SuiteReport] = [run_suite(name, cell) for name in names]
    if args.fixtures:
        records = fixture_records(args.fixtures)
        reports.append(
            SuiteReport("fixtures", {"path": str(args.fixtures)}, tuple(records))
        )

    passed = all(rep.passed for rep in reports)
    if args.format == "json":
        payload = {
            "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "passed": passed,
            "suites": [rep.to_json_dict() for rep in reports],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.output)
    else:
        _emit("\n\n".join(rep.to_table() for rep in reports), args.output)
    return EXIT_PASS if passed else EXIT_FAILURE


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------


def cmd_tensors(args: argparse.Namespace) -> int:
    config = _load_json(args.config) if args.config else {}
    bg = WarpedBackground.from_config(config)
    g = args.g if args.g is not None else float(config.get("g", 0.5))
    charge = FinsleroidCharge(g=g, signature=bg.signature)
    try:
        x = np.array([float(v) for v in args.x.split(",")])
        y = np.array([float(v) for v in args.y.split(",")])
    except ValueError as exc:
        raise ConfigError(f"x and y must be comma-separated numbers: {exc}") from exc
    le = LineElement(x, y)

    try:
        sc = scalars(bg, charge, le)
    except PoleProximity as exc:
        print(f"line element rejected: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    y_cov, g_dd, g_uu, h_dd = metric_tensor(bg, charge, le)
    dump = {
        "version": __version__,
        "input": {
            "x": x.tolist(),
            "y": y.tolist(),
            "g": g,
            "signature": bg.signature,
            "dimension": bg.N,
            "kappa1": bg.kappa1,
        },
        "scalars": {k: getattr(sc, k) for k in ("b", "q", "S", "B", "L", "A", "J", "f", "w", "K")},
        "metric": {
            "y_cov": y_cov.tolist(),
            "g_dd": g_dd.tolist(),
            "g_uu": g_uu.tolist(),
            "h_dd": h_dd.tolist(),
        },
    }
    if sc.q > 0.0:
        # Spray derivatives, Cartan, curvature and conserved closed forms are
        # singular on the b-axis; the metric block is still exact there
        # (K = 1, g_ij = a_ij).
        bundle = spray(bg, charge, le)
        dump["spray"] = {
            "G": bundle.G.tolist(),
            "G1": bundle.G1.tolist(),
            "G2": bundle.G2.tolist(),
        }
        A_d, A_u, norm, _ = cartan(bg, charge, le)
        dump["cartan"] = {"A_d": A_d.tolist(), "A_u": A_u.tolist(), "norm": norm}
        dump["curvature"] = curvature_tensors(bg, charge, le).to_json_dict()
        dump["conserved"] = conserved_bundle(bg, charge, le).to_json_dict()
    else:
        dump["note"] = "y on the b-axis: spray/Cartan/curvature/conserved bundles omitted"
    _emit(json.dumps(dump, indent=2, sort_keys=True), args.output)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# cosmo
# ---------------------------------------------------------------------------


def cmd_cosmo(args: argparse.Namespace) -> int:
    scenario = _load_json(args.config)
    try:
        g = float(scenario["g"]) if args.g is None else args.g
        kappa1 = int(scenario.get("kappa1", 0))
        closure_cfg = scenario.get("closure", {"kind": "eos", "value": 0.0})
        if closure_cfg["kind"] == "eos":
            closure = Closure.eos(float(closure_cfg["value"]))
        elif closure_cfg["kind"] == "deceleration":
            closure = Closure.deceleration(float(closure_cfg["value"]))
        else:
            raise ConfigError(f"unknown closure kind {closure_cfg['kind']!r}")
        L0 = float(scenario.get("L0", 1.0))
        H0 = float(scenario.get("H0", 1.0))
        t_span = tuple(float(v) for v in scenario.get("t_span", (0.0, 1.0)))
        n_points = int(scenario.get("n_points", 200))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid cosmology scenario: {exc}") from exc

    try:
        states = evolve(g, kappa1, closure, L0, H0, t_span, n_points=n_points)
    except RecollapseBoundary as exc:
        print(f"recollapse boundary reached: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    csv_text = trajectory_csv(states)
    try:
        worst = float(np.max(np.abs(continuity_residual(states))))
        grid_note = None
    except GridTooCoarse as exc:
        worst = float("nan")
        grid_note = str(exc)
    summary = {
        "version": __version__,
        "scenario": {
            "g": g,
            "kappa1": kappa1,
            "closure": closure_cfg,
            "L0": L0,
            "H0": H0,
            "t_span": list(t_span),
            "n_points": n_points,
        },
        "max_continuity_residual": worst,
        "dust_invariant_drift": dust_invariant_drift(states),
        "e_folds": float(np.log(states[-1].L / states[0].L)),
        "final": states[-1].to_json_dict(),
    }
    if grid_note:
        summary["grid_note"] = grid_note
    if args.output:
        Path(args.output).write_text(csv_text)
        _emit(json.dumps(summary, indent=2, sort_keys=True), None)
    else:
        print(csv_text)
        print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finsleroid",
        description="Finsleroid-Finsler geometry engine: verification, tensor dumps, cosmology.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run randomized identity-verification suites")
    p_verify.add_argument(
        "--suite",
        default="all",
        choices=["all", *SUITES],
        help="suite to run (default: all)",
    )
    p_verify.add_argument(
        "--samples", type=int, default=None, help="line elements per suite (default 100)"
    )
    p_verify.add_argument("--seed", type=int, default=None, help="sampler seed (default 0)")
    p_verify.add_argument("--config", help="JSON verification-cell configuration")
    p_verify.add_argument("--g", type=float, default=None, help="Finsleroid charge override")
    p_verify.add_argument("--output", help="write the report here instead of stdout")
    p_verify.add_argument("--format", default="table", choices=["json", "table"])
    p_verify.add_argument("--fixtures", help="JSON oracle fixtures to round-trip")
    p_verify.set_defaults(func=cmd_verify)

    p_tensors = sub.add_parser("tensors", help="dump all tensor bundles at one line element")
    p_tensors.add_argument("--config", help="JSON background configuration")
    p_tensors.add_argument("--g", type=float, default=None, help="Finsleroid charge")
    p_tensors.add_argument("--x", required=True, help="base point, comma-separated")
    p_tensors.add_argument("--y", required=True, help="fibre vector, comma-separated")
    p_tensors.add_argument("--output", help="write the dump here instead of stdout")
    p_tensors.set_defaults(func=cmd_tensors)

    p_cosmo = sub.add_parser("cosmo", help="integrate a cosmology scenario to CSV + summary")
    p_cosmo.add_argument("--config", required=True, help="JSON scenario configuration")
    p_cosmo.add_argument("--g", type=float, default=None, help="Finsleroid charge override")
    p_cosmo.add_argument("--output", help="write trajectory CSV here (summary to stdout)")
    p_cosmo.set_defaults(func=cmd_cosmo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, matching the configuration code.
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FinsleroidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
