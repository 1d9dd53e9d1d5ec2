"""Regenerate the oracle fixtures consumed by ``finsleroid verify --fixtures``.

Deterministic: all inputs are dyadic rationals (exactly representable as
binary floats, so the numerical package evaluates at exactly the oracle's
point) and the derivations contain no randomness.  Run from the repository
root:

    python -m oracle.generate_fixtures [--output PATH] [--skip-symbolic]

The curvature case differentiates the metric-function closure to fifth
order symbolically; regeneration takes a few minutes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction as Fr
from pathlib import Path

import mpmath as mp

from .derive import (
    MetricCase,
    coefficient_relation_residuals,
    curvature_values,
    metric_identity_residuals,
    metric_values,
)

DIGITS = 40

X_SAMPLE = (Fr(5, 16), Fr(3, 16), Fr(-1, 8), Fr(7, 32))

CASES = [
    MetricCase(
        case="metric-pd",
        signature="PD",
        g=Fr(1, 2),
        scale_family="constant",
        scale_param=Fr(5, 4),
        x=X_SAMPLE,
        y=(Fr(1), Fr(3, 8), Fr(-1, 4), Fr(5, 16)),
    ),
    MetricCase(
        case="metric-sr",
        signature="SR",
        g=Fr(5, 4),
        scale_family="constant",
        scale_param=Fr(5, 4),
        x=X_SAMPLE,
        y=(Fr(1), Fr(1, 4), Fr(-3, 16), Fr(1, 8)),
    ),
    MetricCase(
        case="curvature-pd",
        signature="PD",
        g=Fr(1, 2),
        scale_family="exponential",
        scale_param=Fr(1, 4),
        x=X_SAMPLE,
        y=(Fr(1), Fr(5, 16), Fr(-3, 16), Fr(1, 4)),
    ),
]


def _serialize(v):
    if isinstance(v, list):
        return [_serialize(c) for c in v]
    return mp.nstr(v, DIGITS)


def build_case(case: MetricCase) -> dict:
    values = metric_values(case)
    provenance = "half fibre gradient/Hessian and third fibre derivative of K^2"
    if case.scale_family == "exponential":
        values = {**values, **curvature_values(case)}
        provenance += (
            "; spray from formal Christoffel base-derivatives of the fibre "
            "metric; deviation tensor from the standard spray-derivative formula"
        )
    return {
        "case": case.case,
        "provenance": provenance,
        "background": case.background_config(),
        "g": float(case.g),
        "x": [float(c) for c in case.x],
        "y": [float(c) for c in case.y],
        "values": {k: _serialize(v) for k, v in values.items()},
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--output",
        default=str(Path(__file__).parent / "fixtures.json"),
        help="fixture file to write",
    )
    parser.add_argument(
        "--skip-symbolic",
        action="store_true",
        help="skip the symbolic identity checks (fixtures only)",
    )
    args = parser.parse_args(argv)

    if not args.skip_symbolic:
        t0 = time.time()
        metric_res = metric_identity_residuals()
        coeff_res = coefficient_relation_residuals()
        bad = {k: v for k, v in {**metric_res, **coeff_res}.items() if v != 0}
        print(f"symbolic identities ({time.time() - t0:.1f}s):")
        for name in (*metric_res, *coeff_res):
            print(f"  {name}: {'ZERO' if name not in bad else bad[name]}")
        if bad:
            print("symbolic identities FAILED; fixtures not written", file=sys.stderr)
            return 1

    cases = []
    for case in CASES:
        t0 = time.time()
        cases.append(build_case(case))
        print(f"{case.case}: {time.time() - t0:.1f}s")

    payload = {"digits": DIGITS, "cases": cases}
    Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
