#!/usr/bin/env python3
"""Tabulate the three closed-form checks behind the fixture catalog.

For each catalog fixture with a registered transform, apply that transform to
the input measure, evaluate the image density on a radial grid, and print it
next to the closed form together with absolute and relative residuals. The
final summary line per fixture reports the worst relative residual over the
grid, which is the quantity the acceptance checks bound.

Usage:
    python3 scripts/reproduce_bessel_tables.py
    python3 scripts/reproduce_bessel_tables.py --lo 0.05 --hi 20 --n 13
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

import levyarc as la

TRANSFORMS = {"arcsine1": la.arcsine1, "upsilon0": la.upsilon0}


def residual_table(name: str, fixture, grid: np.ndarray) -> float:
    apply = TRANSFORMS[fixture.transform]
    image = apply(fixture.measure)
    dens = image.components[0][1].density
    print(f"== {name}: {fixture.description}")
    print(f"{'r':>10} {'computed':>24} {'closed form':>24} {'abs res':>12} {'rel res':>12}")
    worst = 0.0
    for r in grid:
        got = dens.value(float(r))
        want = fixture.closed_form(float(r))
        abs_res = abs(got - want)
        rel_res = abs_res / max(abs(want), 1e-300)
        worst = max(worst, rel_res)
        print(f"{r:>10.4f} {got:>24.16e} {want:>24.16e} {abs_res:>12.3e} {rel_res:>12.3e}")
    print(f"   worst relative residual: {worst:.3e}\n")
    return worst


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=0.1, help="smallest radius")
    ap.add_argument("--hi", type=float, default=10.0, help="largest radius")
    ap.add_argument("--n", type=int, default=11, help="grid points (log spaced)")
    ap.add_argument("--budget", type=float, default=1e-6,
                    help="fail if any relative residual exceeds this")
    args = ap.parse_args(argv)

    grid = np.geomspace(args.lo, args.hi, args.n)
    catalog = la.fixture_catalog()
    worst = 0.0
    for name in ("EX1", "EX2", "EX3"):
        worst = max(worst, residual_table(name, catalog[name], grid))

    ok = worst <= args.budget
    print(f"overall worst relative residual {worst:.3e} "
          f"({'within' if ok else 'EXCEEDS'} budget {args.budget:.1e})")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
