#!/usr/bin/env python3
"""Convergence of (d_P(delta) - 1) / delta^(1/n) toward the closed-form G(P).

Example:
    python3 scripts/convergence_demo.py --gen cube --dim 2 \
        --deltas 1e-4,1e-5,1e-6,1e-7
"""

import argparse
import time

from floatdual.invariants import generator
from floatdual.oracles import convergence_table, direction_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gen", default="cube", choices=("cube", "cross", "hexagon"))
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--eps", type=float, default=None)
    ap.add_argument("--deltas", default="1e-4,1e-5,1e-6")
    ap.add_argument("--grid", type=int, default=4096)
    args = ap.parse_args()

    P = generator(args.gen, dim=args.dim, eps=args.eps)
    deltas = [float(t) for t in args.deltas.split(",") if t.strip()]
    grid = direction_grid(P.dim, args.grid, bodies=(P,))

    t0 = time.perf_counter()
    result = convergence_table(P, deltas, grid)
    print(f"G(P) closed form = {result.closed_form:.10f}\n")
    print(f"{'delta':>10} {'d_P(delta)':>14} {'normalized':>12} {'best dp':>12}")
    for row in result.rows:
        print(f"{row.delta:>10.1e} {row.d_value:>14.10f} "
              f"{row.normalized:>12.6f} {row.best_delta_prime:>12.4e}")
    if result.extrapolated is not None:
        print(f"{'extrap':>10} {'':>14} {result.extrapolated:>12.6f}")
    print(f"\n({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
