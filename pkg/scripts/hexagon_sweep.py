#!/usr/bin/env python3
"""Sweep the hexagon family and show the discontinuity of G.

As eps -> 0 the hexagons converge to the crosspolytope in Hausdorff
distance, but G(P(eps)) tends to 2*sqrt(2)/3, not to G(B_1^2) = sqrt(2)/2:
the invariant sees the local vertex structure, not the limit shape. At a
fixed positive delta, however, the measured d_P(delta) of a thin hexagon
does track the crosspolytope value.
"""

import argparse
import math

from floatdual.invariants import generator, invariant_g
from floatdual.oracles import d_p_delta, direction_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", default="0.4,0.3,0.2,0.1,0.05,0.01,0.001")
    ap.add_argument("--delta", type=float, default=1e-3,
                    help="fixed delta for the measured-distance column")
    ap.add_argument("--grid", type=int, default=4096)
    args = ap.parse_args()

    eps_list = [float(t) for t in args.eps.split(",") if t.strip()]
    cross = generator("cross", dim=2)
    g_cross = invariant_g(cross).g
    d_cross = d_p_delta(cross, args.delta,
                        direction_grid(2, args.grid, bodies=(cross,))).value
    print(f"crosspolytope: G = {g_cross:.7f}, "
          f"d(delta={args.delta:g}) = {d_cross:.7f}")
    print(f"G limit of the family as eps -> 0: {2 * math.sqrt(2) / 3:.7f}\n")

    print(f"{'eps':>8} {'G(P(eps))':>12} {'d at fixed delta':>17}")
    for eps in eps_list:
        P = generator("hexagon", eps=eps)
        g = invariant_g(P).g
        d = d_p_delta(P, args.delta,
                      direction_grid(2, args.grid, bodies=(P,))).value
        print(f"{eps:>8.3g} {g:>12.7f} {d:>17.7f}")


if __name__ == "__main__":
    main()
