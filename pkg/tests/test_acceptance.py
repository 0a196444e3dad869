"""Acceptance suite: every exit criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail line
per criterion.
"""

import math
import time

import numpy as np
import pytest

from floatdual.geometry import Halfspace, VPolytope, apply_linear, clip, volume
from floatdual.duality import polar
from floatdual.invariants import generator, invariant_g
from floatdual.oracles import (
    FloatingBody,
    IlluminationBody,
    augment_grid,
    d_p_delta,
    direction_grid,
    illumination_radial,
    inclusion_chain,
    polar_illumination_oracle,
    polytope_oracle,
    uniform_bound_check,
    uniform_bound_constant,
    vertex_fan_directions,
)

from conftest import random_invertible, random_symmetric_polytope


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")


def hexagon_g(eps: float) -> float:
    return 2 * math.sqrt(2) * (1 + eps) ** 0.5 * (1 - eps) ** 1.5 / (3 - 2 * eps)


def hexagon_c0(eps: float) -> float:
    return (1 + eps) ** 0.5 * (1 - eps) ** 1.5 / (
        math.sqrt(2) * (2 - eps) * (3 - 2 * eps)
    )


def test_criterion_01_cube_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 4):
        got = invariant_g(generator("cube", dim=n)).g
        expect = math.factorial(n) ** (1 / n) / n
        worst = max(worst, abs(got - expect) / expect)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 1.0
    _report(1, ok, f"cube G rel err {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 1.0


def test_criterion_02_crosspolytope_closed_form():
    worst = 0.0
    for n in (2, 3, 4):
        got = invariant_g(generator("cross", dim=n)).g
        expect = 2 ** (1 / n) / 2
        worst = max(worst, abs(got - expect) / expect)
    # n = 2 consistency: the crosspolytope is a rotated square
    g_cube = invariant_g(generator("cube", dim=2)).g
    g_cross = invariant_g(generator("cross", dim=2)).g
    agree = abs(g_cube - g_cross) <= 1e-9
    ok = worst <= 1e-9 and agree
    _report(2, ok, f"cross G rel err {worst:.2e}, square/diamond agree: {agree}")
    assert worst <= 1e-9
    assert agree


def test_criterion_03_hexagon_family():
    worst_g, worst_mid = 0.0, 0.0
    for eps in (0.1, 0.25, 0.4):
        r = math.sqrt(1 - eps**2)
        rep = invariant_g(generator("hexagon", eps=eps))
        worst_g = max(worst_g,
                      abs(rep.g - hexagon_g(eps)) / hexagon_g(eps),
                      abs(rep.c_star - hexagon_c0(eps)) / hexagon_c0(eps))
        mids = {
            "vol": (rep.volume, 2 * (1 + eps) * r),
            "polar_vol": (rep.polar_volume, (4 - 2 * eps) / r),
        }
        rows = {tuple(np.round(row.vertex, 9)): row for row in rep.per_vertex}
        top = rows[(0.0, 1.0)]
        side = rows[(round(r, 9), eps)]
        mids["alpha1"] = (top.alpha, math.sqrt(2) * r)
        mids["beta1"] = (top.beta, (4 - 2 * eps) / (1 - eps))
        mids["alpha2"] = (side.alpha, math.sqrt(1 + eps))
        mids["beta2"] = (side.beta, 8 - 4 * eps)
        for got, expect in mids.values():
            worst_mid = max(worst_mid, abs(got - expect) / abs(expect))
    ok = worst_g <= 1e-7 and worst_mid <= 1e-9
    _report(3, ok, f"G/c0 rel err {worst_g:.2e}, intermediates {worst_mid:.2e}")
    assert worst_g <= 1e-7
    assert worst_mid <= 1e-9


def test_criterion_04_form_equivalence_random():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 4))
        P = random_symmetric_polytope(rng, dim, dim + 2)
        rep = invariant_g(P)
        worst = max(worst, abs(rep.g - rep.g_cone_form) / max(1.0, rep.g))
    ok = worst <= 1e-9
    _report(4, ok, f"alpha/beta vs cone-measure worst diff {worst:.2e}")
    assert ok


def test_criterion_05_affine_invariance():
    rng = np.random.default_rng(5)
    worst = 0.0
    bodies = [generator("cube", dim=2), generator("cube", dim=3),
              generator("cross", dim=2), generator("cross", dim=3),
              generator("hexagon", eps=0.25)]
    for P in bodies:
        g0 = invariant_g(P).g
        for _ in range(20):
            L = random_invertible(rng, P.dim)
            g1 = invariant_g(apply_linear(P, L)).g
            worst = max(worst, abs(g1 - g0) / g0)
    ok = worst <= 1e-6
    _report(5, ok, f"worst |G(LP)-G(P)|/G over 20 maps x 5 bodies: {worst:.2e}")
    assert ok


def test_criterion_06_first_order_oracle_agreement():
    t0 = time.perf_counter()
    delta = 1e-5
    bodies = [generator("cube", dim=2), generator("cross", dim=2),
              generator("cube", dim=3), generator("cross", dim=3),
              generator("hexagon", eps=0.25)]
    worst_f, worst_i = 0.0, 0.0
    for P in bodies:
        rep = invariant_g(P)
        grid = direction_grid(P.dim, bodies=(P,))
        fb = FloatingBody(P, delta)
        H = fb.support(grid.directions)
        oracle = polar_illumination_oracle(P, delta, grid)
        for row in rep.per_vertex:
            xi = row.vertex
            nxi = float(np.linalg.norm(xi))
            u = xi / nxi
            dots = grid.directions @ u
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(dots > 1e-12, H / dots, np.inf)
            r_float = float(ratios.min()) / nxi
            expect_f = 1 - row.alpha * delta ** (1 / P.dim)
            worst_f = max(worst_f, abs(r_float - expect_f))
            r_ill = oracle.radial(u) / nxi
            expect_i = 1 / (1 + row.beta * delta)
            worst_i = max(worst_i, abs(r_ill - expect_i))
    elapsed = time.perf_counter() - t0
    ok = worst_f <= 5e-3 and worst_i <= 5e-3 and elapsed < 120.0
    _report(6, ok, f"floating dev {worst_f:.2e}, illumination dev {worst_i:.2e}, "
                   f"{elapsed:.1f}s")
    assert worst_f <= 5e-3
    assert worst_i <= 5e-3
    assert elapsed < 120.0


@pytest.mark.parametrize("name,body,gstar", [
    ("square", generator("cube", dim=2), math.sqrt(2) / 2),
    ("hexagon(0.25)", generator("hexagon", eps=0.25), hexagon_g(0.25)),
])
def test_criterion_07_limit_reproduction(name, body, gstar):
    t0 = time.perf_counter()
    rep = invariant_g(body)
    grid = direction_grid(2, bodies=(body,))
    deltas = (1e-5, 1e-6, 1e-7)
    normalized = []
    for d in deltas:
        res = d_p_delta(body, d, grid, report=rep)
        normalized.append((res.value - 1.0) / math.sqrt(d))
    gaps = [abs(v - gstar) for v in normalized]
    monotone = all(gaps[i + 1] <= gaps[i] + 1e-3 * gstar for i in range(len(gaps) - 1))
    within = gaps[-1] <= 0.15 * gstar
    elapsed = time.perf_counter() - t0
    ok = monotone and within and elapsed < 600.0
    _report(7, ok, f"{name}: normalized {['%.4f' % v for v in normalized]} -> "
                   f"{gstar:.4f}, final gap {gaps[-1] / gstar * 100:.1f}%, "
                   f"{elapsed:.0f}s")
    assert monotone
    assert within
    assert elapsed < 600.0


def test_criterion_08_discontinuity():
    limit = 2 * math.sqrt(2) / 3
    g_small = invariant_g(generator("hexagon", eps=1e-3)).g
    near_limit = abs(g_small - limit) <= 0.01 * limit
    g_cross = invariant_g(generator("cross", dim=2)).g
    cross_exact = abs(g_cross - math.sqrt(2) / 2) <= 1e-9
    # at fixed delta the measured distances nearly coincide
    delta = 1e-3
    hexa = generator("hexagon", eps=0.05)
    cross = generator("cross", dim=2)
    d_hex = d_p_delta(hexa, delta, direction_grid(2, bodies=(hexa,))).value
    d_cross = d_p_delta(cross, delta, direction_grid(2, bodies=(cross,))).value
    close = abs(d_hex - d_cross) <= 0.05 * d_cross
    ok = near_limit and cross_exact and close
    _report(8, ok, f"G(P(1e-3))={g_small:.5f} vs {limit:.5f}; "
                   f"d_hex={d_hex:.6f} vs d_cross={d_cross:.6f}")
    assert near_limit
    assert cross_exact
    assert close


def test_criterion_09_uniform_bound():
    g2 = uniform_bound_constant(2)
    constant_ok = abs(g2 - math.sqrt(2 * math.pi)) <= 1e-12
    square = generator("cube", dim=2)
    report = uniform_bound_check(square, [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    margins = [row.margin for row in report.rows]
    ok = constant_ok and report.passed
    _report(9, ok, f"G_2={g2:.6f}, min margin {min(margins):.4f}")
    assert constant_ok
    assert report.passed


def test_criterion_10_invariant_suites():
    bodies = [generator("cube", dim=2), generator("cross", dim=2),
              generator("hexagon", eps=0.25), generator("cube", dim=3),
              generator("cross", dim=3)]
    failures = []
    for seed in (0, 1, 2):
        rng = np.random.default_rng(seed)
        for P in bodies:
            size = 1024 if P.dim == 2 else 4000
            grid = direction_grid(P.dim, size, bodies=(P,), seed=seed,
                                  jitter=0.25)
            # inclusion chain at matched scales
            chain = inclusion_chain(P, 1e-3, 1e-3, grid)
            if not chain.ok:
                failures.append(f"chain seed={seed} {P.dim}d")
            # monotonicity of the floating support and illumination radial
            u = rng.normal(size=P.dim)
            u /= np.linalg.norm(u)
            fb_hi = FloatingBody(P, 1e-2).support(u[None, :])[0]
            fb_lo = FloatingBody(P, 1e-3).support(u[None, :])[0]
            if not fb_lo > fb_hi:
                failures.append(f"floating monotonicity seed={seed}")
            il_lo = illumination_radial(P, 1e-3, u)
            il_hi = illumination_radial(P, 1e-2, u)
            if not il_hi > il_lo:
                failures.append(f"illumination monotonicity seed={seed}")
            # polar involution
            PP = polar(polar(P))
            for v in P.vertices:
                if np.min(np.linalg.norm(PP.vertices - v[None, :], axis=1)) > 1e-9:
                    failures.append(f"polar involution seed={seed}")
                    break
            # clip additivity on a random halfspace
            w = rng.normal(size=P.dim)
            w /= np.linalg.norm(w)
            H = Halfspace(w, 0.15 * float(rng.uniform(-1, 1)))
            v1 = volume(clip(P, H))
            v2 = volume(clip(P, H.complement()))
            if abs(v1 + v2 - volume(P)) > 1e-9 * volume(P):
                failures.append(f"clip additivity seed={seed}")
        # sandwich at delta' = 1e-3 on the 2-d bodies (fan-refined grid)
        for P in bodies[:3]:
            dp = 1e-3
            rep = invariant_g(P)
            grid = augment_grid(
                direction_grid(2, 1024, bodies=(P,), seed=seed, jitter=0.25),
                vertex_fan_directions(P, dp),
            )
            oracle = polar_illumination_oracle(P, dp, grid)
            inner = np.array([row.vertex / (1 + row.beta * dp)
                              for row in rep.per_vertex])
            r_i = oracle.radial(grid.directions)
            r_lo = polytope_oracle(VPolytope(P.dim, inner)).radial(grid.directions)
            if not (r_lo <= r_i * (1 + 1e-9)).all():
                failures.append(f"sandwich lower seed={seed}")
    # flat-point rate: edge midpoint of the square shrinks linearly in delta
    P = generator("cube", dim=2)
    grid = direction_grid(2, 1024, bodies=(P,))
    deltas = np.logspace(-6, -3, 7)
    vals = []
    for d in deltas:
        r = FloatingBody(P, float(d)).radial_on_grid(grid, np.array([[1.0, 0.0]]))[0]
        vals.append(1.0 - float(r))
    slope = float(np.polyfit(np.log(deltas), np.log(vals), 1)[0])
    if not (0.9 <= slope <= 1.1):
        failures.append(f"flat-point slope {slope:.3f}")
    ok = not failures
    _report(10, ok, "all suites clean" if ok else f"failures: {failures}")
    assert ok, failures
