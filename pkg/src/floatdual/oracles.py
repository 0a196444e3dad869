"""Numerical floating-body and illumination-body oracles.

The floating body P_delta is queried through its support function: for a
symmetric polytope every support hyperplane of P_delta cuts off exactly
delta*|P|, so h_{P_delta}(v) is the unique t with capvol(P, v, t) = delta*|P|,
found by monotone bisection. Cap volumes are evaluated exactly per simplex
of a fixed triangulation (stable frustum recurrence), so bisection is the
only error source.

The illumination body K^delta is queried through its radial function: the
hull-volume excess of t*u over K is an exact piecewise-affine function of t
(one term per visible facet), again solved by bisection.

The polar-of-illumination body of P is ((P*)^{delta'})*, realized as radial
r(u) = 1 / h_{(P*)^{delta'}}(u) with the support taken as a max over a
direction grid. Radial functions of floating bodies are likewise grid
minima of support ratios, converging from above as the grid refines; grids
always contain the vertex directions of the body and of its polar, where
the polygonal extremes occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import (
    BadParameter,
    ConvergenceFailure,
    NotInJohnSandwich,
    OriginNotInterior,
    SymmetryRequired,
)
from .geometry import (
    DEFAULT_TOL,
    VPolytope,
    _frustum_fractions,
    _simplex_volumes,
    facet_list,
    hull_facets,
    is_centrally_symmetric,
    triangulate,
    volume,
)
from .duality import polar
from .invariants import InvariantReport, invariant_g

BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200
DEFAULT_GRID_SIZES = {2: 4096, 3: 20000, 4: 50000}


# ---------------------------------------------------------------------------
# Direction grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """Unit directions used to discretize sup/inf over the sphere.

    Always closed under negation and always containing the normalized
    vertices of every body passed to the builder (and of their polars).
    """

    dim: int
    directions: np.ndarray  # (G, dim), unit rows
    kind: str
    spacing: float          # typical angular gap, used for grid-error slack

    @property
    def size(self) -> int:
        return self.directions.shape[0]


def _sphere_points_half(dim: int, half: int, seed: int, jitter: float) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if dim == 2:
        theta = np.pi * (np.arange(half) + 0.5) / half
        if jitter > 0.0:
            theta = theta + jitter * (np.pi / half) * rng.uniform(-0.5, 0.5, half)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        # Fibonacci lattice on the upper half, then mirrored by the caller
        i = np.arange(half)
        z = (i + 0.5) / half          # upper hemisphere only
        phi = i * np.pi * (3.0 - np.sqrt(5.0))
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    elif dim == 4:
        sampler = qmc.Halton(d=4, scramble=False)
        raw = sampler.random(half + 8)[8:]  # drop the degenerate leading points
        pts = ndtri(np.clip(raw, 1e-12, 1.0 - 1e-12))
        norms = np.linalg.norm(pts, axis=1)
        good = norms > 1e-9
        pts = pts[good] / norms[good, None]
    else:
        raise BadParameter(f"direction grids support dim 2..4, got {dim}")
    if jitter > 0.0:
        pts = pts + jitter * _spacing(dim, 2 * half) * rng.normal(size=pts.shape)
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return pts


def _spacing(dim: int, size: int) -> float:
    if dim == 2:
        return 2.0 * np.pi / size
    if dim == 3:
        return float(np.sqrt(4.0 * np.pi / size))
    return float((2.0 * np.pi ** 2 / size) ** (1.0 / 3.0))


def direction_grid(dim: int, size: int | None = None, bodies=(),
                   extra: np.ndarray | None = None, seed: int = 0,
                   jitter: float = 0.0, tol: float = DEFAULT_TOL) -> DirectionGrid:
    """Build a +/- symmetric direction grid.

    `bodies` are V-polytopes whose normalized vertices and polar vertices
    (equivalently, facet normals) are appended exactly; `extra` appends
    further unit directions verbatim.
    """
    size = DEFAULT_GRID_SIZES[dim] if size is None else size
    if size < 64:
        raise BadParameter("grid size must be at least 64")
    half = _sphere_points_half(dim, size // 2, seed, jitter)
    parts = [half, -half]
    for P in bodies:
        v = P.vertices / np.linalg.norm(P.vertices, axis=1, keepdims=True)
        parts.append(v)
        Q = polar(P, tol)
        w = Q.vertices / np.linalg.norm(Q.vertices, axis=1, keepdims=True)
        parts.append(w)
    if extra is not None:
        e = np.asarray(extra, dtype=float)
        parts.append(e / np.linalg.norm(e, axis=1, keepdims=True))
    dirs = np.vstack(parts)
    kinds = {2: "uniform-angular", 3: "fibonacci", 4: "halton-sphere"}
    return DirectionGrid(dim, dirs, kinds[dim], _spacing(dim, size))


# ---------------------------------------------------------------------------
# Body oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BodyOracle:
    """Radial/support query interface over a star-shaped body around 0."""

    radial_fn: object
    support_fn: object
    label: str

    def radial(self, u: np.ndarray):
        u = np.asarray(u, dtype=float)
        single = u.ndim == 1
        out = self.radial_fn(np.atleast_2d(u))
        return float(out[0]) if single else out

    def support(self, u: np.ndarray):
        u = np.asarray(u, dtype=float)
        single = u.ndim == 1
        out = self.support_fn(np.atleast_2d(u))
        return float(out[0]) if single else out


def _chunked_minratio(dirs: np.ndarray, values: np.ndarray, U: np.ndarray,
                      chunk: int = 256) -> np.ndarray:
    """min over grid v of values[v] / <u, v> restricted to positive dots."""
    out = np.empty(U.shape[0])
    for start in range(0, U.shape[0], chunk):
        block = U[start:start + chunk]
        dots = block @ dirs.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(dots > 1e-12, values[None, :] / dots, np.inf)
        out[start:start + chunk] = ratios.min(axis=1)
    return out


def _chunked_maxdot(points: np.ndarray, U: np.ndarray, chunk: int = 256) -> np.ndarray:
    """max over rows p of <u, p>, evaluated in blocks of query directions."""
    out = np.empty(U.shape[0])
    for start in range(0, U.shape[0], chunk):
        block = U[start:start + chunk]
        out[start:start + chunk] = (block @ points.T).max(axis=1)
    return out


def _special_directions(P: VPolytope, tol: float) -> np.ndarray:
    """Normalized vertex directions of P and of its polar (= facet normals)."""
    v = P.vertices / np.linalg.norm(P.vertices, axis=1, keepdims=True)
    Q = polar(P, tol)
    w = Q.vertices / np.linalg.norm(Q.vertices, axis=1, keepdims=True)
    return np.vstack([v, w])


def vertex_fan_directions(P: VPolytope, scale: float, tol: float = DEFAULT_TOL,
                          lo: float = 0.02, hi: float = 30.0,
                          count: int = 48) -> np.ndarray:
    """Directions fanned around every vertex/facet-normal ray of P at
    geometrically spaced angles in [lo, hi] * scale.

    The ratio extremes between the floating body and the polar-illumination
    body live at angular distances of order delta^(1/n) (floating caps) and
    delta' (illumination pinches) off those rays; a grid with fixed spacing
    cannot resolve them once the scale is small, so the angular
    neighbourhoods are re-sampled geometrically per scale.
    """
    n = P.dim
    angles = scale * np.geomspace(lo, hi, count)
    angles = angles[angles < 1.2]
    specials = _special_directions(P, tol)
    out = []
    for s in specials:
        B = _orthobasis_rows(s)
        for a in angles:
            ca, sa = math.cos(a), math.sin(a)
            for t in B:
                out.append(ca * s + sa * t)
                out.append(ca * s - sa * t)
    if not out:
        return np.zeros((0, n))
    dirs = np.array(out)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def _orthobasis_rows(s: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(s.reshape(1, -1))
    return vt[1:]


def augment_grid(grid: DirectionGrid, extra: np.ndarray) -> DirectionGrid:
    """Grid with extra unit directions (and their negatives) appended."""
    if extra.size == 0:
        return grid
    dirs = np.vstack([grid.directions, extra, -extra])
    return DirectionGrid(grid.dim, dirs, grid.kind, grid.spacing)


def polytope_oracle(P: VPolytope, tol: float = DEFAULT_TOL) -> BodyOracle:
    """Exact radial/support oracle of the polytope itself."""
    hrep = hull_facets(P, tol)
    if hrep.offsets.min() <= tol:
        raise OriginNotInterior("oracle requires 0 in the interior")
    normals, offsets = hrep.normals, hrep.offsets
    verts = P.vertices

    def radial_fn(U):
        dots = U @ normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(dots > 1e-15, offsets[None, :] / dots, np.inf)
        return ratios.min(axis=1)

    def support_fn(U):
        return (U @ verts.T).max(axis=1)

    return BodyOracle(radial_fn, support_fn, "polytope")


# ---------------------------------------------------------------------------
# Floating body
# ---------------------------------------------------------------------------

class FloatingBody:
    """Support/radial oracle for the floating body P_delta of a symmetric P."""

    def __init__(self, P: VPolytope, delta: float, tol: float = DEFAULT_TOL,
                 bisection_tol: float = BISECTION_TOL,
                 max_iter: int = BISECTION_MAX_ITER):
        if not (0.0 < delta < 0.5):
            raise BadParameter("floating body needs delta in (0, 1/2)")
        if not is_centrally_symmetric(P, tol):
            raise SymmetryRequired(
                "support-level floating bodies need central symmetry"
            )
        self.P = P
        self.delta = float(delta)
        self.tol = tol
        self.bisection_tol = bisection_tol
        self.max_iter = max_iter
        self.simplices = triangulate(P, tol)       # (S, n+1, n)
        self.simplex_volumes = _simplex_volumes(self.simplices)
        self.volume = float(self.simplex_volumes.sum())
        self.target = self.delta * self.volume

    def support(self, V: np.ndarray) -> np.ndarray:
        """h_{P_delta}(v) for each row v, by bisection on the cap volume."""
        V = np.atleast_2d(np.asarray(V, dtype=float))
        S = self.simplices.shape[0]
        # bound the (directions x simplices x vertices) workspace
        max_rows = max(1, 2_000_000 // max(S, 1))
        if V.shape[0] > max_rows:
            return np.concatenate([
                self.support(V[i:i + max_rows])
                for i in range(0, V.shape[0], max_rows)
            ])
        return self._support_block(V)

    def _support_block(self, V: np.ndarray) -> np.ndarray:
        G = V.shape[0]
        S, k = self.simplices.shape[0], self.simplices.shape[1]
        vals = np.einsum("skn,gn->gsk", self.simplices, V)
        vals_desc = -np.sort(-vals, axis=2)
        flat = vals_desc.reshape(G * S, k)
        lo = vals_desc[:, :, -1].min(axis=1)
        hi = vals_desc[:, :, 0].max(axis=1)
        tol_abs = self.bisection_tol * self.volume
        done = np.zeros(G, dtype=bool)
        mid = 0.5 * (lo + hi)
        for _ in range(self.max_iter):
            mid = 0.5 * (lo + hi)
            frac = _frustum_fractions(flat, np.repeat(mid, S))
            caps = (frac.reshape(G, S) * self.simplex_volumes[None, :]).sum(axis=1)
            resid = caps - self.target
            done = np.abs(resid) <= tol_abs
            if done.all():
                break
            hi = np.where(~done & (resid < 0.0), mid, hi)
            lo = np.where(~done & (resid > 0.0), mid, lo)
        if not done.all():
            raise ConvergenceFailure(
                f"floating-support bisection stalled on {(~done).sum()} directions"
            )
        return mid

    def radial_on_grid(self, grid: DirectionGrid, U: np.ndarray | None = None):
        """Grid upper bound on r_{P_delta}: min over grid v of h(v)/<u,v>."""
        H = self.support(grid.directions)
        U = grid.directions if U is None else np.atleast_2d(U)
        return _chunked_minratio(grid.directions, H, U)

    def oracle(self, grid: DirectionGrid) -> BodyOracle:
        H = self.support(grid.directions)
        dirs = grid.directions

        def radial_fn(U):
            return _chunked_minratio(dirs, H, np.atleast_2d(U))

        def support_fn(U):
            return self.support(np.atleast_2d(U))

        return BodyOracle(radial_fn, support_fn, f"floating(delta={self.delta:g})")


def floating_support(P: VPolytope, delta: float, v: np.ndarray,
                     tol: float = DEFAULT_TOL,
                     bisection_tol: float = BISECTION_TOL) -> float:
    """Support value of the floating body in one direction."""
    fb = FloatingBody(P, delta, tol, bisection_tol)
    return float(fb.support(np.asarray(v, dtype=float)[None, :])[0])


def floating_radial(P: VPolytope, delta: float, u: np.ndarray,
                    grid: DirectionGrid, tol: float = DEFAULT_TOL,
                    bisection_tol: float = BISECTION_TOL) -> float:
    """Grid upper bound on the floating body's radial function at u."""
    fb = FloatingBody(P, delta, tol, bisection_tol)
    u = np.asarray(u, dtype=float)
    return float(fb.radial_on_grid(grid, u[None, :])[0])


def vertex_float_ratio(P: VPolytope, delta: float, xi: np.ndarray,
                       report: InvariantReport | None = None,
                       tol: float = DEFAULT_TOL) -> float:
    """Closed-form |xi_delta| / |xi| = 1 - alpha_xi * delta^(1/n)."""
    if delta < 0.0:
        raise BadParameter("delta must be nonnegative")
    xi = np.asarray(xi, dtype=float)
    if report is None:
        from .invariants import vertex_invariants
        alpha = vertex_invariants(P, xi, tol).alpha
    else:
        scale = max(1.0, float(np.abs(P.vertices).max()))
        alpha = None
        for row in report.per_vertex:
            if np.linalg.norm(row.vertex - xi) <= tol * scale:
                alpha = row.alpha
                break
        if alpha is None:
            from .invariants import vertex_invariants
            alpha = vertex_invariants(P, xi, tol).alpha
    return 1.0 - alpha * delta ** (1.0 / P.dim)


# ---------------------------------------------------------------------------
# Illumination body
# ---------------------------------------------------------------------------

class IlluminationBody:
    """Radial oracle for the illumination body K^delta."""

    def __init__(self, K: VPolytope, delta: float, tol: float = DEFAULT_TOL,
                 bisection_tol: float = BISECTION_TOL,
                 max_iter: int = BISECTION_MAX_ITER):
        if delta < 0.0:
            raise BadParameter("illumination body needs delta >= 0")
        self.K = K
        self.delta = float(delta)
        self.tol = tol
        self.bisection_tol = bisection_tol
        self.max_iter = max_iter
        hrep = hull_facets(K, tol)
        if hrep.offsets.min() <= tol:
            raise OriginNotInterior("illumination oracle requires 0 interior")
        self.normals = hrep.normals
        self.offsets = hrep.offsets
        facs = facet_list(K, hrep, tol)
        self.measures = np.array([F.measure for F in facs])
        self.volume = volume(K, tol)
        self.target = self.delta * self.volume

    def _excess(self, T: np.ndarray, dots: np.ndarray) -> np.ndarray:
        """Hull-volume excess of the points T[i]*u_i over K (one cone per
        visible facet, exact and piecewise affine in T)."""
        n = self.K.dim
        gaps = np.clip(T[:, None] * dots - self.offsets[None, :], 0.0, None)
        return (gaps * self.measures[None, :]).sum(axis=1) / n

    def radial(self, U: np.ndarray) -> np.ndarray:
        U = np.atleast_2d(np.asarray(U, dtype=float))
        dots = U @ self.normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(dots > 1e-15, self.offsets[None, :] / dots, np.inf)
        r0 = ratios.min(axis=1)
        if self.delta == 0.0:
            return r0
        lo = r0.copy()
        hi = r0.copy() * (1.0 + max(self.delta, 1e-6))
        for _ in range(200):
            bad = self._excess(hi, dots) < self.target
            if not bad.any():
                break
            hi = np.where(bad, lo + 2.0 * (hi - lo), hi)
        tol_abs = self.bisection_tol * self.volume
        mid = 0.5 * (lo + hi)
        done = np.zeros(U.shape[0], dtype=bool)
        for _ in range(self.max_iter):
            mid = 0.5 * (lo + hi)
            resid = self._excess(mid, dots) - self.target
            done = np.abs(resid) <= tol_abs
            if done.all():
                break
            lo = np.where(~done & (resid < 0.0), mid, lo)
            hi = np.where(~done & (resid > 0.0), mid, hi)
        if not done.all():
            raise ConvergenceFailure(
                f"illumination bisection stalled on {(~done).sum()} directions"
            )
        return mid


def illumination_radial(K: VPolytope, delta: float, u: np.ndarray,
                        tol: float = DEFAULT_TOL,
                        bisection_tol: float = BISECTION_TOL) -> float:
    """Radial of K^delta in one direction."""
    ib = IlluminationBody(K, delta, tol, bisection_tol)
    return float(ib.radial(np.asarray(u, dtype=float)[None, :])[0])


def polar_illumination_oracle(P: VPolytope, delta_prime: float,
                              grid: DirectionGrid, tol: float = DEFAULT_TOL,
                              bisection_tol: float = BISECTION_TOL) -> BodyOracle:
    """Oracle for ((P*)^{delta'})*: radial r(u) = 1 / h_{(P*)^{delta'}}(u),
    the support taken as a max over the grid's boundary points."""
    if not is_centrally_symmetric(P, tol):
        raise SymmetryRequired("polar-illumination oracle needs central symmetry")
    Q = polar(P, tol)
    ib = IlluminationBody(Q, delta_prime, tol, bisection_tol)
    rad = ib.radial(grid.directions)
    boundary = rad[:, None] * grid.directions

    def radial_fn(U):
        return 1.0 / _chunked_maxdot(boundary, np.atleast_2d(U))

    r_grid = 1.0 / _chunked_maxdot(boundary, grid.directions)
    inner = r_grid[:, None] * grid.directions

    def support_fn(U):
        return _chunked_maxdot(inner, np.atleast_2d(U))

    return BodyOracle(radial_fn, support_fn,
                      f"polar-illumination(delta'={delta_prime:g})")


def floating_oracle(P: VPolytope, delta: float, grid: DirectionGrid,
                    tol: float = DEFAULT_TOL,
                    bisection_tol: float = BISECTION_TOL) -> BodyOracle:
    """Grid-backed oracle for the floating body."""
    return FloatingBody(P, delta, tol, bisection_tol).oracle(grid)


# ---------------------------------------------------------------------------
# Distance, optimized distance, convergence tables
# ---------------------------------------------------------------------------

def distance_d(A: BodyOracle, B: BodyOracle, grid: DirectionGrid) -> float:
    """Multiplicative sandwich distance max over the grid of the two radial
    ratios; always >= 1."""
    ra = A.radial(grid.directions)
    rb = B.radial(grid.directions)
    if (ra <= 0.0).any() or (rb <= 0.0).any():
        raise OriginNotInterior("distance needs positive radial functions")
    return float(max((ra / rb).max(), (rb / ra).max(), 1.0))


@dataclass(frozen=True)
class SearchConfig:
    """Settings for the delta' minimization inside d_P(delta)."""

    coarse: int = 13          # coarse scan points across the bracket
    brackets: int = 3         # multi-start golden-section brackets
    gss_rel_tol: float = 1e-4
    local_scan: int = 9       # final scan around the best point
    c_hi_factor: float = 4.0  # bracket top = factor * max crossing * delta^(1/n)


def _golden_section(f, a: float, b: float, rel_tol: float, max_iter: int = 120):
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1, f2 = f(x1), f(x2)
    span0 = max(b - a, 1e-300)
    for _ in range(max_iter):
        if (b - a) <= rel_tol * span0:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


@dataclass(frozen=True)
class DPDeltaResult:
    value: float
    best_delta_prime: float


def d_p_delta(P: VPolytope, delta: float, grid: DirectionGrid | None = None,
              search: SearchConfig | None = None,
              report: InvariantReport | None = None,
              tol: float = DEFAULT_TOL,
              bisection_tol: float = BISECTION_TOL) -> DPDeltaResult:
    """d_P(delta) = inf over delta' of d(P_delta, ((P*)^{delta'})*).

    The bracket [0, c_hi * delta^(1/n)] comes from the crossing points of
    the per-vertex envelope; the minimization is a coarse scan plus
    multi-start golden sections plus a final local scan (unimodality is
    expected but not assumed).
    """
    search = SearchConfig() if search is None else search
    report = invariant_g(P, tol) if report is None else report
    if grid is None:
        grid = direction_grid(P.dim, bodies=(P,), tol=tol)
    grid = augment_grid(grid, vertex_fan_directions(P, delta ** (1.0 / P.dim), tol))
    alphas = np.array([r.alpha for r in report.per_vertex])
    betas = np.array([r.beta for r in report.per_vertex])
    c_hi = search.c_hi_factor * float((alphas / (betas + betas.max())).max())
    hi = c_hi * delta ** (1.0 / P.dim)

    fb = FloatingBody(P, delta, tol, bisection_tol)
    H = fb.support(grid.directions)
    r_float = _chunked_minratio(grid.directions, H, grid.directions)

    cache: dict[float, float] = {}

    def f(dp: float) -> float:
        dp = max(float(dp), 0.0)
        if dp not in cache:
            oracle = polar_illumination_oracle(P, dp, grid, tol, bisection_tol)
            r_ill = oracle.radial(grid.directions)
            cache[dp] = float(max((r_float / r_ill).max(),
                                  (r_ill / r_float).max(), 1.0))
        return cache[dp]

    # coarse scan
    coarse = np.linspace(0.0, hi, search.coarse)
    coarse_vals = [f(x) for x in coarse]
    order = np.argsort(coarse_vals)

    best_x = float(coarse[order[0]])
    best_v = float(coarse_vals[order[0]])
    step = hi / (search.coarse - 1)
    for idx in order[: search.brackets]:
        a = max(0.0, coarse[idx] - step)
        b = min(hi, coarse[idx] + step)
        x, v = _golden_section(f, a, b, search.gss_rel_tol)
        if v < best_v:
            best_x, best_v = float(x), float(v)

    # final local scan
    for x in np.linspace(max(0.0, best_x - 0.25 * step),
                         min(hi, best_x + 0.25 * step), search.local_scan):
        v = f(float(x))
        if v < best_v:
            best_x, best_v = float(x), v
    return DPDeltaResult(best_v, best_x)


@dataclass(frozen=True)
class ConvergenceRow:
    delta: float
    d_value: float
    normalized: float
    best_delta_prime: float


@dataclass(frozen=True)
class ConvergenceResult:
    rows: tuple
    extrapolated: float | None
    closed_form: float


def convergence_table(P: VPolytope, deltas, grid: DirectionGrid | None = None,
                      search: SearchConfig | None = None,
                      tol: float = DEFAULT_TOL,
                      bisection_tol: float = BISECTION_TOL) -> ConvergenceResult:
    """Batch d_P(delta) over a delta list, with the normalized values
    (d_P(delta) - 1) / delta^(1/n) and a two-point extrapolation of their
    limit assuming a further O(delta^(1/n)) correction."""
    report = invariant_g(P, tol)
    if grid is None:
        grid = direction_grid(P.dim, bodies=(P,), tol=tol)
    rows = []
    for d in deltas:
        res = d_p_delta(P, float(d), grid, search, report, tol, bisection_tol)
        norm = (res.value - 1.0) / float(d) ** (1.0 / P.dim)
        rows.append(ConvergenceRow(float(d), res.value, norm, res.best_delta_prime))
    extrapolated = None
    if len(rows) >= 2:
        p = 1.0 / P.dim
        a, b = rows[-2], rows[-1]
        ra = a.delta ** p
        rb = b.delta ** p
        if abs(ra - rb) > 0.0:
            slope = (a.normalized - b.normalized) / (ra - rb)
            extrapolated = float(b.normalized - slope * rb)
    return ConvergenceResult(tuple(rows), extrapolated, report.g)


# ---------------------------------------------------------------------------
# Inclusion chain and uniform bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InclusionChainReport:
    """Grid check of P_delta inside P inside P^{delta'}, plus the polar
    illumination body sitting inside P."""

    floating_inside: bool
    polar_illumination_inside: bool
    illumination_outside: bool
    worst_floating_margin: float
    worst_polar_illumination_margin: float
    worst_illumination_margin: float

    @property
    def ok(self) -> bool:
        return (self.floating_inside and self.polar_illumination_inside
                and self.illumination_outside)


def inclusion_chain(P: VPolytope, delta: float, delta_prime: float,
                    grid: DirectionGrid | None = None,
                    tol: float = DEFAULT_TOL,
                    bisection_tol: float = BISECTION_TOL) -> InclusionChainReport:
    """Radial inclusion checks on the grid.

    Checks r_{P_delta} <= r_P <= r_{P^{delta'}} (floating body inside P,
    illumination body outside) and r_{((P*)^{delta'})*} <= r_P; the polar of
    an illumination body of the polar always sits inside P, with a small
    slack for the grid's support-sampling error.
    """
    if grid is None:
        grid = direction_grid(P.dim, bodies=(P,), tol=tol)
    U = grid.directions
    r_p = polytope_oracle(P, tol).radial(U)
    fb = FloatingBody(P, delta, tol, bisection_tol)
    r_f = fb.radial_on_grid(grid)
    r_i = IlluminationBody(P, delta_prime, tol, bisection_tol).radial(U)
    r_pi = polar_illumination_oracle(P, delta_prime, grid, tol,
                                     bisection_tol).radial(U)
    slack = max(1e-9, grid.spacing ** 2)
    m_f = float((r_p - r_f).min())
    m_i = float((r_i - r_p).min())
    m_pi = float((r_p * (1.0 + slack) - r_pi).min())
    return InclusionChainReport(
        floating_inside=m_f >= -1e-12,
        polar_illumination_inside=m_pi >= 0.0,
        illumination_outside=m_i >= -1e-12,
        worst_floating_margin=m_f,
        worst_polar_illumination_margin=m_pi,
        worst_illumination_margin=m_i,
    )


def _unit_ball_volume(k: int) -> float:
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


def uniform_bound_constant(n: int) -> float:
    """G_n = sqrt(n) * (n |B_2^n| / |B_2^{n-1}|)^(1/n)."""
    return math.sqrt(n) * (n * _unit_ball_volume(n) / _unit_ball_volume(n - 1)) ** (1.0 / n)


@dataclass(frozen=True)
class BoundCheckRow:
    delta: float
    distance: float
    bound: float
    margin: float


@dataclass(frozen=True)
class BoundCheckReport:
    constant: float
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(row.margin >= 0.0 for row in self.rows)


def uniform_bound_check(S: VPolytope, deltas, grid: DirectionGrid | None = None,
                        tol: float = DEFAULT_TOL,
                        bisection_tol: float = BISECTION_TOL) -> BoundCheckReport:
    """Verify d(S_delta, S) <= 1 + G_n delta^(1/n) for each delta.

    S must already be sandwiched between the unit ball and sqrt(n) times it
    (checked through the radial extremes on the grid, which contains the
    facet normals and vertex directions, so the check is exact)."""
    n = S.dim
    if grid is None:
        grid = direction_grid(n, bodies=(S,), tol=tol)
    oracle = polytope_oracle(S, tol)
    r_s = oracle.radial(grid.directions)
    if r_s.min() < 1.0 - 1e-9 or r_s.max() > math.sqrt(n) + 1e-9:
        raise NotInJohnSandwich(
            f"radial range [{r_s.min():.6g}, {r_s.max():.6g}] is not inside "
            f"[1, sqrt({n})]"
        )
    if not is_centrally_symmetric(S, tol):
        raise SymmetryRequired("the uniform bound check needs central symmetry")
    g_n = uniform_bound_constant(n)
    rows = []
    for d in deltas:
        d = float(d)
        if d == 0.0:
            dist = 1.0
        else:
            fb = FloatingBody(S, d, tol, bisection_tol)
            r_f = fb.radial_on_grid(grid)
            dist = float(max((r_s / r_f).max(), 1.0))
        bound = 1.0 + g_n * d ** (1.0 / n)
        rows.append(BoundCheckRow(d, dist, bound, bound - dist))
    return BoundCheckReport(g_n, tuple(rows))
