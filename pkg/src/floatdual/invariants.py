"""Closed-form per-vertex quantities and the affine invariant G.

For a centrally symmetric polytope P with vertex xi, let F_xi be the facet
of the polar body with outer normal xi and s(F_xi) its Santalo point. The
per-vertex constants

    alpha_xi = (n |P| / (|(F_xi - s(F_xi))*| * |xi|))^(1/n)
    beta_xi  = n |P*| |xi| / |F_xi|

govern the first-order shrink of the floating body and the first-order
growth of the illumination body of the polar along the ray through xi.
The invariant is the exact min-max

    G(P) = min_{c >= 0} max( max_xi (alpha_xi - c beta_xi), c * max_xi beta_xi ),

a piecewise-linear convex problem solved exactly over its crossing points.
Equivalently G can be written in terms of the normalized cone-measure
densities n_P(xi) = alpha_xi^(-n) and n_{P*}(xi) = 1/beta_xi; both forms are
computed as a consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .duality import (
    SANTALO_RESIDUAL,
    polar,
    polar_facet_data,
    polar_facet_for_vertex,
)
from .errors import BadParameter, SymmetryRequired, UnknownGenerator
from .geometry import (
    DEFAULT_TOL,
    VPolytope,
    is_centrally_symmetric,
    volume,
)


@dataclass(frozen=True, eq=False)
class VertexInvariants:
    """Cone densities and shrink/growth constants attached to one vertex."""

    vertex: np.ndarray
    cone_density: float         # n_P(xi)
    cone_density_polar: float   # n_{P*}(xi)
    alpha: float
    beta: float
    facet_measure: float
    relative_polar_measure: float


@dataclass(frozen=True, eq=False)
class InvariantReport:
    """Per-vertex invariants plus the global min-max data for one polytope."""

    dim: int
    volume: float
    polar_volume: float
    per_vertex: tuple
    beta_max: float
    lambda_: float
    g: float
    c_star: float
    arg_vertices: tuple
    g_cone_form: float

    @property
    def cone_density_polar_total(self) -> float:
        """Sum of n_{P*} over vertices; the cones over the polar facets
        partition the polar body, so this is 1."""
        return float(sum(row.cone_density_polar for row in self.per_vertex))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "volume": self.volume,
            "polar_volume": self.polar_volume,
            "g": self.g,
            "g_cone_form": self.g_cone_form,
            "c_star": self.c_star,
            "beta_max": self.beta_max,
            "lambda": self.lambda_,
            "arg_vertices": list(self.arg_vertices),
            "cone_density_polar_total": self.cone_density_polar_total,
            "per_vertex": [
                {
                    "vertex": row.vertex.tolist(),
                    "alpha": row.alpha,
                    "beta": row.beta,
                    "cone_density": row.cone_density,
                    "cone_density_polar": row.cone_density_polar,
                    "facet_measure": row.facet_measure,
                    "relative_polar_measure": row.relative_polar_measure,
                }
                for row in self.per_vertex
            ],
        }


# ---------------------------------------------------------------------------
# Per-vertex invariants
# ---------------------------------------------------------------------------

def _vertex_row(P, xi, vol_p, vol_q, Q, tol, santalo_residual):
    n = P.dim
    data = polar_facet_data(P, xi, tol=tol, santalo_residual=santalo_residual, Q=Q)
    norm_xi = float(np.linalg.norm(data.vertex))
    f_meas = data.polar_facet.measure
    rp_meas = data.relative_polar_measure
    n_po = f_meas / (n * vol_q * norm_xi)
    n_p = norm_xi * rp_meas / (n * vol_p)
    alpha = (n * vol_p / (rp_meas * norm_xi)) ** (1.0 / n)
    beta = n * vol_q * norm_xi / f_meas
    return VertexInvariants(data.vertex, n_p, n_po, alpha, beta, f_meas, rp_meas)


def vertex_invariants(P: VPolytope, xi, tol: float = DEFAULT_TOL,
                      santalo_residual: float = SANTALO_RESIDUAL) -> VertexInvariants:
    """alpha, beta and both cone densities for one vertex of P."""
    if not is_centrally_symmetric(P, tol):
        raise SymmetryRequired("vertex invariants need a centrally symmetric polytope")
    Q = polar(P, tol)
    vol_p = volume(P, tol)
    vol_q = volume(Q, tol)
    return _vertex_row(P, xi, vol_p, vol_q, Q, tol, santalo_residual)


def _symmetry_pairs(P: VPolytope, tol: float):
    """Indices (i, j) with vertex_j = -vertex_i, each vertex used once."""
    v = P.vertices
    scale = max(1.0, float(np.abs(v).max()))
    taken = np.zeros(P.n_vertices, dtype=bool)
    pairs = []
    for i in range(P.n_vertices):
        if taken[i]:
            continue
        dists = np.linalg.norm(v + v[i][None, :], axis=1)
        dists[taken] = np.inf
        dists[i] = np.inf
        j = int(np.argmin(dists))
        if dists[j] > tol * scale:
            raise SymmetryRequired(f"vertex {v[i].tolist()} has no opposite")
        taken[i] = taken[j] = True
        pairs.append((i, j))
    return pairs


def _minimize_envelope(alphas: np.ndarray, betas: np.ndarray):
    """Exact minimizer of c -> max(max_i(alpha_i - c beta_i), c max_i beta_i).

    The falling envelope meets the rising line at one of the candidate
    crossings c_i = alpha_i / (beta_i + beta_max); evaluating the objective
    at every candidate and taking the smallest value is exact.
    """
    beta_max = float(betas.max())
    candidates = alphas / (betas + beta_max)
    best_val, best_c = np.inf, 0.0
    for c in candidates:
        val = max(float(np.max(alphas - c * betas)), c * beta_max)
        if val < best_val:
            best_val, best_c = val, float(c)
    return best_val, best_c, beta_max


def g_from_constants(alphas, betas):
    """G and its minimizer from per-vertex alpha/beta arrays."""
    val, c, _ = _minimize_envelope(np.asarray(alphas, float), np.asarray(betas, float))
    return val, c


def invariant_g(P: VPolytope, tol: float = DEFAULT_TOL,
                santalo_residual: float = SANTALO_RESIDUAL) -> InvariantReport:
    """Full invariant report: per-vertex rows, G, the minimizing c, Lambda.

    Invariants are computed for one representative of each +/- vertex pair
    and mirrored, which halves the Santalo solves.
    """
    if not is_centrally_symmetric(P, tol):
        raise SymmetryRequired("G is defined for centrally symmetric polytopes")
    n = P.dim
    Q = polar(P, tol)
    vol_p = volume(P, tol)
    vol_q = volume(Q, tol)

    rows: list = [None] * P.n_vertices
    for i, j in _symmetry_pairs(P, tol):
        row = _vertex_row(P, P.vertices[i], vol_p, vol_q, Q, tol, santalo_residual)
        rows[i] = row
        rows[j] = VertexInvariants(
            P.vertices[j], row.cone_density, row.cone_density_polar,
            row.alpha, row.beta, row.facet_measure, row.relative_polar_measure,
        )

    alphas = np.array([r.alpha for r in rows])
    betas = np.array([r.beta for r in rows])
    g, c_star, beta_max = _minimize_envelope(alphas, betas)

    # same minimization through the cone-measure densities
    n_p = np.array([r.cone_density for r in rows])
    n_po = np.array([r.cone_density_polar for r in rows])
    g_cone, _, _ = _minimize_envelope(n_p ** (-1.0 / n), 1.0 / n_po)

    scale = max(1.0, g)
    args = [
        i for i in range(len(rows))
        if abs((alphas[i] - c_star * betas[i]) - g) <= 1e-9 * scale
        or abs(betas[i] - beta_max) <= 1e-12 * beta_max
    ]

    lam = lambda_constant(P, tol)
    return InvariantReport(
        dim=n, volume=vol_p, polar_volume=vol_q, per_vertex=tuple(rows),
        beta_max=beta_max, lambda_=lam, g=g, c_star=c_star,
        arg_vertices=tuple(args), g_cone_form=g_cone,
    )


def lambda_constant(P: VPolytope, tol: float = DEFAULT_TOL) -> float:
    """Uniform floating-body shrink rate: min over polar vertices zeta of
    |P| * |zeta| / |F_zeta|, with F_zeta the facet of P dual to zeta."""
    if not is_centrally_symmetric(P, tol):
        raise SymmetryRequired("Lambda is defined for centrally symmetric polytopes")
    Q = polar(P, tol)
    vol_p = volume(P, tol)
    best = np.inf
    for i, _ in _symmetry_pairs(Q, tol):
        zeta = Q.vertices[i]
        F = polar_facet_for_vertex(Q, zeta, tol)
        best = min(best, vol_p * float(np.linalg.norm(zeta)) / F.measure)
    return float(best)


# ---------------------------------------------------------------------------
# Named generators
# ---------------------------------------------------------------------------

def generator(name: str, dim: int | None = None, eps: float | None = None) -> VPolytope:
    """Named polytopes: cube [-1,1]^n, crosspolytope conv(+/-e_i), and the
    hexagon family conv[+/-e2, +/-sqrt(1-eps^2) e1 +/- eps e2] in the plane."""
    if name == "cube":
        d = 3 if dim is None else dim
        if d not in (2, 3, 4):
            raise BadParameter("cube supports dim 2, 3, 4")
        verts = np.array(list(product((-1.0, 1.0), repeat=d)))
        return VPolytope(d, verts)
    if name == "cross":
        d = 3 if dim is None else dim
        if d not in (2, 3, 4):
            raise BadParameter("cross supports dim 2, 3, 4")
        eye = np.eye(d)
        return VPolytope(d, np.vstack([eye, -eye]))
    if name == "hexagon":
        if eps is None:
            raise BadParameter("hexagon needs eps in (0, 1)")
        if not (0.0 < eps < 1.0):
            raise BadParameter(f"hexagon eps must be in (0, 1), got {eps}")
        if dim not in (None, 2):
            raise BadParameter("hexagon is planar (dim 2)")
        r = float(np.sqrt(1.0 - eps * eps))
        verts = np.array([
            [0.0, 1.0], [0.0, -1.0],
            [r, eps], [r, -eps],
            [-r, eps], [-r, -eps],
        ])
        return VPolytope(2, verts)
    raise UnknownGenerator(f"no generator named {name!r}")
