"""Polarity and facet-local duality.

The polar body, the vertex-to-polar-facet correspondence, polars taken
relative to a facet's own hyperplane, and the Santalo point of a facet
(the base point that minimizes the volume of the relative polar; it is
characterized by the polar's centroid sitting at the origin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import (
    ConvergenceFailure,
    NotAVertex,
    OriginNotInterior,
    PointNotInRelativeInterior,
)
from .geometry import (
    DEFAULT_TOL,
    Facet,
    HPolytope,
    VPolytope,
    _hull_facets_core,
    _measure_and_centroid,
    _orthobasis,
    _triangulate_point_set,
    _volume_of_point_set,
    hull_facets,
)

SANTALO_RESIDUAL = 1e-10
SANTALO_MAX_ITER = 200


# ---------------------------------------------------------------------------
# Polar body
# ---------------------------------------------------------------------------

def polar(P: VPolytope, tol: float = DEFAULT_TOL,
          hrep: HPolytope | None = None) -> VPolytope:
    """The polar body {y : <x, y> <= 1 for all x in P}.

    Vertices of the polar are facet_normal/facet_offset, one per facet of P,
    so the result is automatically irredundant.
    """
    hrep = hull_facets(P, tol) if hrep is None else hrep
    if hrep.offsets.min() <= tol:
        raise OriginNotInterior("polar requires 0 in the interior")
    return VPolytope(P.dim, hrep.normals / hrep.offsets[:, None])


# ---------------------------------------------------------------------------
# Vertex -> polar facet
# ---------------------------------------------------------------------------

def _vertex_index(P: VPolytope, xi: np.ndarray, tol: float) -> int:
    xi = np.asarray(xi, dtype=float)
    scale = max(1.0, float(np.abs(P.vertices).max()))
    dists = np.linalg.norm(P.vertices - xi[None, :], axis=1)
    i = int(np.argmin(dists))
    if dists[i] > tol * scale:
        raise NotAVertex(f"{xi.tolist()} is not a vertex of the polytope")
    return i


def polar_facet_for_vertex(P: VPolytope, xi: np.ndarray,
                           tol: float = DEFAULT_TOL,
                           Q: VPolytope | None = None) -> Facet:
    """The facet of polar(P) supported by the hyperplane {y : <xi, y> = 1}.

    Its vertices are exactly the polar vertices dual to the facets of P
    that contain xi; the outer normal is xi/|xi| at offset 1/|xi|.
    """
    i = _vertex_index(P, xi, tol)
    xi = P.vertices[i]
    Q = polar(P, tol) if Q is None else Q
    dots = Q.vertices @ xi
    scale = max(1.0, float(np.abs(dots).max()))
    inc = np.flatnonzero(np.abs(dots - 1.0) <= tol * scale)
    n = P.dim
    if inc.size < n:
        raise NotAVertex(
            f"vertex {xi.tolist()} is incident to fewer than {n} polar vertices"
        )
    norm_xi = float(np.linalg.norm(xi))
    normal = xi / norm_xi
    offset = 1.0 / norm_xi
    basis = _orthobasis(normal)
    pts = Q.vertices[inc]
    loc = (pts - normal * offset) @ basis.T
    meas = _volume_of_point_set(loc, tol)
    return Facet(inc, normal, offset, basis, meas, pts)


# ---------------------------------------------------------------------------
# Relative polar and Santalo point
# ---------------------------------------------------------------------------

def _facet_local(F: Facet, z: np.ndarray, tol: float) -> np.ndarray:
    """Facet vertices relative to z, in the facet's basis coordinates."""
    z = np.asarray(z, dtype=float)
    scale = max(1.0, float(np.abs(F.points).max()))
    if abs(float(z @ F.normal) - F.offset) > max(tol, 1e-7) * scale:
        raise PointNotInRelativeInterior("base point is off the facet hyperplane")
    return (F.points - z[None, :]) @ F.basis.T


def relative_polar(F: Facet, z: np.ndarray, tol: float = DEFAULT_TOL) -> VPolytope:
    """(F - z) polarized inside the facet's own (n-1)-dimensional subspace.

    Returned in the facet's basis coordinates, as an (n-1)-dimensional
    V-polytope. z must lie in the relative interior of F.
    """
    C = _facet_local(F, z, tol)
    normals, offsets, _ = _hull_facets_core(C, tol)
    if offsets.min() <= tol:
        raise PointNotInRelativeInterior(
            "base point is not in the relative interior of the facet"
        )
    return VPolytope(C.shape[1], normals / offsets[:, None])


def _polar_measure_centroid(normals, offsets, z, tol):
    """Volume and centroid of the polar of (C - z), from C's facet data.

    Translating C moves its facet offsets only, so the polar's vertices are
    normals / (offsets - normals @ z).
    """
    off_z = offsets - normals @ z
    if off_z.min() <= tol:
        return None
    W = normals / off_z[:, None]
    return _measure_and_centroid(W, tol)


def _polar_moments(normals, offsets, z, tol):
    """(volume, first moment, second moment) of the polar of (C - z).

    Exact per-simplex moment formulas over a triangulation of the polar:
    for a k-simplex T with vertex matrix V and volume v,
      int_T y dy      = v * mean(V)
      int_T y y^T dy  = v / ((k+1)(k+2)) * (S S^T + sum_i V_i V_i^T),  S = sum_i V_i.
    """
    off_z = offsets - normals @ z
    if off_z.min() <= tol:
        return None
    W = normals / off_z[:, None]
    simplices = _triangulate_point_set(W, tol)
    k = W.shape[1]
    mats = simplices[:, 1:, :] - simplices[:, :1, :]
    vols = np.abs(np.linalg.det(mats)) / math.factorial(k)
    vol = float(vols.sum())
    m1 = (vols[:, None] * simplices.mean(axis=1)).sum(axis=0)
    S = simplices.sum(axis=1)                                   # (n_simp, k)
    outer_S = np.einsum("si,sj->sij", S, S)
    outer_V = np.einsum("svi,svj->sij", simplices, simplices)
    m2 = (vols[:, None, None] * (outer_S + outer_V)).sum(axis=0)
    m2 /= (k + 1) * (k + 2)
    diam = 2.0 * float(np.linalg.norm(W, axis=1).max())
    return vol, m1, m2, diam


def santalo_point(F: Facet, residual: float = SANTALO_RESIDUAL,
                  max_iter: int = SANTALO_MAX_ITER,
                  tol: float = DEFAULT_TOL) -> np.ndarray:
    """The point s in relint(F) minimizing the volume of (F - s) polarized
    in F's hyperplane; at the optimum the polar's centroid is the origin.

    For segments the midpoint is returned analytically. Otherwise a damped
    fixed-point iteration on the centroid condition is used: the gradient of
    the polar volume is the polar's first moment, and its Hessian is the
    polar's second-moment matrix times (k+1)(k+2), both exact over a
    triangulation. The centroid correction is therefore preconditioned by
    the second-moment matrix (a damped Newton step), with the step halved
    whenever the volume fails to decrease. Falls back to simplex descent.
    """
    foot = F.normal * F.offset
    C = (F.points - foot) @ F.basis.T
    k = C.shape[1]
    if k == 1:
        z_loc = np.array([0.5 * (C.min() + C.max())])
        return foot + z_loc @ F.basis

    normals, offsets, _ = _hull_facets_core(C, tol)
    _, z = _measure_and_centroid(C, tol)

    vol, m1, m2, diam = _polar_moments(normals, offsets, z, tol)
    g = m1 / vol
    converged = False
    for _ in range(max_iter):
        if np.linalg.norm(g) <= residual * diam:
            converged = True
            break
        step = np.linalg.solve(m2, m1) / (k + 2)
        accepted = False
        for _ in range(60):
            z_try = z - step
            res = _polar_moments(normals, offsets, z_try, tol)
            if res is not None and res[0] < vol * (1.0 + 1e-15):
                z = z_try
                vol, m1, m2, diam = res
                g = m1 / vol
                accepted = True
                break
            step = 0.5 * step
        if not accepted:
            break

    if not converged and np.linalg.norm(g) > residual * diam:
        # derivative-free fallback on the polar volume
        big = 1e300

        def objective(zz):
            res = _polar_measure_centroid(normals, offsets, zz, tol)
            return big if res is None else res[0]

        opt = minimize(objective, z, method="Nelder-Mead",
                       options={"xatol": 1e-14, "fatol": 1e-15,
                                "maxiter": 4000})
        res = _polar_moments(normals, offsets, opt.x, tol)
        if res is None:
            raise ConvergenceFailure("Santalo fallback left the facet interior")
        z = opt.x
        vol, m1, m2, diam = res
        g = m1 / vol
        if np.linalg.norm(g) > residual * diam:
            raise ConvergenceFailure(
                "Santalo iteration did not meet its centroid residual"
            )
    return foot + z @ F.basis


@dataclass(frozen=True, eq=False)
class PolarFacetData:
    """Everything the per-vertex invariants need about one vertex's polar facet."""

    vertex: np.ndarray
    polar_facet: Facet
    santalo: np.ndarray
    relative_polar_measure: float


def polar_facet_data(P: VPolytope, xi: np.ndarray,
                     tol: float = DEFAULT_TOL,
                     santalo_residual: float = SANTALO_RESIDUAL,
                     Q: VPolytope | None = None) -> PolarFacetData:
    """Polar facet, its Santalo point, and the relative polar's measure."""
    F = polar_facet_for_vertex(P, xi, tol, Q=Q)
    s = santalo_point(F, residual=santalo_residual, tol=tol)
    rp = relative_polar(F, s, tol)
    meas = _volume_of_point_set(rp.vertices, tol)
    return PolarFacetData(np.asarray(xi, dtype=float), F, s, meas)
