"""Exact low-dimensional polytope kernel.

Vertex and halfspace representations, facet enumeration, volumes,
clipping, cap volumes and support/radial queries for convex polytopes
in dimension 2 to 4 (dimension 1 is supported so that facet-local
recursions bottom out on segments).

Facet enumeration is brute force over all n-subsets of vertices: a
candidate hyperplane is kept when it supports the whole vertex set.
That is O(m^n) but exact and deterministic at desk scale (m <= ~100).
All arithmetic is double precision with a single incidence tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    EmptyIntersection,
    OriginNotInterior,
    SingularMatrix,
)

DEFAULT_TOL = 1e-9

# Singular-value ratio below which an n-subset is treated as affinely dependent.
_DEGEN_RATIO = 1e-9


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VPolytope:
    """Vertex representation of a full-dimensional convex polytope."""

    dim: int
    vertices: np.ndarray  # (m, dim)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.dim or self.dim < 1:
            raise DegenerateInput(
                f"vertex array of shape {v.shape} does not match dim={self.dim}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]


@dataclass(frozen=True, eq=False)
class Halfspace:
    """The set {x : <x, normal> <= offset}; normal is stored unit length."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        nrm = np.array(self.normal, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(nrm))
        if norm <= 0.0:
            raise DegenerateInput("halfspace normal must be nonzero")
        nrm /= norm
        nrm.setflags(write=False)
        object.__setattr__(self, "normal", nrm)
        object.__setattr__(self, "offset", float(self.offset) / norm)

    def complement(self) -> "Halfspace":
        """The closed complementary halfspace {x : <x, normal> >= offset}."""
        return Halfspace(-self.normal, -self.offset)


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Facet-halfspace representation with vertex-facet incidence.

    Row i of `normals`/`offsets` is the i-th facet halfspace
    {x : <x, normals[i]> <= offsets[i]} (unit normal); incidence[i] are
    the indices of the vertices lying on its boundary hyperplane.
    """

    dim: int
    normals: np.ndarray   # (F, dim), unit rows
    offsets: np.ndarray   # (F,)
    incidence: tuple      # tuple of int arrays

    @property
    def n_facets(self) -> int:
        return self.normals.shape[0]

    @property
    def halfspaces(self) -> list:
        return [Halfspace(n, b) for n, b in zip(self.normals, self.offsets)]


@dataclass(frozen=True, eq=False)
class Facet:
    """An (n-1)-face: supporting hyperplane, orthonormal tangent basis,
    vertex set (indices plus resolved coordinates) and its (n-1)-volume."""

    vertex_indices: np.ndarray
    normal: np.ndarray
    offset: float
    basis: np.ndarray     # (n-1, n) orthonormal rows spanning the tangent space
    measure: float
    points: np.ndarray    # (k, n) coordinates of the facet's vertices

    def local_coords(self, pts: np.ndarray | None = None) -> np.ndarray:
        """Coordinates of `pts` (default: the facet vertices) in the facet basis,
        relative to the foot point offset*normal."""
        pts = self.points if pts is None else np.asarray(pts, dtype=float)
        return (pts - self.normal * self.offset) @ self.basis.T


# ---------------------------------------------------------------------------
# Facet enumeration
# ---------------------------------------------------------------------------

def _orthobasis(normal: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the hyperplane orthogonal to `normal`."""
    n = normal.shape[0]
    _, _, vt = np.linalg.svd(normal.reshape(1, n))
    return vt[1:]


def _hull_facets_core(points: np.ndarray, tol: float):
    """Facets of conv(points): (normals, offsets, incidence list).

    Works on any full-dimensional point set; points interior to the hull
    simply end up incident to nothing.
    """
    pts = np.asarray(points, dtype=float)
    m, n = pts.shape
    if n == 1:
        hi, lo = float(pts.max()), float(pts.min())
        if hi - lo <= tol:
            raise DegenerateInput("1-d point set has no extent")
        inc_hi = np.flatnonzero(np.abs(pts[:, 0] - hi) <= tol)
        inc_lo = np.flatnonzero(np.abs(pts[:, 0] - lo) <= tol)
        return (np.array([[1.0], [-1.0]]), np.array([hi, -lo]), [inc_hi, inc_lo])
    if m < n + 1:
        raise DegenerateInput(f"{m} points cannot span a full-dimensional body in R^{n}")
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[n - 1] <= tol * max(sv[0], 1.0):
        raise DegenerateInput("affine hull of the points has dimension < n")

    combos = np.array(list(itertools.combinations(range(m), n)), dtype=int)
    base = pts[combos[:, 0]]
    mats = pts[combos[:, 1:]] - base[:, None, :]          # (C, n-1, n)
    _, svs, vts = np.linalg.svd(mats)
    nondegen = svs[:, -1] > _DEGEN_RATIO * np.maximum(svs[:, 0], 1e-300)
    normals = vts[:, -1, :]                               # (C, n)
    offsets = np.einsum("cn,cn->c", normals, base)
    dists = pts @ normals.T - offsets[None, :]            # (m, C)
    upper = dists.max(axis=0) <= tol
    lower = dists.min(axis=0) >= -tol

    out_normals, out_offsets, out_inc = [], [], []
    seen = set()
    for c in range(combos.shape[0]):
        if not nondegen[c]:
            continue
        if upper[c]:
            nrm, off, d = normals[c], offsets[c], dists[:, c]
        elif lower[c]:
            nrm, off, d = -normals[c], -offsets[c], -dists[:, c]
        else:
            continue
        inc = np.flatnonzero(np.abs(d) <= tol)
        key = frozenset(inc.tolist())
        if key in seen:
            continue
        seen.add(key)
        out_normals.append(nrm)
        out_offsets.append(off)
        out_inc.append(inc)
    if not out_normals:
        raise DegenerateInput("no supporting facet hyperplanes found")
    return np.array(out_normals), np.array(out_offsets), out_inc


def hull_facets(P: VPolytope, tol: float = DEFAULT_TOL) -> HPolytope:
    """All facet-defining halfspaces of P with exact vertex incidence."""
    normals, offsets, inc = _hull_facets_core(P.vertices, tol)
    return HPolytope(P.dim, normals, offsets, tuple(inc))


def facet_list(P: VPolytope, hrep: HPolytope | None = None,
               tol: float = DEFAULT_TOL) -> list[Facet]:
    """Facet objects (basis, measure, vertex coordinates) for every facet of P."""
    hrep = hull_facets(P, tol) if hrep is None else hrep
    out = []
    for nrm, off, inc in zip(hrep.normals, hrep.offsets, hrep.incidence):
        basis = _orthobasis(nrm)
        pts = P.vertices[inc]
        loc = (pts - nrm * off) @ basis.T
        meas = _volume_of_point_set(loc, tol)
        out.append(Facet(inc, nrm, float(off), basis, meas, pts))
    return out


def facet_measure(F: Facet, P: VPolytope | None = None,
                  tol: float = DEFAULT_TOL) -> float:
    """(n-1)-volume of the facet, computed in its basis coordinates."""
    pts = F.points if P is None else P.vertices[F.vertex_indices]
    loc = (pts - F.normal * F.offset) @ F.basis.T
    return _volume_of_point_set(loc, tol)


def enumerate_vertices(H: HPolytope, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vertices of the intersection of H's halfspaces (brute force over
    n-subsets of facets). Used for round-trip checks of hull_facets."""
    n = H.dim
    scale = max(1.0, float(np.abs(H.offsets).max()))
    found: list[np.ndarray] = []
    for idx in itertools.combinations(range(H.n_facets), n):
        A = H.normals[list(idx)]
        b = H.offsets[list(idx)]
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= 1e-10 * max(sv[0], 1e-300):
            continue
        x = np.linalg.solve(A, b)
        feas = H.normals @ x - H.offsets
        if feas.max() > tol * max(1.0, float(np.linalg.norm(x))):
            continue
        if any(np.linalg.norm(x - y) <= 1e-7 * scale for y in found):
            continue
        found.append(x)
    if not found:
        raise DegenerateInput("halfspace intersection has no vertices")
    return np.array(found)


# ---------------------------------------------------------------------------
# Triangulation, volume, centroid
# ---------------------------------------------------------------------------

def _triangulate_point_set(pts: np.ndarray, tol: float) -> np.ndarray:
    """Triangulate conv(pts) into k-simplices, (S, k+1, k).

    Fan from the vertex average over the facets; each facet is triangulated
    recursively in its own basis coordinates, so the decomposition is
    deterministic in any dimension.
    """
    pts = np.asarray(pts, dtype=float)
    k = pts.shape[1]
    if k == 1:
        lo, hi = float(pts.min()), float(pts.max())
        return np.array([[[lo], [hi]]])
    normals, offsets, inc = _hull_facets_core(pts, tol)
    apex = pts.mean(axis=0)
    simplices = []
    for nrm, off, ind in zip(normals, offsets, inc):
        basis = _orthobasis(nrm)
        foot = nrm * off
        loc = (pts[ind] - foot) @ basis.T
        for sub in _triangulate_point_set(loc, tol):
            lifted = foot + sub @ basis
            simplices.append(np.vstack([apex[None, :], lifted]))
    return np.array(simplices)


def triangulate(P: VPolytope, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Simplices (S, n+1, n) whose union is P, with disjoint interiors."""
    return _triangulate_point_set(P.vertices, tol)


def _simplex_volumes(simplices: np.ndarray) -> np.ndarray:
    k = simplices.shape[2]
    mats = simplices[:, 1:, :] - simplices[:, :1, :]
    return np.abs(np.linalg.det(mats)) / math.factorial(k)


def _measure_and_centroid(pts: np.ndarray, tol: float):
    simplices = _triangulate_point_set(pts, tol)
    vols = _simplex_volumes(simplices)
    total = float(vols.sum())
    if total <= 0.0:
        raise DegenerateInput("point set has zero volume")
    cents = simplices.mean(axis=1)
    centroid = (vols[:, None] * cents).sum(axis=0) / total
    return total, centroid


def _volume_of_point_set(pts: np.ndarray, tol: float) -> float:
    simplices = _triangulate_point_set(pts, tol)
    return float(_simplex_volumes(simplices).sum())


def volume(P: VPolytope, tol: float = DEFAULT_TOL) -> float:
    """n-dimensional Lebesgue volume of P."""
    return _volume_of_point_set(P.vertices, tol)


def centroid(P: VPolytope, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Volume centroid of P via the fan triangulation."""
    return _measure_and_centroid(P.vertices, tol)[1]


# ---------------------------------------------------------------------------
# Support, radial, linear images, symmetry
# ---------------------------------------------------------------------------

def support(P: VPolytope, u: np.ndarray) -> float:
    """h_P(u) = max over vertices of <v, u>."""
    return float(np.max(P.vertices @ np.asarray(u, dtype=float)))


def radial(P: VPolytope, u: np.ndarray, hrep: HPolytope | None = None,
           tol: float = DEFAULT_TOL) -> float:
    """r_P(u) = sup {t >= 0 : t*u in P}; requires 0 in the interior of P."""
    u = np.asarray(u, dtype=float)
    if np.linalg.norm(u) <= 0.0:
        raise DegenerateInput("radial direction must be nonzero")
    hrep = hull_facets(P, tol) if hrep is None else hrep
    if hrep.offsets.min() <= tol:
        raise OriginNotInterior("0 is not in the interior of the polytope")
    dots = hrep.normals @ u
    pos = dots > 1e-15 * np.linalg.norm(u)
    if not pos.any():
        raise DegenerateInput("direction never exits the polytope")
    return float(np.min(hrep.offsets[pos] / dots[pos]))


def apply_linear(P: VPolytope, L: np.ndarray) -> VPolytope:
    """Vertex-wise image of P under an invertible linear map."""
    L = np.asarray(L, dtype=float)
    sv = np.linalg.svd(L, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise SingularMatrix("linear map is numerically singular")
    return VPolytope(P.dim, P.vertices @ L.T)


def is_centrally_symmetric(P: VPolytope, tol: float = DEFAULT_TOL) -> bool:
    """True when every vertex has its negative among the vertices."""
    v = P.vertices
    scale = max(1.0, float(np.abs(v).max()))
    dists = np.linalg.norm(v[:, None, :] + v[None, :, :], axis=2)
    return bool((dists.min(axis=1) <= tol * scale).all())


# ---------------------------------------------------------------------------
# Extreme points and clipping
# ---------------------------------------------------------------------------

def extreme_points(points: np.ndarray, tol: float = DEFAULT_TOL) -> VPolytope:
    """Irredundant vertex representation of conv(points).

    A point counts as a vertex when its incident facet normals span R^n.
    """
    pts = np.asarray(points, dtype=float)
    scale = max(1.0, float(np.abs(pts).max()))
    keep: list[int] = []
    for i in range(pts.shape[0]):
        if not any(np.linalg.norm(pts[i] - pts[j]) <= 1e-12 * scale for j in keep):
            keep.append(i)
    pts = pts[keep]
    n = pts.shape[1]
    normals, offsets, _ = _hull_facets_core(pts, tol)
    dists = np.abs(pts @ normals.T - offsets[None, :])
    verts = []
    for i in range(pts.shape[0]):
        active = normals[dists[i] <= tol]
        if active.shape[0] < n:
            continue
        sv = np.linalg.svd(active, compute_uv=False)
        if sv[n - 1] > tol:
            verts.append(pts[i])
    if len(verts) < n + 1:
        raise DegenerateInput("fewer than n+1 extreme points")
    return VPolytope(n, np.array(verts))


def clip(P: VPolytope, H: Halfspace, tol: float = DEFAULT_TOL) -> VPolytope:
    """Vertex representation of P intersected with the halfspace H.

    Vertices of P on the inside (boundary counts as inside), plus the
    crossings of P's edges with the boundary hyperplane. Edges are read
    off the incidence structure: vertex pairs sharing >= n-1 facets.
    """
    n = P.dim
    d = P.vertices @ H.normal - H.offset
    inside = d <= tol
    if inside.all():
        return VPolytope(n, P.vertices.copy())
    if not inside.any():
        raise EmptyIntersection("the halfspace misses the polytope")
    hrep = hull_facets(P, tol)
    m = P.n_vertices
    member = np.zeros((m, hrep.n_facets), dtype=bool)
    for f, ind in enumerate(hrep.incidence):
        member[ind, f] = True
    shared = member.astype(int) @ member.astype(int).T
    candidates = [P.vertices[i] for i in range(m) if inside[i]]
    for i in range(m):
        for j in range(i + 1, m):
            if shared[i, j] < n - 1:
                continue
            di, dj = d[i], d[j]
            if (di < -tol and dj > tol) or (di > tol and dj < -tol):
                s = di / (di - dj)
                candidates.append(P.vertices[i] + s * (P.vertices[j] - P.vertices[i]))
    return extreme_points(np.array(candidates), tol)


# ---------------------------------------------------------------------------
# Cap volumes (simplex frustum fractions) and cone hull volumes
# ---------------------------------------------------------------------------

def _frustum_fractions(values_desc: np.ndarray, t) -> np.ndarray:
    """Fraction of each simplex's volume on the side {<x,u> >= t}.

    `values_desc` holds the vertex values <w_i, u> of each simplex, sorted
    in descending order along the last axis. Uses the classic two-index
    recurrence for the frustum of a simplex, which only ever forms convex
    combinations of nonnegative numbers and so is numerically stable.
    """
    t_arr = np.asarray(t, dtype=float)
    X = values_desc - (t_arr if t_arr.ndim == 0 else t_arr[:, None])
    M, k = values_desc.shape
    J = (X > 0.0).sum(axis=1)
    out = np.zeros(M)
    out[J == k] = 1.0
    for j in range(1, k):
        rows = np.flatnonzero(J == j)
        if rows.size == 0:
            continue
        A = X[rows, :j]          # positive values, descending
        B = -X[rows, j:]         # magnitudes of the nonpositive values
        K = k - j
        old = np.zeros((rows.size, K + 1))
        old[:, 0] = 1.0
        for i in range(j):
            new = np.empty_like(old)
            new[:, 0] = 1.0
            ai = A[:, i]
            for ell in range(1, K + 1):
                bl = B[:, ell - 1]
                new[:, ell] = (ai * new[:, ell - 1] + bl * old[:, ell]) / (ai + bl)
            old = new
        out[rows] = old[:, K]
    return out


def cap_volume(P: VPolytope, u: np.ndarray, t: float,
               tol: float = DEFAULT_TOL) -> float:
    """Volume of P intersected with {x : <x, u> >= t}.

    Computed exactly, per simplex of a fixed triangulation of P, so it is
    continuous and monotone in t with no clipping-induced degeneracies.
    """
    u = np.asarray(u, dtype=float)
    simplices = triangulate(P, tol)
    vols = _simplex_volumes(simplices)
    vals = simplices @ u
    vals_desc = -np.sort(-vals, axis=1)
    frac = _frustum_fractions(vals_desc, float(t))
    return float((vols * frac).sum())


def cone_hull_volume(P: VPolytope, x: np.ndarray,
                     facets: list[Facet] | None = None,
                     tol: float = DEFAULT_TOL) -> float:
    """|conv[P, x]|: volume of P plus one cone per facet visible from x."""
    x = np.asarray(x, dtype=float)
    facets = facet_list(P, tol=tol) if facets is None else facets
    n = P.dim
    vol = _volume_of_point_set(P.vertices, tol)
    extra = 0.0
    for F in facets:
        excess = float(x @ F.normal) - F.offset
        if excess > 0.0:
            extra += excess * F.measure / n
    return vol + extra


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_vpolytope(P: VPolytope, tol: float = DEFAULT_TOL) -> None:
    """Raise DegenerateInput unless P is full-dimensional and irredundant."""
    Q = extreme_points(P.vertices, tol)
    if Q.n_vertices != P.n_vertices:
        raise DegenerateInput(
            f"vertex list is redundant: {P.n_vertices - Q.n_vertices} "
            "point(s) are not extreme"
        )
