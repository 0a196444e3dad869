"""Shared helpers: independent volume oracles and seeded random inputs."""

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from floatdual.geometry import VPolytope, extreme_points


def shoelace(points) -> float:
    """Signed-area oracle for a 2-d polygon given in cyclic order."""
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def hull_volume(points) -> float:
    """Brute-force hull volume oracle (qhull), independent of the package."""
    return float(ConvexHull(np.asarray(points, dtype=float)).volume)


def random_symmetric_polytope(rng, dim: int, pairs: int) -> VPolytope:
    """Symmetric hull of `pairs` random points and their negatives,
    resampled until comfortably non-degenerate."""
    for _ in range(200):
        pts = rng.normal(size=(pairs, dim))
        sym = np.vstack([pts, -pts])
        try:
            P = extreme_points(sym)
        except Exception:
            continue
        v = P.vertices
        norms = np.linalg.norm(v, axis=1)
        if norms.max() / norms.min() > 8.0:
            continue
        gaps = np.linalg.norm(v[:, None, :] - v[None, :, :], axis=2)
        gaps[np.arange(len(v)), np.arange(len(v))] = np.inf
        if gaps.min() < 0.15:
            continue
        return P
    raise RuntimeError("could not sample a well-conditioned symmetric polytope")


def random_invertible(rng, dim: int, smin: float = 0.6, smax: float = 3.0):
    """Random invertible matrix with condition number <= smax/smin (<= 10)."""
    q1, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    q2, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    s = rng.uniform(smin, smax, size=dim)
    return q1 @ np.diag(s) @ q2.T


@pytest.fixture
def rng():
    return np.random.default_rng(0)
