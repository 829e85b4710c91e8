"""Arithmetic and geometry of the tropical projective torus R^n / R·1.

Points are plain 1-d numpy arrays; any representative of a class is
accepted and outputs are returned in canonical form (minimum entry 0).
A point cloud is a 2-d array with one point per row.
"""

from __future__ import annotations

import numpy as np

EPS = 1e-9


class DimensionError(ValueError):
    """Raised when points of different (or degenerate) dimensions meet."""


def as_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-d point, got shape {x.shape}")
    if x.shape[0] < 2:
        raise DimensionError("the tropical torus needs n >= 2")
    if not np.all(np.isfinite(x)):
        raise ValueError("point has non-finite entries")
    return x


def as_cloud(points) -> np.ndarray:
    v = np.asarray(points, dtype=float)
    if v.ndim == 1:
        v = v[None, :]
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError("point cloud must be a non-empty (m, n) array")
    if v.shape[1] < 2:
        raise DimensionError("the tropical torus needs n >= 2")
    if not np.all(np.isfinite(v)):
        raise ValueError("point cloud has non-finite entries")
    return v


def _pair(a, b):
    a, b = as_point(a), as_point(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def canonical(x) -> np.ndarray:
    """Representative with minimum entry exactly 0."""
    x = as_point(x)
    return x - x.min()


def h_normalize(x) -> np.ndarray:
    """Representative whose entries sum to 0."""
    x = as_point(x)
    return x - x.mean()


def torus_equal(a, b, eps: float = EPS) -> bool:
    """True when ``a - b`` is a constant vector up to ``eps``."""
    a, b = _pair(a, b)
    d = b - a
    return bool(d.max() - d.min() <= eps)


def d_asym(a, b) -> float:
    """Asymmetric tropical distance from ``a`` to ``b``.

    ``sum(b - a) - n * min(b - a)``; its unit ball is a simplex.
    """
    a, b = _pair(a, b)
    d = b - a
    return float(np.sum(d - d.min()))


def d_sym(a, b) -> float:
    """Symmetric tropical distance ``max(b - a) - min(b - a)``."""
    a, b = _pair(a, b)
    d = b - a
    return float(d.max() - d.min())


def argmin_set(y, eps: float = EPS) -> np.ndarray:
    """All indices within ``eps`` of the minimum, as a boolean mask."""
    y = np.asarray(y, dtype=float)
    return y <= y.min(axis=-1, keepdims=True) + eps


def descent_set(cloud, x, eps: float = EPS) -> np.ndarray:
    """Coordinates ``k`` with ``k`` outside argmin_j(x_j - v_ij) for every site.

    Returned as a boolean mask of length n; empty exactly on the
    max-tropical hull of the cloud.
    """
    v = as_cloud(cloud)
    x = as_point(x)
    if v.shape[1] != x.shape[0]:
        raise DimensionError(f"dimension mismatch: {v.shape[1]} vs {x.shape[0]}")
    hit = argmin_set(x[None, :] - v, eps)
    return ~hit.any(axis=0)


def in_hull_max(cloud, x, eps: float = EPS) -> bool:
    """Membership of ``x`` in the max-tropical convex hull of ``cloud``.

    Every coordinate must be a (tolerant) argmin of ``x - v_i`` for some
    site ``v_i``.
    """
    return not descent_set(cloud, x, eps).any()


def geodesic_contains(a, b, x, eps: float = EPS) -> bool:
    """Whether ``x`` lies on the d_asym geodesic segment from ``a`` to ``b``."""
    a, b = _pair(a, b)
    _, x = _pair(a, x)
    gap = d_asym(a, x) + d_asym(x, b) - d_asym(a, b)
    return bool(abs(gap) <= eps * max(1.0, d_asym(a, b)))


def segment_vertices(a, b) -> np.ndarray:
    """The n min-tropical vertices of the geodesic segment from ``a`` to ``b``.

    Row ``j`` is ``b - (b_j - a_j - min(b - a)) e_j`` in canonical form.
    """
    a, b = _pair(a, b)
    d = b - a
    shift = d - d.min()
    out = np.tile(b, (b.shape[0], 1))
    out[np.diag_indices_from(out)] -= shift
    return out - out.min(axis=1, keepdims=True)


def min_combination(a, b, lam: float = 0.0, mu: float = 0.0) -> np.ndarray:
    """Min-tropical combination ``(a + lam) ∧ (b + mu)``.

    Returned as computed (not canonicalized) so that callers can keep
    track of the additive scalars.
    """
    a, b = _pair(a, b)
    return np.minimum(a + lam, b + mu)


def max_combination(a, b, lam: float = 0.0, mu: float = 0.0) -> np.ndarray:
    """Max-tropical combination ``(a + lam) ∨ (b + mu)``."""
    a, b = _pair(a, b)
    return np.maximum(a + lam, b + mu)


def max_hull_sample(cloud, coeffs) -> np.ndarray:
    """Max-tropical combinations ``max_i (v_i + c_i)`` for rows of ``coeffs``."""
    v = as_cloud(cloud)
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    pts = (v[None, :, :] + c[:, :, None]).max(axis=1)
    return pts - pts.min(axis=1, keepdims=True)
