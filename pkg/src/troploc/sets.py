"""Finitely generated max-tropically convex sets and location problems with set sites."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EPS, DimensionError, as_cloud, as_point, canonical, h_normalize, in_hull_max
from .gauges import Aggregator, Gauge, TropLp
from .solve import SolveReport, descend_to_hull, pattern_search, solve_center, _spread

__all__ = ["TropicalSet", "project", "dist_to_set", "solve_set_sites", "set_objective"]


@dataclass(eq=False)
class TropicalSet:
    """Max-tropical convex hull of a finite list of generators (one per row)."""

    generators: np.ndarray

    def __post_init__(self):
        self.generators = as_cloud(self.generators)

    @property
    def n(self):
        return self.generators.shape[1]

    def project(self, x):
        return project(self, x)

    def distance(self, x, gauge: Gauge = None):
        return dist_to_set(self, x, gauge)

    def contains(self, x, eps: float = EPS):
        return in_hull_max(self.generators, x, eps)

    def to_dict(self):
        return {"generators": self.generators.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["generators"], dtype=float))


def _raw_projection(A, X):
    """``pi_i = max_a (a_i + min_j (x_j - a_j))`` for a stack of points; keeps ``pi <= x``."""
    G = A.generators
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != G.shape[1]:
        raise DimensionError(f"dimension mismatch: {X.shape[-1]} vs {G.shape[1]}")
    lift = (X[..., None, :] - G).min(axis=-1)
    return (G + lift[..., None]).max(axis=-2)


def project(A: TropicalSet, x) -> np.ndarray:
    """Tropical projection of ``x`` onto ``A``, in canonical coordinates."""
    return canonical(_raw_projection(A, as_point(x)))


def dist_to_set(A: TropicalSet, x, gauge: Gauge = None):
    """``inf_{y in A} gamma(x - y)``, attained at the projection.

    ``gauge`` is used through its ``gamma`` only (its kernel is ignored);
    defaults to the tropical L^1 norm.
    """
    gauge = TropLp(1.0) if gauge is None else gauge
    X = np.asarray(x, dtype=float)
    return gauge.gamma(X - _raw_projection(A, X))


def set_objective(sets, aggregator: Aggregator, gauge: Gauge):
    """Vectorised ``h(x) = g(d(A_1, x), ..., d(A_m, x))``."""

    def h(X):
        X = np.asarray(X, dtype=float)
        d = np.stack([dist_to_set(A, X, gauge) for A in sets], axis=-1)
        return aggregator(d)

    return h


def _descend_sets(x, sets, trace, eps=EPS, max_halvings=60):
    """Descent to the hull of the union of generators, keeping every projection fixed.

    The step along ``-e_l`` starts at the largest move that keeps ``l``
    out of every argmin and is halved while any projection would change.
    """
    union = np.vstack([A.generators for A in sets])
    x = canonical(x).copy()
    for _ in range(x.shape[0] + 1):
        diff = x[None, :] - union
        low = diff <= diff.min(axis=1, keepdims=True) + eps
        D = ~low.any(axis=0)
        if not D.any():
            return x
        k = int(np.flatnonzero(D)[0])
        before = [_raw_projection(A, x) for A in sets]
        delta = float(np.min(diff[:, k] - diff.min(axis=1)))
        for _ in range(max_halvings):
            y = x.copy()
            y[k] -= delta
            if all(np.allclose(_raw_projection(A, y), p, atol=eps, rtol=0) for A, p in zip(sets, before)):
                break
            delta /= 2.0
        else:
            raise RuntimeError("could not find a projection-preserving step")
        x = y
        trace.append((k, delta))
    return descend_to_hull(x, union, trace, eps)


def solve_set_sites(sets, aggregator="sum", gauge: Gauge = None, weights=None) -> SolveReport:
    """Minimise ``g(d_gamma(A_1, x), ...)`` over x for max-tropically convex sites.

    Multi-start compass search (from every generator and from the center of
    all generators), then a projection-preserving descent into the hull of
    the union of the sets.
    """
    sets = [A if isinstance(A, TropicalSet) else TropicalSet(A) for A in sets]
    if not sets:
        raise ValueError("need at least one set")
    n = sets[0].n
    if any(A.n != n for A in sets):
        raise DimensionError("all sets must live in the same dimension")
    gauge = TropLp(1.0) if gauge is None else gauge
    agg = Aggregator(aggregator, weights) if isinstance(aggregator, str) else aggregator
    h = set_objective(sets, agg, gauge)
    union = np.vstack([A.generators for A in sets])
    starts = [h_normalize(g) for g in union] + [h_normalize(solve_center(union).optimum)]
    scale = max(_spread(union), 1.0)
    best_x, best_f, evals = None, np.inf, 0
    for x0 in starts:
        x, fx, e = pattern_search(h, x0, step=scale / 4)
        evals += e
        if fx < best_f - 1e-12:
            best_x, best_f = x, fx
    before = float(h(best_x[None, :])[0])
    trace = []
    y = _descend_sets(best_x, sets, trace)
    after = float(h(y[None, :])[0])
    if after > before + 1e-9 * max(1.0, abs(before)):
        raise RuntimeError("set-site descent increased the objective")
    return SolveReport(
        optimum=canonical(y),
        objective=after,
        in_hull=in_hull_max(union, y),
        iterations=evals,
        method="set-sites",
        descent_trace=trace,
    )
