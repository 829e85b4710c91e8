"""Delta-star-quasiconvex dissimilarities and the aggregators that combine them.

A gauge is an increasing function ``gamma`` on the nonnegative orthant,
read on canonical coordinates and anchored at a kernel ``v``::

    f(x) = gamma(canonical(x - v))

All ``gamma`` callables below are vectorised over the last axis, so a
whole grid of difference vectors can be evaluated at once.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import EPS, DimensionError, as_point, argmin_set

__all__ = [
    "gamma_p",
    "gamma_simplex",
    "hyperplane_dist",
    "extend_monotone",
    "dual_gamma1",
    "Gauge",
    "TropLp",
    "SimplexGauge",
    "HyperplaneGauge",
    "CustomGauge",
    "Aggregator",
    "gauge_from_config",
    "gauge_to_config",
]


def _canon(y):
    y = np.asarray(y, dtype=float)
    return y - y.min(axis=-1, keepdims=True)


def _check_p(p):
    p = float(p)
    if not (p >= 1.0):
        raise ValueError(f"tropical L^p gauges need p >= 1 (got {p})")
    return p


def gamma_p(x, p=1.0):
    """Tropical L^p norm of ``x`` (p in [1, inf])."""
    p = _check_p(p)
    z = _canon(x)
    if np.isinf(p):
        return z.max(axis=-1)
    if p == 1.0:
        return z.sum(axis=-1)
    # scale first so large p does not overflow
    top = z.max(axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return (safe[..., 0] * np.sum((z / safe) ** p, axis=-1) ** (1.0 / p)) * (top[..., 0] > 0)


def gamma_simplex(x, lam):
    """Gauge whose unit ball is the simplex with vertices ``e_i / lam_i``.

    ``sum(lam * x) - sum(lam) * min(x)``; with ``lam = 1`` this is the
    tropical L^1 norm.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("simplex gauge weights must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != lam.shape[0]:
        raise DimensionError(f"dimension mismatch: {x.shape[-1]} vs {lam.shape[0]}")
    return np.sum(lam * _canon(x), axis=-1)


def hyperplane_dist(a, apex):
    """Symmetric tropical distance from ``a`` to the max-tropical hyperplane at ``apex``.

    Second-smallest minus smallest entry of ``apex - a``.
    """
    a = np.asarray(a, dtype=float)
    apex = np.asarray(apex, dtype=float)
    if a.shape[-1] != apex.shape[-1]:
        raise DimensionError(f"dimension mismatch: {a.shape[-1]} vs {apex.shape[-1]}")
    return _second_order_stat(apex - a)


def _second_order_stat(y):
    y = np.asarray(y, dtype=float)
    if y.shape[-1] < 2:
        raise DimensionError("need n >= 2")
    part = np.partition(y, 1, axis=-1)
    return part[..., 1] - part[..., 0]


def extend_monotone(boundary_fn: Callable[[np.ndarray], float]) -> Callable[[np.ndarray], float]:
    """Extend an increasing function on the orthant boundary to the whole orthant.

    The extension is ``max_i boundary_fn(x with x_i := 0) + prod(x)``;
    it agrees with ``boundary_fn`` on the boundary and keeps (strict)
    monotonicity and continuity.
    """

    def extended(x):
        x = np.asarray(x, dtype=float)
        best = -np.inf
        for i in range(x.shape[0]):
            y = x.copy()
            y[i] = 0.0
            best = max(best, float(boundary_fn(y)))
        return best + float(np.prod(x))

    return extended


def dual_gamma1(x):
    """Dual gauge of the tropical L^1 norm: ``gamma_1(-x) / n``."""
    x = np.asarray(x, dtype=float)
    return gamma_p(-x, 1.0) / x.shape[-1]


def _tie_weights(mask):
    mask = np.asarray(mask, dtype=float)
    return mask / mask.sum(axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class Gauge:
    """Base class: an increasing ``gamma`` anchored at ``kernel``.

    Subclasses implement :meth:`gamma` (vectorised) and, for convex kinds,
    :meth:`grad`, the subgradient with respect to the difference vector.
    """

    kernel: Optional[np.ndarray] = field(default=None, kw_only=True)

    convex = True
    strict = False
    kind = "abstract"

    def gamma(self, y):
        raise NotImplementedError

    def grad(self, y):
        raise NotImplementedError(f"no subgradient rule for {self.kind} gauges")

    def at(self, kernel) -> "Gauge":
        return dataclasses.replace(self, kernel=as_point(kernel))

    def _diff(self, x):
        x = np.asarray(x, dtype=float)
        if self.kernel is None:
            return x
        if x.shape[-1] != self.kernel.shape[0]:
            raise DimensionError(f"dimension mismatch: {x.shape[-1]} vs {self.kernel.shape[0]}")
        return x - self.kernel

    def __call__(self, x):
        return self.gamma(self._diff(x))

    def subgradient(self, x) -> np.ndarray:
        """One subgradient of ``x -> self(x)``, as a sum-zero vector."""
        g = np.asarray(self.grad(self._diff(x)), dtype=float)
        return g - g.mean(axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class TropLp(Gauge):
    p: float = 1.0

    kind = "lp"

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))

    @property
    def strict(self):
        return not np.isinf(self.p)

    def gamma(self, y):
        return gamma_p(y, self.p)

    def grad(self, y):
        y = np.asarray(y, dtype=float)
        low = _tie_weights(argmin_set(y))
        if np.isinf(self.p):
            return _tie_weights(argmin_set(-y)) - low
        if self.p == 1.0:
            return 1.0 - y.shape[-1] * low
        z = y - y.min(axis=-1, keepdims=True)
        scale = z.max(axis=-1, keepdims=True)
        flat = scale <= EPS
        u = z / np.where(flat, 1.0, scale)
        dz = u ** (self.p - 1.0) / np.sum(u**self.p, axis=-1, keepdims=True).clip(min=1.0) ** ((self.p - 1.0) / self.p)
        g = dz - dz.sum(axis=-1, keepdims=True) * low
        return np.where(flat, 0.0, g)


@dataclass(frozen=True, eq=False)
class SimplexGauge(Gauge):
    lam: Sequence[float] = ()

    kind = "simplex"
    strict = True

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim != 1 or lam.shape[0] < 2:
            raise ValueError("simplex gauge needs a weight vector of length n >= 2")
        if np.any(lam <= 0):
            raise ValueError("simplex gauge weights must be positive")
        object.__setattr__(self, "lam", lam)

    def gamma(self, y):
        return gamma_simplex(y, self.lam)

    def grad(self, y):
        low = _tie_weights(argmin_set(y))
        return self.lam - self.lam.sum() * low


@dataclass(frozen=True, eq=False)
class HyperplaneGauge(Gauge):
    """Distance from the kernel to the max-tropical hyperplane with apex ``x``.

    Increasing but not convex. :meth:`grad` returns the gradient of the
    active linear piece (uniform over ties), a local descent aid only.
    """

    kind = "hyperplane"
    convex = False

    def gamma(self, y):
        return _second_order_stat(y)

    def grad(self, y):
        y = np.asarray(y, dtype=float)
        first = argmin_set(y)
        rest = np.where(first, np.inf, y)
        second = argmin_set(rest)
        g = _tie_weights(second) - first
        return np.where(first.sum(axis=-1, keepdims=True) >= 2, 0.0, g)


@dataclass(frozen=True, eq=False)
class CustomGauge(Gauge):
    """User-supplied increasing ``gamma`` on canonical coordinates.

    ``fn`` receives one canonical vector at a time. Without ``grad_fn``
    the gauge can only be used by derivative-free solvers.
    """

    fn: Optional[Callable[[np.ndarray], float]] = None
    grad_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    is_convex: bool = False
    is_strict: bool = False

    kind = "custom"

    @property
    def convex(self):
        return self.is_convex

    @property
    def strict(self):
        return self.is_strict

    def gamma(self, y):
        z = _canon(y)
        if z.ndim == 1:
            return float(self.fn(z))
        flat = z.reshape(-1, z.shape[-1])
        return np.array([self.fn(row) for row in flat]).reshape(z.shape[:-1])

    def grad(self, y):
        if self.grad_fn is None:
            raise NotImplementedError("custom gauge has no subgradient callback")
        return self.grad_fn(np.asarray(y, dtype=float))


def gauge_from_config(cfg, kernel=None) -> Gauge:
    """Build a gauge from ``{"kind": "lp", "p": 2}``-style JSON config."""
    kind = cfg.get("kind")
    if kind == "lp":
        p = cfg.get("p", 1)
        p = np.inf if str(p).lower() in ("inf", "infinity") else float(p)
        g = TropLp(p=p)
    elif kind == "simplex":
        g = SimplexGauge(lam=cfg["lambda"])
    elif kind == "hyperplane":
        g = HyperplaneGauge()
    else:
        raise ValueError(f"unknown gauge kind {kind!r}")
    return g if kernel is None else g.at(kernel)


def gauge_to_config(g: Gauge) -> dict:
    if isinstance(g, TropLp):
        return {"kind": "lp", "p": "inf" if np.isinf(g.p) else g.p}
    if isinstance(g, SimplexGauge):
        return {"kind": "simplex", "lambda": [float(t) for t in g.lam]}
    if isinstance(g, HyperplaneGauge):
        return {"kind": "hyperplane"}
    return {"kind": g.kind}


@dataclass(frozen=True, eq=False)
class Aggregator:
    """Increasing combination ``g`` of the per-site dissimilarities."""

    kind: str = "sum"
    weights: Optional[np.ndarray] = None

    KINDS = ("sum", "weighted_sum", "sum_squares", "max")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown aggregator {self.kind!r}")
        if self.kind == "weighted_sum":
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1 or np.any(w <= 0):
                raise ValueError("weighted_sum needs positive weights")
            object.__setattr__(self, "weights", w)

    @property
    def strict(self) -> bool:
        return self.kind != "max"

    @property
    def polyhedral(self) -> bool:
        return self.kind in ("sum", "weighted_sum", "max")

    def site_weights(self, m):
        if self.kind == "weighted_sum":
            if self.weights.shape[0] != m:
                raise ValueError(f"expected {m} weights, got {self.weights.shape[0]}")
            return self.weights
        return np.ones(m)

    def __call__(self, values):
        f = np.asarray(values, dtype=float)
        if self.kind == "sum":
            return f.sum(axis=-1)
        if self.kind == "weighted_sum":
            return f @ self.weights
        if self.kind == "sum_squares":
            return np.sum(f * f, axis=-1)
        return f.max(axis=-1)

    def grad(self, values):
        """Subgradient of ``g`` at ``values`` (uniform over ties for max)."""
        f = np.asarray(values, dtype=float)
        if self.kind == "sum":
            return np.ones_like(f)
        if self.kind == "weighted_sum":
            return self.weights.copy()
        if self.kind == "sum_squares":
            return 2.0 * f
        return _tie_weights(argmin_set(-f))
