"""Location problems on the tropical torus and their solvers.

A location problem is ``h(x) = g(f_1(x), ..., f_m(x))`` with one gauge
per site (anchored at that site) and an increasing aggregator ``g``,
optionally plus ``lam * f_{m+1}(x)`` for a regularizing gauge anchored
inside the max-tropical hull of the sites.

Every solver finishes with :func:`descend_to_hull`, so reported optima
always lie in the max-tropical convex hull of the sites.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .core import EPS, DimensionError, argmin_set, as_cloud, as_point, canonical, d_sym, h_normalize, in_hull_max
from .gauges import Aggregator, Gauge, HyperplaneGauge, SimplexGauge, TropLp, gauge_to_config
from .lp import LinearProgram, simplex_solve

log = logging.getLogger(__name__)

__all__ = [
    "LocationProblem",
    "SolveReport",
    "descend_to_hull",
    "solve_center",
    "center_lp",
    "solve_fw_simplex_gauge",
    "solve_polyhedral",
    "solve_subgradient",
    "solve_best_fit_hyperplane",
    "regularize",
    "solve",
    "METHODS",
]


def _group_key(g: Gauge):
    if isinstance(g, TropLp):
        return ("lp", g.p)
    if isinstance(g, SimplexGauge):
        return ("simplex", tuple(g.lam))
    if isinstance(g, HyperplaneGauge):
        return ("hyperplane",)
    return ("custom", id(g))


@dataclass(eq=False)
class LocationProblem:
    sites: np.ndarray
    gauges: list
    aggregator: Aggregator = field(default_factory=Aggregator)
    reg_gauge: Optional[Gauge] = None
    reg_lambda: float = 0.0

    def __post_init__(self):
        self.sites = as_cloud(self.sites)
        m, n = self.sites.shape
        if len(self.gauges) != m:
            raise ValueError(f"need one gauge per site ({m}), got {len(self.gauges)}")
        self.gauges = [g if g.kernel is not None else g.at(v) for g, v in zip(self.gauges, self.sites)]
        for g, v in zip(self.gauges, self.sites):
            if g.kernel.shape != v.shape or not np.allclose(g.kernel, v):
                raise ValueError("gauge kernels must equal the sites")
        self.aggregator.site_weights(m)
        if self.reg_gauge is not None:
            if self.reg_lambda <= 0:
                raise ValueError("regularization weight must be positive")
            if self.reg_gauge.kernel is None or not in_hull_max(self.sites, self.reg_gauge.kernel):
                raise ValueError("regularizer kernel must lie in the max-tropical hull of the sites")
        groups = {}
        for i, g in enumerate(self.gauges):
            groups.setdefault(_group_key(g), []).append(i)
        self._groups = [(self.gauges[idx[0]], np.array(idx)) for idx in groups.values()]

    @classmethod
    def uniform(cls, sites, gauge: Gauge, aggregator="sum", weights=None, **kw):
        sites = as_cloud(sites)
        if isinstance(aggregator, str):
            aggregator = Aggregator(aggregator, weights)
        return cls(sites, [gauge.at(v) for v in sites], aggregator, **kw)

    @property
    def m(self):
        return self.sites.shape[0]

    @property
    def n(self):
        return self.sites.shape[1]

    @property
    def convex(self):
        ok = all(g.convex for g in self.gauges) and self.aggregator.kind in Aggregator.KINDS
        return ok and (self.reg_gauge is None or self.reg_gauge.convex)

    @property
    def piecewise_linear_terms(self):
        def poly(g):
            return isinstance(g, SimplexGauge) or (isinstance(g, TropLp) and g.p in (1.0, np.inf))

        return all(poly(g) for g in self.gauges) and (self.reg_gauge is None or poly(self.reg_gauge))

    @property
    def polyhedral(self):
        return self.aggregator.polyhedral and self.piecewise_linear_terms

    @property
    def quadratic(self):
        """Sum of squares of piecewise-linear terms: a convex QP in epigraph form."""
        return self.aggregator.kind == "sum_squares" and self.piecewise_linear_terms

    def site_values(self, x):
        """Per-site dissimilarities; ``x`` may be one point or a stack of points."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise DimensionError(f"dimension mismatch: {x.shape[-1]} vs {self.n}")
        out = np.empty(x.shape[:-1] + (self.m,))
        for template, idx in self._groups:
            out[..., idx] = template.gamma(x[..., None, :] - self.sites[idx])
        return out

    def objective(self, x, regularized=True):
        val = self.aggregator(self.site_values(x))
        if regularized and self.reg_gauge is not None:
            val = val + self.reg_lambda * self.reg_gauge(x)
        return val if np.ndim(val) else float(val)

    def subgradient(self, x):
        return self.value_and_subgradient(x)[1]

    def value_and_subgradient(self, x):
        """Objective and one sum-zero subgradient at a single point."""
        x = np.asarray(x, dtype=float)
        diffs = [x - self.sites[idx] for _, idx in self._groups]
        if len(self._groups) == 1:
            f = self._groups[0][0].gamma(diffs[0])
        else:
            f = np.empty(self.m)
            for (template, idx), d in zip(self._groups, diffs):
                f[idx] = template.gamma(d)
        val = float(self.aggregator(f))
        outer = self.aggregator.grad(f)
        g = np.zeros(self.n)
        for (template, idx), d in zip(self._groups, diffs):
            g += outer[idx] @ template.grad(d)
        if self.reg_gauge is not None:
            d = x - self.reg_gauge.kernel
            val += self.reg_lambda * float(self.reg_gauge.gamma(d))
            g += self.reg_lambda * self.reg_gauge.grad(d)
        return val, g - g.mean()

    def describe(self):
        d = {
            "aggregator": self.aggregator.kind,
            "gauges": sorted({json.dumps(gauge_to_config(g)) for g in self.gauges}),
        }
        if self.reg_gauge is not None:
            d["regularizer"] = {"lambda": self.reg_lambda, "kernel": canonical(self.reg_gauge.kernel).tolist()}
        return d


@dataclass
class SolveReport:
    optimum: np.ndarray
    objective: float
    in_hull: bool
    iterations: int
    method: str
    descent_trace: list = field(default_factory=list)
    converged: bool = True
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "method": self.method,
            "optimum": [float(t) for t in self.optimum],
            "objective": float(self.objective),
            "in_hull": bool(self.in_hull),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "descent_trace": [[int(k), float(d)] for k, d in self.descent_trace],
            **self.extra,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _sites_of(problem):
    return problem.sites if isinstance(problem, LocationProblem) else as_cloud(problem)


def descend_to_hull(x, problem, trace=None, eps: float = EPS):
    """Move ``x`` into the max-tropical hull of the sites without raising the objective.

    While some coordinate ``k`` is outside argmin_j(x_j - v_ij) for every
    site, lower ``x_k`` by the smallest amount that makes it an argmin for
    some site. Each step shrinks the descent set, so there are at most n
    steps. ``trace``, if given, receives ``(k, delta)`` pairs.
    """
    v = _sites_of(problem)
    x = canonical(x).copy()
    if x.shape[0] != v.shape[1]:
        raise DimensionError(f"dimension mismatch: {x.shape[0]} vs {v.shape[1]}")
    for _ in range(x.shape[0] + 1):
        diff = x[None, :] - v
        D = ~argmin_set(diff, eps).any(axis=0)
        if not D.any():
            return canonical(x)
        k = int(np.flatnonzero(D)[0])
        delta = float(np.min(diff[:, k] - diff.min(axis=1)))
        x[k] -= delta
        if trace is not None:
            trace.append((k, delta))
    raise RuntimeError("descent to hull did not terminate in n steps")


def _finish(problem, x, method, iterations=0, converged=True, extra=None):
    trace = []
    before = problem.objective(x)
    y = descend_to_hull(x, problem, trace)
    after = problem.objective(y)
    if after > before + 1e-9 * max(1.0, abs(before)):
        raise RuntimeError("descent to hull increased the objective")
    return SolveReport(
        optimum=y,
        objective=after,
        in_hull=in_hull_max(problem.sites, y),
        iterations=iterations,
        method=method,
        descent_trace=trace,
        converged=converged,
        extra=extra or {},
    )


# -- tropical center -------------------------------------------------------


def solve_center(sites) -> SolveReport:
    """Center of the smallest enclosing d_asym ball: max of the h-normalized sites."""
    v = as_cloud(sites)
    n = v.shape[1]
    # scaled by n so that integer input stays exact until the final division
    y = (n * v - v.sum(axis=1, keepdims=True)).max(axis=0)
    x = (y - y.min()) / n
    problem = LocationProblem.uniform(v, TropLp(1.0), "max")
    return _finish(problem, x, "center")


def center_lp(sites):
    """The center as a linear program; returns ``(t, x)`` with ``x`` in canonical form.

    minimize ``n t`` s.t. ``v_ij - x_j <= t`` and ``sum(x) = 0``, with the
    sites h-normalized first.
    """
    v = as_cloud(sites)
    v = v - v.mean(axis=1, keepdims=True)
    m, n = v.shape
    c = np.zeros(n + 1)
    c[n] = n
    A = np.zeros((m * n, n + 1))
    b = np.zeros(m * n)
    for i in range(m):
        for j in range(n):
            r = i * n + j
            A[r, j] = -1.0
            A[r, n] = -1.0
            b[r] = -v[i, j]
    A_eq = np.zeros((1, n + 1))
    A_eq[0, :n] = 1.0
    res = simplex_solve(LinearProgram(c, A, b, A_eq, [0.0], [(None, None)] * (n + 1)))
    return float(res.x[n]), canonical(res.x[:n])


# -- polyhedral problems via LP --------------------------------------------


def _epigraph(problem: LocationProblem):
    """Linear description of the per-term values of a piecewise-linear problem.

    Variables: x (n), then per term a lower variable s (min of x - v) and,
    for Linf terms, an upper variable u (max of x - v). Returns the column
    count, inequality rows ``A z <= b``, per term ``(expr, const, w)`` with
    term value ``expr @ z + const`` at optimum (``w`` is None for the
    regularizer), and per term ``(s_col, u_col, kernel)``.
    """
    n = problem.n
    terms = [(g, w) for g, w in zip(problem.gauges, problem.aggregator.site_weights(problem.m))]
    if problem.reg_gauge is not None:
        terms.append((problem.reg_gauge, None))

    cols = n
    layout = []
    for g, _ in terms:
        inf = isinstance(g, TropLp) and np.isinf(g.p)
        layout.append((cols, cols + 1 if inf else None))
        cols += 2 if inf else 1

    rows, rhs, affine = [], [], []
    for (g, w), (s_col, u_col) in zip(terms, layout):
        v = g.kernel
        expr = np.zeros(cols)
        const = 0.0
        if u_col is None:
            lam = g.lam if isinstance(g, SimplexGauge) else np.ones(n)
            expr[:n] = lam
            expr[s_col] = -lam.sum()
            const = -float(lam @ v)
        else:
            expr[u_col] = 1.0
            expr[s_col] = -1.0
        for j in range(n):
            r = np.zeros(cols)
            r[s_col] = 1.0
            r[j] = -1.0
            rows.append(r)
            rhs.append(-v[j])
            if u_col is not None:
                r = np.zeros(cols)
                r[u_col] = -1.0
                r[j] = 1.0
                rows.append(r)
                rhs.append(v[j])
        affine.append((expr, const, w))
    return cols, rows, rhs, affine, [(sc, uc, g.kernel) for (g, _), (sc, uc) in zip(terms, layout)]


def _polyhedral_lp(problem: LocationProblem):
    """Epigraph LP for Sum/WeightedSum/Max over L1, Linf and simplex gauges (plus a final t for Max)."""
    n = problem.n
    use_max = problem.aggregator.kind == "max"
    cols, rows, rhs, affine, _ = _epigraph(problem)
    t_col = cols if use_max else None
    cols += 1 if use_max else 0
    rows = [np.append(r, 0.0) for r in rows] if use_max else rows
    c = np.zeros(cols)
    for expr, const, w in affine:
        expr = np.append(expr, 0.0) if use_max else expr
        if w is None:
            c += problem.reg_lambda * expr
        elif use_max:
            r = expr.copy()
            r[t_col] = -1.0
            rows.append(r)
            rhs.append(-const)
        else:
            c += w * expr
    if use_max:
        c[t_col] += 1.0
    A_eq = np.zeros((1, cols))
    A_eq[0, :n] = 1.0
    return LinearProgram(c, np.array(rows), np.array(rhs), A_eq, [0.0], [(None, None)] * cols)


def _h_centered(problem: LocationProblem) -> LocationProblem:
    return LocationProblem(
        problem.sites - problem.sites.mean(axis=1, keepdims=True),
        [g.at(g.kernel - g.kernel.mean()) for g in problem.gauges],
        problem.aggregator,
        None if problem.reg_gauge is None else problem.reg_gauge.at(h_normalize(problem.reg_gauge.kernel)),
        problem.reg_lambda,
    )


def solve_polyhedral(problem: LocationProblem, method="lp") -> SolveReport:
    """Exact solve of a piecewise-linear location problem with the dense simplex."""
    if not problem.polyhedral:
        raise ValueError("problem is not piecewise linear; use solve_subgradient")
    problem = _h_centered(problem)
    res = simplex_solve(_polyhedral_lp(problem))
    return _finish(problem, res.x[: problem.n], method, iterations=res.pivots)


def solve_quadratic(problem: LocationProblem, method="qp", x0=None) -> SolveReport:
    """Sum of squared piecewise-linear terms as a small convex QP (SLSQP).

    Starts from ``x0`` (default: the tropical center). Falls back to
    subgradient descent from the QP point if SLSQP reports failure.
    """
    from scipy.optimize import minimize

    if not problem.quadratic:
        raise ValueError("problem is not a sum of squared piecewise-linear terms")
    work = _h_centered(problem)
    n = work.n
    cols, rows, rhs, affine, layout = _epigraph(work)
    A = np.array(rows)
    b = np.array(rhs)
    E = np.array([e for e, _, wt in affine if wt is not None])
    k = np.array([c for _, c, wt in affine if wt is not None])
    w = np.array([wt for _, _, wt in affine if wt is not None])
    reg = sum((work.reg_lambda * e for e, _, wt in affine if wt is None), np.zeros(cols))

    def f(z):
        t = E @ z + k
        return float(w @ t**2 + reg @ z)

    def df(z):
        return 2.0 * (w * (E @ z + k)) @ E + reg

    x0 = h_normalize(solve_center(work.sites).optimum if x0 is None else as_point(x0))
    z0 = np.zeros(cols)
    z0[:n] = x0
    for s_col, u_col, v in layout:
        z0[s_col] = np.min(x0 - v)
        if u_col is not None:
            z0[u_col] = np.max(x0 - v)
    cons = [
        {"type": "ineq", "fun": lambda z: b - A @ z, "jac": lambda z: -A},
        {"type": "eq", "fun": lambda z: np.array([z[:n].sum()]), "jac": lambda z: np.r_[np.ones(n), np.zeros(cols - n)][None, :]},
    ]
    for ftol in (1e-12, 1e-10, 1e-8):
        res = minimize(f, z0, jac=df, constraints=cons, method="SLSQP", options={"ftol": ftol, "maxiter": 1000})
        if res.success:
            break
    x = res.x[:n]
    converged = bool(res.success)
    if not converged or work.objective(x) > work.objective(x0) + 1e-12:
        log.info("SLSQP failed (%s); falling back to subgradient descent", res.message)
        return solve_subgradient(problem, x0=x if np.all(np.isfinite(x)) else None)
    return _finish(work, x, method, iterations=int(res.nit), converged=converged)


def solve_fw_simplex_gauge(sites, weights=None, lam=None) -> SolveReport:
    """Weighted Fermat-Weber point under the simplex gauge (a transportation problem).

    With ``lam = 1`` the optimum is a tropical median.
    """
    v = as_cloud(sites)
    m, n = v.shape
    lam = np.ones(n) if lam is None else np.asarray(lam, dtype=float)
    agg = Aggregator("sum") if weights is None else Aggregator("weighted_sum", weights)
    problem = LocationProblem.uniform(v, SimplexGauge(lam=lam), agg)
    method = "median" if np.allclose(lam, lam[0]) else "fw-simplex"
    return solve_polyhedral(problem, method)


# -- subgradient descent -----------------------------------------------------


def _spread(sites):
    v = as_cloud(sites)
    best = 0.0
    for a, b in combinations(range(v.shape[0]), 2):
        best = max(best, d_sym(v[a], v[b]))
    return best


def solve_subgradient(
    problem: LocationProblem,
    x0=None,
    max_iter: int = 50_000,
    schedule: str = "geometric",
    step: Optional[float] = None,
    optimum_value: Optional[float] = None,
    stall: int = 200,
    tol: float = 1e-9,
    ratio: float = 0.995,
) -> SolveReport:
    """Projected subgradient descent in the sum-zero hyperplane.

    ``schedule`` is ``"geometric"`` (normalized steps ``c * ratio^t``),
    ``"sqrt"`` (normalized ``c / sqrt(t)``)
    or ``"polyak"`` (needs ``optimum_value``). ``c`` defaults to the
    largest symmetric distance between sites. The best iterate is descended
    into the hull.
    """
    if not problem.convex:
        raise ValueError("subgradient descent needs convex gauges")
    if schedule == "polyak" and optimum_value is None:
        raise ValueError("the Polyak step needs the optimal value")
    x = h_normalize(problem.sites[0] if x0 is None else x0)
    c = step if step is not None else _spread(problem.sites)
    best_x, best_f = x.copy(), problem.objective(x)
    f0 = best_f
    if c <= 0:
        return _finish(problem, best_x, "subgradient", 0, True, {"start_objective": f0})
    last_gain = 0
    t = 0
    converged = False
    size = c
    fx, g = problem.value_and_subgradient(x)
    for t in range(1, max_iter + 1):
        gn = float(np.sqrt(g @ g))
        if gn <= 1e-15:
            converged = True
            break
        if schedule == "polyak":
            x = x - (fx - optimum_value) / gn**2 * g
        elif schedule == "sqrt":
            x = x - c / np.sqrt(t) * g / gn
        else:
            x = x - size * g / gn
            size *= ratio
        x = x - x.mean()
        f, g = problem.value_and_subgradient(x)
        fx = f
        if f < best_f - tol * max(1.0, abs(best_f)):
            last_gain = t
        if f < best_f:
            best_x, best_f = x.copy(), f
        if schedule == "geometric" and size < 1e-13 * c:
            converged = True
            break
        if t - last_gain >= stall and (schedule != "geometric" or size < 1e-6 * c):
            converged = True
            break
    else:
        log.info("subgradient hit max_iter=%d", max_iter)
    return _finish(problem, best_x, "subgradient", t, converged, {"start_objective": f0})


# -- derivative-free local search -------------------------------------------


def _directions(n):
    eye = np.eye(n)
    dirs = [eye[k] for k in range(n)] + [-eye[k] for k in range(n)]
    for k in range(n):
        for l in range(n):
            if k != l:
                dirs.append(eye[k] - eye[l])
    return np.array(dirs)


def pattern_search(fun, x0, step=1.0, min_step=1e-10, max_evals=200_000, rel_decrease=1e-14):
    """Compass search along coordinate and pairwise-difference directions.

    ``fun`` must accept a stack of points ``(k, n)`` and return ``k`` values.
    """
    x = np.asarray(x0, dtype=float).copy()
    fx = float(fun(x[None, :])[0])
    dirs = _directions(x.shape[0])
    evals = 1
    while step > min_step and evals < max_evals:
        cand = x[None, :] + step * dirs
        vals = np.asarray(fun(cand), dtype=float)
        evals += len(cand)
        i = int(np.argmin(vals))
        if vals[i] < fx - rel_decrease * max(1.0, abs(fx)):
            x, fx = cand[i] - cand[i].mean(), float(vals[i])
            step *= 2.0
        else:
            step *= 0.5
    return x, fx, evals


def _hyperplane_cell_lp(sites, x, linf):
    """Minimise the hyperplane objective over the linear cell containing ``x``."""
    v = as_cloud(sites)
    m, n = v.shape
    y = x[None, :] - v
    order = np.argsort(y, axis=1, kind="stable")
    cols = n + (1 if linf else 0)
    rows, rhs = [], []
    c = np.zeros(cols)
    for i in range(m):
        f, s = order[i, 0], order[i, 1]
        for j in range(n):
            if j != f:
                r = np.zeros(cols)
                r[f] += 1.0
                r[j] -= 1.0
                rows.append(r)
                rhs.append(v[i, f] - v[i, j])
            if j not in (f, s):
                r = np.zeros(cols)
                r[s] += 1.0
                r[j] -= 1.0
                rows.append(r)
                rhs.append(v[i, s] - v[i, j])
        term = np.zeros(cols)
        term[s] += 1.0
        term[f] -= 1.0
        if linf:
            term[n] = -1.0
            rows.append(term)
            rhs.append(v[i, s] - v[i, f])
        else:
            c += term
    if linf:
        c[n] = 1.0
    A_eq = np.zeros((1, cols))
    A_eq[0, :n] = 1.0
    res = simplex_solve(LinearProgram(c, np.array(rows), np.array(rhs), A_eq, [float(np.sum(x))], [(None, None)] * cols))
    return res.x[:n]


def solve_best_fit_hyperplane(sites, error: str = "l1") -> SolveReport:
    """Apex of a best-fit max-tropical hyperplane under L1 or Linf error.

    The objective is not convex, so this is a multi-start local search
    (from every site and from the tropical center) alternating compass
    steps with exact LP solves over the current linear cell.
    """
    v = as_cloud(sites)
    error = error.lower()
    if error not in ("l1", "linf"):
        raise ValueError("error must be 'l1' or 'linf'")
    linf = error == "linf"
    problem = LocationProblem.uniform(v, HyperplaneGauge(), "max" if linf else "sum")

    def fun(X):
        Y = np.partition(np.asarray(X, dtype=float)[..., None, :] - v, 1, axis=-1)
        d = Y[..., 1] - Y[..., 0]
        return d.max(axis=-1) if linf else d.sum(axis=-1)

    starts = [h_normalize(p) for p in v] + [h_normalize(solve_center(v).optimum)]
    scale = max(_spread(v), 1.0)
    best_x, best_f, total = None, np.inf, 0
    seen, cells = [], {}
    for x in starts:
        fx = float(fun(x))
        for _ in range(50):
            order = np.argsort(x[None, :] - v, axis=1, kind="stable")[:, :2]
            key = order.tobytes()
            if key not in cells:
                cells[key] = _hyperplane_cell_lp(v, x, linf)
            y = cells[key]
            fy = float(fun(y))
            if fy < fx - 1e-12:
                x, fx = y, fy
            if any(np.ptp(x - z) < 1e-9 for z in seen):
                break
            seen.append(x)
            y, fy, evals = pattern_search(fun, x, step=scale / 4, min_step=1e-7 * scale, max_evals=20_000, rel_decrease=1e-11)
            total += evals
            if fy < fx - 1e-12:
                x, fx = y, fy
                continue
            break
        if fx < best_f - 1e-12:
            best_x, best_f = x, fx
    return _finish(problem, best_x, f"hyperplane-{error}", total)


# -- regularization ----------------------------------------------------------


def regularize(problem: LocationProblem, lam: float = 0.5, kernel=None) -> LocationProblem:
    """Add ``lam * gamma_1(x - kernel)`` with the kernel in the hull (default: the center)."""
    if lam <= 0:
        raise ValueError("regularization weight must be positive")
    if kernel is None:
        kernel = solve_center(problem.sites).optimum
    kernel = as_point(kernel)
    if not in_hull_max(problem.sites, kernel):
        raise ValueError("regularizer kernel lies outside the max-tropical hull of the sites")
    return LocationProblem(problem.sites, problem.gauges, problem.aggregator, TropLp(1.0).at(kernel), lam)


# -- named methods -----------------------------------------------------------

METHODS = ("center", "median", "fw-simplex", "fw-sym", "frechet", "hyperplane-l1", "hyperplane-linf")


def build_problem(sites, method, weights=None, lam_simplex=None) -> LocationProblem:
    v = as_cloud(sites)
    agg = Aggregator("sum") if weights is None else Aggregator("weighted_sum", weights)
    if method == "center":
        return LocationProblem.uniform(v, TropLp(1.0), "max")
    if method == "median":
        return LocationProblem.uniform(v, TropLp(1.0), agg)
    if method == "fw-simplex":
        lam = np.ones(v.shape[1]) if lam_simplex is None else lam_simplex
        return LocationProblem.uniform(v, SimplexGauge(lam=lam), agg)
    if method == "fw-sym":
        return LocationProblem.uniform(v, TropLp(np.inf), agg)
    if method == "frechet":
        return LocationProblem.uniform(v, TropLp(np.inf), "sum_squares")
    if method == "hyperplane-l1":
        return LocationProblem.uniform(v, HyperplaneGauge(), "sum")
    if method == "hyperplane-linf":
        return LocationProblem.uniform(v, HyperplaneGauge(), "max")
    raise ValueError(f"unknown method {method!r}")


def solve(problem_or_sites, method=None, *, weights=None, lam_simplex=None, reg_lambda=None, kernel=None, solver="auto", **kw):
    """Solve a named method on sites, or a ready-made :class:`LocationProblem`.

    Picks the exact LP for piecewise-linear problems, a QP for sums of
    squared piecewise-linear terms (Frechet), subgradient descent for other
    convex ones, and local search for hyperplane fitting. ``solver=
    "subgradient"`` forces subgradient descent for any convex problem.
    """
    if method == "center" and reg_lambda is None:
        return solve_center(problem_or_sites)
    if method in ("hyperplane-l1", "hyperplane-linf"):
        return solve_best_fit_hyperplane(problem_or_sites, method.split("-")[1])
    if isinstance(problem_or_sites, LocationProblem):
        problem = problem_or_sites
    else:
        problem = build_problem(problem_or_sites, method, weights, lam_simplex)
    if reg_lambda is not None:
        problem = regularize(problem, reg_lambda, kernel)
    label = method or "custom"
    if solver not in ("auto", "subgradient"):
        raise ValueError("solver must be 'auto' or 'subgradient'")
    if problem.polyhedral and solver == "auto":
        return solve_polyhedral(problem, label)
    if problem.quadratic and solver == "auto":
        rep = solve_quadratic(problem, label, x0=kw.get("x0"))
        rep.method = label
        return rep
    if problem.convex:
        rep = solve_subgradient(problem, **kw)
        rep.method = label
        return rep
    raise ValueError("no solver for non-convex problems besides hyperplane fitting")
