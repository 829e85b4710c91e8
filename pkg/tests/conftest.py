import sys

import numpy as np
import pytest

V_ROWS = [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [3.0, 2.0, 0.0], [2.0, 3.0, 0.0]]


@pytest.fixture
def V():
    return np.array(V_ROWS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def same_class(a, b, tol=1e-9):
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.ptp(d)) <= tol


def random_instance(rng, n=None, m=None, integer=None):
    n = int(rng.integers(3, 6)) if n is None else n
    m = int(rng.integers(2, 7)) if m is None else m
    integer = bool(rng.integers(0, 2)) if integer is None else integer
    if integer:
        return rng.integers(-5, 6, size=(m, n)).astype(float)
    return rng.normal(scale=3.0, size=(m, n))


def grid_points(sites, step=0.05, pad=0.0):
    """Grid over the (x1 - x3, x2 - x3) bounding box of the sites, third coordinate 0."""
    s = np.asarray(sites, dtype=float)
    s = s - s[:, 2:3]
    lo = s[:, :2].min(axis=0) - pad
    hi = s[:, :2].max(axis=0) + pad
    a = np.arange(lo[0], hi[0] + step / 2, step)
    b = np.arange(lo[1], hi[1] + step / 2, step)
    A, B = np.meshgrid(a, b, indexing="ij")
    return np.stack([A.ravel(), B.ravel(), np.zeros(A.size)], axis=1)


def grid_min(fun, sites, step=0.05, pad=0.0):
    """Brute-force minimum of a vectorised objective over the grid."""
    pts = grid_points(sites, step, pad)
    vals = np.asarray(fun(pts), dtype=float)
    i = int(np.argmin(vals))
    return float(vals[i]), pts[i]


def random_topology(rng, taxa, polytomy=0.2):
    """Nested tuples over ``taxa`` built by random merges (sometimes three at once)."""
    nodes = list(taxa)
    while len(nodes) > 1:
        k = 3 if len(nodes) >= 3 and rng.random() < polytomy else 2
        idx = sorted(rng.choice(len(nodes), size=k, replace=False), reverse=True)
        merged = tuple(nodes[i] for i in idx)
        for i in idx:
            nodes.pop(i)
        nodes.append(merged)
    return nodes[0]


def random_newick(rng, taxa, topology=None, dyadic=True):
    """Equidistant Newick string; dyadic heights keep float arithmetic exact."""
    topology = random_topology(rng, taxa) if topology is None else topology

    def build(node):
        # returns (text, height)
        if isinstance(node, str):
            return node, 0.0
        kids = [build(c) for c in node]
        step = float(rng.integers(1, 9)) / 4.0 if dyadic else float(rng.uniform(0.1, 2.0))
        h = max(k[1] for k in kids) + step
        return "(" + ",".join(f"{t}:{h - kh!r}" for t, kh in kids) + ")", h

    return build(topology)[0] + ";"


def all_nestings(D):
    """Every nesting (A, B) of an ultrametric matrix, as bitmask pairs (oracle)."""
    n = D.shape[0]
    M = np.zeros(1 << n)
    for S in range(1, 1 << n):
        i = (S & -S).bit_length() - 1
        rest = S & ~(1 << i)
        members = [j for j in range(n) if rest >> j & 1]
        M[S] = max(M[rest], max((D[i, j] for j in members), default=0.0))
    out = set()
    for A in range(1, 1 << n):
        comp = ((1 << n) - 1) & ~A
        B = comp
        while B:
            if M[A] < M[A | B] - 1e-6:
                out.add((A, B))
            B = (B - 1) & comp
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
