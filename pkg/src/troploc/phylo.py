"""Equidistant phylogenetic trees, ultrametrics, nestings and tropical consensus.

An equidistant tree on taxa X is identified with its ultrametric matrix
D, and D with the torus point of dimension C(|X|, 2) given by the upper
triangle in lexicographic pair order of the sorted taxa names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .core import in_hull_max
from .solve import SolveReport, solve, solve_center

__all__ = [
    "NewickError",
    "Node",
    "PhyloTree",
    "UltrametricMatrix",
    "parse_newick",
    "parse_newick_file",
    "write_newick",
    "tree_to_ultrametric",
    "is_ultrametric",
    "ultrametric_to_tree",
    "has_nesting",
    "tree_nestings",
    "consensus",
    "consensus_run",
    "majority_threshold",
    "absence_threshold",
    "CONSENSUS_METHODS",
]

ULTRA_EPS = 1e-6


class NewickError(ValueError):
    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)


@dataclass(eq=False)
class Node:
    name: Optional[str] = None
    length: Optional[float] = None
    children: list = field(default_factory=list)

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        if self.is_leaf:
            return [self.name]
        return [t for c in self.children for t in c.leaves()]


@dataclass(eq=False)
class PhyloTree:
    """Rooted tree with labelled leaves and nonnegative edge lengths."""

    root: Node

    def __post_init__(self):
        names = self.root.leaves()
        if len(set(names)) != len(names):
            dup = sorted({t for t in names if names.count(t) > 1})
            raise ValueError(f"duplicate leaf labels: {dup}")

    @property
    def taxa(self):
        return sorted(self.root.leaves())

    def leaf_depths(self):
        out = {}

        def walk(node, depth):
            if node.is_leaf:
                out[node.name] = depth
            for c in node.children:
                walk(c, depth + c.length)

        walk(self.root, 0.0)
        return out

    def height(self):
        return max(self.leaf_depths().values())

    def is_equidistant(self, eps: float = ULTRA_EPS):
        d = np.array(list(self.leaf_depths().values()))
        return bool(d.max() - d.min() <= eps * max(1.0, d.max()))

    def normalized(self):
        """Copy with pendant edges stretched so every leaf sits at the tree height."""
        depths = self.leaf_depths()
        top = max(depths.values())

        def copy(node):
            new = Node(node.name, node.length, [copy(c) for c in node.children])
            if node.is_leaf:
                new.length = node.length + (top - depths[node.name])
            return new

        return PhyloTree(copy(self.root))

    def __eq__(self, other):
        return isinstance(other, PhyloTree) and write_newick(self) == write_newick(other)

    def __str__(self):
        return write_newick(self)


# -- Newick ------------------------------------------------------------------

_DELIMS = set("(),:;")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise NewickError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def label(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _DELIMS:
            self.pos += 1
        return self.text[start : self.pos].strip() or None

    def length(self, required):
        if self.peek() != ":":
            if required:
                raise NewickError("missing branch length", self.pos)
            return None
        self.pos += 1
        start = self.pos
        raw = self.label()
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise NewickError(f"bad branch length {raw!r}", start) from None
        if not np.isfinite(value) or value < 0:
            raise NewickError(f"branch length must be finite and nonnegative, got {raw}", start)
        return value

    def subtree(self, is_root=False):
        if self.peek() == "(":
            self.pos += 1
            children = [self.subtree()]
            while self.peek() == ",":
                self.pos += 1
                children.append(self.subtree())
            self.expect(")")
            name = self.label()
            return Node(name, self.length(required=not is_root), children)
        start = self.pos
        name = self.label()
        if not name:
            raise NewickError("empty leaf label", start)
        return Node(name, self.length(required=not is_root))


def parse_newick(text: str) -> PhyloTree:
    """Parse one Newick tree; every non-root edge needs a branch length."""
    p = _Parser(text)
    root = p.subtree(is_root=True)
    p.expect(";")
    if p.peek():
        raise NewickError("trailing characters after ';'", p.pos)
    if root.is_leaf:
        raise NewickError("a tree needs at least one pair of parentheses", 0)
    try:
        return PhyloTree(root)
    except ValueError as e:
        raise NewickError(str(e)) from None


def parse_newick_file(text: str):
    """All trees in a multi-tree file (one per line, blank lines ignored)."""
    return [parse_newick(line) for line in text.splitlines() if line.strip()]


def _fmt(x):
    return f"{x:.12g}"


def write_newick(tree: PhyloTree) -> str:
    """Canonical Newick: children ordered by their smallest leaf label."""

    def render(node):
        if node.is_leaf:
            s = node.name
        else:
            kids = sorted(node.children, key=lambda c: min(c.leaves()))
            s = "(" + ",".join(render(c) for c in kids) + ")" + (node.name or "")
        if node.length is not None and node is not tree.root:
            s += ":" + _fmt(node.length)
        return s

    return render(tree.root) + ";"


# -- ultrametrics ------------------------------------------------------------


@dataclass(eq=False)
class UltrametricMatrix:
    """Leaf-to-leaf distances with taxa in sorted order."""

    taxa: list
    D: np.ndarray

    def __post_init__(self):
        D = np.asarray(self.D, dtype=float)
        taxa = list(self.taxa)
        if D.shape != (len(taxa), len(taxa)):
            raise ValueError("matrix shape does not match taxa")
        if len(set(taxa)) != len(taxa):
            raise ValueError("duplicate taxa")
        order = sorted(range(len(taxa)), key=lambda i: taxa[i])
        self.taxa = [taxa[i] for i in order]
        self.D = D[np.ix_(order, order)]

    @property
    def pairs(self):
        return list(combinations(range(len(self.taxa)), 2))

    def vector(self) -> np.ndarray:
        i, j = np.triu_indices(len(self.taxa), 1)
        return self.D[i, j].copy()

    @classmethod
    def from_vector(cls, taxa, vec):
        taxa = sorted(taxa)
        k = len(taxa)
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (comb(k, 2),):
            raise ValueError(f"expected {comb(k, 2)} entries for {k} taxa")
        D = np.zeros((k, k))
        i, j = np.triu_indices(k, 1)
        D[i, j] = vec
        D[j, i] = vec
        return cls(taxa, D)

    def index(self, names):
        pos = {t: i for i, t in enumerate(self.taxa)}
        unknown = [t for t in names if t not in pos]
        if unknown:
            raise ValueError(f"unknown taxa: {unknown}")
        return [pos[t] for t in names]

    def is_ultrametric(self, eps: float = ULTRA_EPS):
        return is_ultrametric(self.D, eps)


def tree_to_ultrametric(tree: PhyloTree, normalize: bool = False, eps: float = ULTRA_EPS) -> UltrametricMatrix:
    """Path-length matrix of an equidistant tree."""
    if normalize:
        tree = tree.normalized()
    elif not tree.is_equidistant(eps):
        raise ValueError("tree is not equidistant (pass normalize=True to stretch pendant edges)")
    taxa = tree.taxa
    pos = {t: i for i, t in enumerate(taxa)}
    depth = tree.leaf_depths()
    D = np.zeros((len(taxa), len(taxa)))

    def walk(node, d):
        if node.is_leaf:
            return [node.name]
        groups = [walk(c, d + c.length) for c in node.children]
        for ga, gb in combinations(groups, 2):
            for a in ga:
                for b in gb:
                    D[pos[a], pos[b]] = D[pos[b], pos[a]] = depth[a] + depth[b] - 2 * d
        return [t for g in groups for t in g]

    walk(tree.root, 0.0)
    return UltrametricMatrix(taxa, D)


def is_ultrametric(D, eps: float = ULTRA_EPS) -> bool:
    """Three-point condition ``D_ij <= max(D_ik, D_kj)`` for all triples."""
    if isinstance(D, UltrametricMatrix):
        D = D.D
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("need a square matrix")
    if not np.allclose(D, D.T, atol=eps, rtol=0):
        raise ValueError("matrix is not symmetric")
    if np.any(np.abs(np.diag(D)) > eps):
        raise ValueError("matrix has a nonzero diagonal")
    bound = np.maximum(D[:, :, None], D[None, :, :]).min(axis=1)
    return bool(np.all(D <= bound + eps))


def ultrametric_to_tree(U: UltrametricMatrix, eps: float = ULTRA_EPS) -> PhyloTree:
    """Agglomerate clusters at increasing distance, merging ties into one node at height v/2."""
    if not isinstance(U, UltrametricMatrix):
        raise TypeError("expected an UltrametricMatrix")
    if not is_ultrametric(U.D, eps):
        raise ValueError("matrix is not ultrametric")
    D = U.D
    clusters = [(Node(t), [i], 0.0) for i, t in enumerate(U.taxa)]
    if len(clusters) == 1:
        return PhyloTree(Node(children=[Node(U.taxa[0], 0.0)]))
    while len(clusters) > 1:
        k = len(clusters)
        link = np.full((k, k), np.inf)
        for a, b in combinations(range(k), 2):
            link[a, b] = link[b, a] = D[np.ix_(clusters[a][1], clusters[b][1])].min()
        v = link.min()
        # connected components under the threshold v
        comp = list(range(k))

        def find(a):
            while comp[a] != a:
                comp[a] = comp[comp[a]]
                a = comp[a]
            return a

        for a, b in zip(*np.nonzero(link <= v + eps)):
            comp[find(a)] = find(b)
        merged = {}
        for a in range(k):
            merged.setdefault(find(a), []).append(a)
        height = v / 2.0
        nxt = []
        for members in merged.values():
            if len(members) == 1:
                nxt.append(clusters[members[0]])
                continue
            kids = []
            for a in members:
                node, idx, h = clusters[a]
                node.length = max(height - h, 0.0)
                kids.append(node)
            nxt.append((Node(children=kids), [i for a in members for i in clusters[a][1]], height))
        clusters = nxt
    return PhyloTree(clusters[0][0])


# -- nestings ----------------------------------------------------------------


def has_nesting(U: UltrametricMatrix, A, B, eps: float = ULTRA_EPS) -> bool:
    """Whether the MRCA of A sits strictly below the MRCA of A ∪ B."""
    A, B = list(A), list(B)
    if not A or not B:
        raise ValueError("both sides of a nesting must be nonempty")
    if set(A) & set(B):
        raise ValueError("nesting sides must be disjoint")
    ia, ib = U.index(A), U.index(B)
    inner = U.D[np.ix_(ia, ia)].max()
    outer = U.D[np.ix_(ia + ib, ia + ib)].max()
    return bool(inner < outer - eps)


def tree_nestings(tree: PhyloTree):
    """Nestings ``clade < (parent clade minus clade)`` read off the tree's edges."""
    out = set()

    def walk(node):
        below = node.leaves()
        for c in node.children:
            a = frozenset(c.leaves())
            rest = frozenset(below) - a
            if rest:
                out.add((a, rest))
            walk(c)

    walk(tree.root)
    return out


def majority_threshold(n_taxa: int) -> float:
    """Fraction of inputs above which a nesting must appear in the tropical median."""
    if n_taxa < 3:
        raise ValueError("need at least 3 taxa")
    return 1.0 - 1.0 / comb(n_taxa, 2)


def absence_threshold(n_taxa: int) -> float:
    """Fraction of inputs below which a nesting cannot appear in the tropical median."""
    if n_taxa < 3:
        raise ValueError("need at least 3 taxa")
    return 1.0 / comb(n_taxa, 2)


# -- consensus ---------------------------------------------------------------

CONSENSUS_METHODS = ("median", "center", "frechet", "fw_sym_regularized")


@dataclass
class ConsensusResult:
    tree: PhyloTree
    ultrametric: UltrametricMatrix
    report: SolveReport
    method: str
    in_hull: bool
    unique: Optional[bool] = None

    def to_dict(self, inputs=None):
        d = {
            "method": self.method,
            "newick": write_newick(self.tree),
            "objective": float(self.report.objective),
            "in_hull": bool(self.in_hull),
            "ultrametric": bool(self.ultrametric.is_ultrametric()),
            "unique": self.unique,
            "solver": self.report.to_dict(),
        }
        if inputs is not None:
            d["nestings"] = nesting_summary(inputs, self)
        return d


def _matrices(trees, normalize):
    mats = [tree_to_ultrametric(t, normalize=normalize) for t in trees]
    taxa = mats[0].taxa
    for U in mats[1:]:
        if U.taxa != taxa:
            raise ValueError("all trees must be on the same taxa")
    return taxa, mats


def _pick_representative(x, points):
    """Shift a torus class so it reads as a tree on the inputs' time scale."""
    x = x - x.max() + points.max(axis=1).mean()
    if x.min() <= 0:
        x = x - x.min() + points.min(axis=1).min()
    return x


def consensus_run(trees, method: str = "fw_sym_regularized", lam: float = 0.5, normalize: bool = False, **kw) -> ConsensusResult:
    """Tropically convex consensus of equidistant trees on a common taxon set."""
    trees = list(trees)
    if not trees:
        raise ValueError("need at least one tree")
    if method not in CONSENSUS_METHODS:
        raise ValueError(f"unknown consensus method {method!r}")
    taxa, mats = _matrices(trees, normalize)
    if len(taxa) < 2:
        raise ValueError("need at least two taxa")
    points = np.array([U.vector() for U in mats])
    if len(taxa) == 2:
        # one coordinate: the torus is a point
        x = points.mean(axis=0)
        U = UltrametricMatrix.from_vector(taxa, x)
        rep = SolveReport(x, 0.0, True, 0, method)
        return ConsensusResult(ultrametric_to_tree(U), U, rep, method, True, True)
    unique = None
    if method == "center":
        rep = solve_center(points)
        unique = True
    elif method == "median":
        rep = solve(points, "median")
    elif method == "frechet":
        rep = solve(points, "frechet", **kw)
        other = solve(points, "frechet", x0=points[0], **kw)
        unique = bool(np.ptp(rep.optimum - other.optimum) <= 1e-4)
    else:
        rep = solve(points, "fw-sym", reg_lambda=lam)
    x = _pick_representative(rep.optimum, points)
    inside = in_hull_max(points, x)
    U = UltrametricMatrix.from_vector(taxa, x)
    if not is_ultrametric(U.D):
        raise RuntimeError("consensus point is not ultrametric; solver left the hull")
    return ConsensusResult(ultrametric_to_tree(U), U, rep, method, inside, unique)


def consensus(trees, method: str = "fw_sym_regularized", lam: float = 0.5, normalize: bool = False, **kw) -> PhyloTree:
    return consensus_run(trees, method, lam, normalize, **kw).tree


def nesting_summary(trees, result: ConsensusResult):
    """Edge nestings unanimous across inputs, and which the consensus keeps."""
    mats = [tree_to_ultrametric(t, normalize=not t.is_equidistant()) for t in trees]
    family = set()
    for t in trees:
        family |= tree_nestings(t)
    common, kept, invented = [], [], []
    for A, B in sorted(family, key=lambda ab: (sorted(ab[0]), sorted(ab[1]))):
        present = [has_nesting(U, A, B) for U in mats]
        shown = has_nesting(result.ultrametric, A, B)
        label = [sorted(A), sorted(B)]
        if all(present):
            common.append(label)
            if shown:
                kept.append(label)
        elif not any(present) and shown:
            invented.append(label)
    return {"unanimous": common, "unanimous_kept": kept, "unsupported_shown": invented}
