"""Command-line front end.

Exit codes: 0 success, 2 input or validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import canonical, in_hull_max
from .io import problem_from_spec, read_points, read_set
from .lp import LPError
from .phylo import absence_threshold, consensus_run, majority_threshold, parse_newick_file, write_newick
from .plot import render_svg
from .sets import project, solve_set_sites
from .solve import build_problem, regularize, solve, solve_polyhedral, solve_subgradient

log = logging.getLogger("troploc")

SOLVE_METHODS = ("center", "median", "fw-simplex", "fw-sym", "frechet", "hyperplane-l1", "hyperplane-linf", "set-sites")
PLOT_DEFAULT = ("center", "median", "fw-sym", "frechet")

RUN_SCHEMA = {
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": ["solve", "consensus", "plot", "hull", "project"]},
        "method": {"type": ["string", "null"]},
        "lambda": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "eps": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "seed": {"type": "integer"},
    },
}


class InputError(Exception):
    pass


def _configure_logging():
    level = os.environ.get("TROPLOC_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")


def _load_points(path):
    if not path:
        raise InputError("--points is required")
    try:
        return read_points(path)
    except (OSError, ValueError) as e:
        raise InputError(f"cannot read points from {path}: {e}") from e


def _emit(text, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _solve_report(args):
    if args.config:
        spec = json.loads(Path(args.config).read_text())
        problem = problem_from_spec(spec, Path(args.config).parent)
        rep = solve_polyhedral(problem, "config") if problem.polyhedral else solve_subgradient(problem)
        return problem.sites, rep
    if args.method == "set-sites":
        if not args.sets:
            raise InputError("set-sites needs --sets")
        sets = [read_set(p) for p in args.sets]
        rep = solve_set_sites(sets)
        return np.vstack([s.generators for s in sets]), rep
    points = _load_points(args.points)
    reg = args.lam if args.regularize or args.lam is not None else None
    if args.regularize and reg is None:
        reg = 0.5
    kernel = None
    if args.kernel:
        kernel = _load_points(args.kernel)[0]
        if not in_hull_max(points, kernel):
            raise InputError("--kernel lies outside the max-tropical hull of the points")
    if reg is not None and args.method.startswith("hyperplane"):
        raise InputError("regularization is not available for hyperplane fitting")
    if reg is not None:
        problem = regularize(build_problem(points, args.method), reg, kernel)
        rep = solve(problem, args.method)
    else:
        rep = solve(points, args.method)
    return points, rep


def cmd_solve(args):
    points, rep = _solve_report(args)
    if args.eps:
        rep.in_hull = in_hull_max(points, rep.optimum, args.eps)
    _emit(rep.to_json(indent=2) + "\n", args.report)
    if args.plot:
        Path(args.plot).write_text(render_svg(points, {rep.method: rep.optimum}, seed=args.seed))
    return 0


def _read_trees(path):
    p = Path(path)
    if p.is_dir():
        files = sorted(p.glob("*.nwk"))
        if not files:
            raise InputError(f"no .nwk files in {p}")
        text = "\n".join(f.read_text() for f in files)
    else:
        text = p.read_text()
    try:
        trees = parse_newick_file(text)
    except ValueError as e:
        raise InputError(str(e)) from e
    if not trees:
        raise InputError("no trees found")
    return trees


def cmd_consensus(args):
    if not args.trees:
        raise InputError("--trees is required")
    trees = _read_trees(args.trees)
    method = args.method or "fw-sym"
    names = {"fw-sym": "fw_sym_regularized", "median": "median", "center": "center", "frechet": "frechet"}
    if method not in names:
        raise InputError(f"consensus supports {sorted(names)}, not {method!r}")
    taxa = {tuple(t.taxa) for t in trees}
    if len(taxa) > 1:
        raise InputError("input trees are on different taxa")
    lam = args.lam if args.lam is not None else 0.5
    try:
        res = consensus_run(trees, names[method], lam=lam, normalize=args.normalize_heights)
    except ValueError as e:
        raise InputError(str(e)) from e
    sys.stdout.write(write_newick(res.tree) + "\n")
    report = res.to_dict(inputs=trees)
    if method == "fw-sym":
        report["lambda"] = lam
    if args.check_majority:
        k = len(res.ultrametric.taxa)
        report["majority_threshold"] = majority_threshold(k)
        report["absence_threshold"] = absence_threshold(k)
    text = json.dumps(report, indent=2) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stderr.write(text)
    return 0


def cmd_plot(args):
    points = _load_points(args.points)
    if points.shape[1] != 3:
        raise InputError("plotting is defined only for n=3")
    methods = args.method_list or list(PLOT_DEFAULT)
    optima = {}
    for m in methods:
        if m == "set-sites":
            raise InputError("plot takes point sites only")
        optima[m] = solve(points, m).optimum
    if not args.plot:
        raise InputError("--plot FILE is required")
    Path(args.plot).write_text(render_svg(points, optima, seed=args.seed))
    return 0


def _queries(args, n):
    if not args.query:
        raise InputError("--query is required")
    q = _load_points(args.query)
    if q.shape[1] != n:
        raise InputError("query points have the wrong dimension")
    return q


def cmd_hull(args):
    points = _load_points(args.points)
    q = _queries(args, points.shape[1])
    eps = args.eps or 1e-9
    out = [{"point": canonical(x).tolist(), "in_hull": in_hull_max(points, x, eps)} for x in q]
    _emit(json.dumps(out, indent=2) + "\n", args.report)
    return 0


def cmd_project(args):
    from .sets import TropicalSet

    A = TropicalSet(_load_points(args.points))
    q = _queries(args, A.n)
    out = [{"point": canonical(x).tolist(), "projection": project(A, x).tolist()} for x in q]
    _emit(json.dumps(out, indent=2) + "\n", args.report)
    return 0


COMMANDS = {"solve": cmd_solve, "consensus": cmd_consensus, "plot": cmd_plot, "hull": cmd_hull, "project": cmd_project}


def build_parser():
    ap = argparse.ArgumentParser(prog="troploc", description="Tropical location problems and tree consensus.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--points", help="CSV or JSON point cloud, one point per row")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.add_argument("--eps", type=float, help="tolerance for hull checks")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--plot", help="SVG output path (n = 3 only)")

    p = sub.add_parser("solve", help="solve a location problem")
    common(p)
    p.add_argument("--method", choices=SOLVE_METHODS, default="median")
    p.add_argument("--sets", nargs="+", help="JSON set files for --method set-sites")
    p.add_argument("--lambda", dest="lam", type=float, help="regularization weight")
    p.add_argument("--regularize", action="store_true", help="add a tropical L1 regularizer (default weight 0.5)")
    p.add_argument("--kernel", help="regularizer kernel (first point of this file)")
    p.add_argument("--config", help="JSON problem spec (sites, gauge, aggregator, weights, regularizer)")

    p = sub.add_parser("consensus", help="tropically convex consensus of equidistant trees")
    p.add_argument("--trees", help="multi-tree Newick file or directory of .nwk files")
    p.add_argument("--method", choices=("median", "center", "frechet", "fw-sym"), default="fw-sym")
    p.add_argument("--lambda", dest="lam", type=float, help="regularization weight for fw-sym (default 0.5)")
    p.add_argument("--report", help="JSON report path (default: stderr)")
    p.add_argument("--normalize-heights", action="store_true", help="stretch pendant edges of non-equidistant trees")
    p.add_argument("--check-majority", action="store_true", help="include the majority-rule thresholds")
    p.add_argument("--eps", type=float)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("plot", help="SVG of sites, hull and optima (n = 3)")
    common(p)
    p.add_argument("--method", dest="method_list", action="append", choices=SOLVE_METHODS)

    p = sub.add_parser("hull", help="max-tropical hull membership of query points")
    common(p)
    p.add_argument("--query", help="points to test")

    p = sub.add_parser("project", help="tropical projection onto the hull of --points")
    common(p)
    p.add_argument("--query", help="points to project")
    return ap


def _validate(args):
    import jsonschema

    cfg = {k: v for k, v in vars(args).items() if v is not None}
    if "lam" in cfg:
        cfg["lambda"] = cfg.pop("lam")
    try:
        jsonschema.validate(cfg, RUN_SCHEMA)
    except jsonschema.ValidationError as e:
        raise InputError(e.message) from e


def main(argv=None):
    _configure_logging()
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except (InputError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"troploc: error: {e}", file=sys.stderr)
        return 2
    except (LPError, RuntimeError, FloatingPointError) as e:
        print(f"troploc: numerical failure: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"troploc: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
