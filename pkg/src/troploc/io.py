"""Reading and writing point clouds, set sites and problem specs."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .core import as_cloud, in_hull_max
from .gauges import Aggregator, gauge_from_config
from .sets import TropicalSet
from .solve import LocationProblem

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["sites"],
    "properties": {
        "sites": {"type": "string"},
        "gauge": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["lp", "simplex", "hyperplane"]},
                "p": {"anyOf": [{"type": "number", "minimum": 1}, {"enum": ["inf", "infinity"]}]},
                "lambda": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
            },
        },
        "aggregator": {"enum": ["sum", "weighted_sum", "sum_squares", "max"]},
        "weights": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "regularizer": {
            "type": "object",
            "required": ["lambda"],
            "properties": {
                "lambda": {"type": "number", "exclusiveMinimum": 0},
                "kernel": {"type": "array", "items": {"type": "number"}},
            },
        },
    },
}


def parse_points_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    try:
        data = [[float(c) for c in r] for r in rows]
    except ValueError as e:
        raise ValueError(f"bad number in CSV: {e}") from None
    if len({len(r) for r in data}) > 1:
        raise ValueError("CSV rows have different lengths")
    return as_cloud(data)


def parse_points_json(text: str) -> np.ndarray:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("points", data.get("generators"))
    return as_cloud(data)


def read_points(path) -> np.ndarray:
    """Point cloud from ``.json`` (array of arrays) or CSV (one point per row)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_points_json(text)
    return parse_points_csv(text)


def write_points(path, points):
    points = as_cloud(points)
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(points.tolist()))
    else:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows([[repr(float(t)) for t in row] for row in points])
        path.write_text(buf.getvalue())


def read_set(path) -> TropicalSet:
    """A set site from ``{"generators": [[...], ...]}``."""
    return TropicalSet.from_dict(json.loads(Path(path).read_text()))


def problem_from_spec(spec: dict, base=".") -> LocationProblem:
    """Build a :class:`LocationProblem` from the JSON problem spec."""
    import jsonschema

    jsonschema.validate(spec, PROBLEM_SCHEMA)
    sites = read_points(Path(base) / spec["sites"])
    gauge = gauge_from_config(spec.get("gauge", {"kind": "lp", "p": 1}))
    agg = Aggregator(spec.get("aggregator", "sum"), spec.get("weights"))
    problem = LocationProblem.uniform(sites, gauge, agg)
    reg = spec.get("regularizer")
    if reg:
        from .solve import regularize

        kernel = reg.get("kernel")
        if kernel is not None and not in_hull_max(sites, kernel):
            raise ValueError("regularizer kernel lies outside the hull of the sites")
        problem = regularize(problem, reg["lambda"], kernel)
    return problem
