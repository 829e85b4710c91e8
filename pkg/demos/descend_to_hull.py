"""Pulling an arbitrary point into the hull never makes a location objective worse."""

import numpy as np

from troploc import descend_to_hull, in_hull_max
from troploc.solve import build_problem

rng = np.random.default_rng(1)
sites = rng.integers(0, 6, size=(5, 4)).astype(float)
problem = build_problem(sites, "fw-sym")

for _ in range(3):
    x = rng.normal(size=4) * 8
    trace = []
    y = descend_to_hull(x, problem, trace)
    print(f"start {np.round(x, 3)} objective {problem.objective(x):.4f}")
    for k, delta in trace:
        print(f"   lower coordinate {k} by {delta:.4f}")
    print(f"  end {np.round(y, 3)} objective {problem.objective(y):.4f} in hull {in_hull_max(sites, y)}")
