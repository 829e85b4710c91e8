"""Locating a point against tropical polytopes instead of points."""

import numpy as np

from troploc import TropicalSet, dist_to_set, project, solve_set_sites

A = TropicalSet(np.array([[0, 0, 0], [0, 2, 1]], dtype=float))
B = TropicalSet(np.array([[4, 0, 0], [3, 1, 0]], dtype=float))
C = TropicalSet(np.array([[0, 0, 3]], dtype=float))

x = np.array([1.0, 5.0, 0.0])
print("projection of", x, "onto A:", np.round(project(A, x), 6), " distance", dist_to_set(A, x))

r = solve_set_sites([A, B, C])
print("set-site median", np.round(r.optimum, 6), "objective", round(r.objective, 6), "in hull of all generators", r.in_hull)
