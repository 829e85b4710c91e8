"""The tropical L1 regularizer keeps optima in the hull but is exact only for small weights.

Three sites (0,0,0), (0,0,0), (0,1,0): the symmetric Fermat-Weber objective has
its unique minimum 1 at the origin. With the kernel at the tropical center the
regularized optimum leaves the origin from weight 1/2 on (at 1/2 the two tie).
"""

import numpy as np

from troploc import regularize, solve, solve_center
from troploc.solve import build_problem

sites = np.array([[0, 0, 0], [0, 0, 0], [0, 1, 0]], dtype=float)
base = build_problem(sites, "fw-sym")
kernel = solve_center(sites).optimum
print("kernel", np.round(kernel, 6))
for lam in (0.1, 0.3, 0.5, 0.6, 0.9):
    r = solve(regularize(base, lam, kernel), "fw-sym")
    print(f"lambda {lam:.1f}: optimum {np.round(r.optimum, 6)}  unregularized objective {base.objective(r.optimum):.4f}")
