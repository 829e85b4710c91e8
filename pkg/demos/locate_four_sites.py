"""Every location method on four sites in the 2-dimensional tropical torus.

Run: python demos/locate_four_sites.py [out.svg]
"""

import sys

import numpy as np

from troploc import in_hull_max, solve
from troploc.plot import render_svg

V = np.array([[0, 1, 1], [1, 0, 1], [3, 2, 0], [2, 3, 0]], dtype=float)

optima = {}
for method in ("center", "median", "fw-simplex", "fw-sym", "frechet", "hyperplane-l1", "hyperplane-linf"):
    r = solve(V, method)
    optima[method] = r.optimum
    print(f"{method:16s} optimum {np.round(r.optimum, 6)}  objective {r.objective:.6g}  in hull {in_hull_max(V, r.optimum)}")

out = sys.argv[1] if len(sys.argv) > 1 else "locate_four_sites.svg"
with open(out, "w") as fh:
    fh.write(render_svg(V, {k: optima[k] for k in ("center", "median", "fw-sym", "frechet")}))
print(f"picture written to {out}")
