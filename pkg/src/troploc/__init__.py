"""Location problems in the tropical torus and tropically convex tree consensus."""

__version__ = "0.1.0"

from .core import (
    EPS,
    DimensionError,
    as_point,
    canonical,
    d_asym,
    d_sym,
    descent_set,
    geodesic_contains,
    h_normalize,
    in_hull_max,
    torus_equal,
)
from .gauges import Aggregator, CustomGauge, Gauge, HyperplaneGauge, SimplexGauge, TropLp
from .lp import LinearProgram, simplex_solve
from .phylo import PhyloTree, UltrametricMatrix, consensus, consensus_run, parse_newick, write_newick
from .sets import TropicalSet, dist_to_set, project, solve_set_sites
from .solve import (
    LocationProblem,
    SolveReport,
    descend_to_hull,
    regularize,
    solve,
    solve_best_fit_hyperplane,
    solve_center,
    solve_subgradient,
)
