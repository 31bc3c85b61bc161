"""Projection onto the l_inf,1-norm ball and tools built on it.

The l_inf,1 norm of a matrix sums the largest absolute entry of every row;
projecting onto its ball zeroes out all but a few rows and clamps the
survivors.  The package provides a fast Newton-type root-search projector
with row pruning and a cheap initial point, two baseline root-finders for
comparison, an independent bisection oracle for verification, a projected
gradient solver for the row-sparse multi-task LASSO, scikit-learn style
estimator wrappers, and a benchmark CLI.
"""

from .api import METHODS, get_projector, project
from .baselines import SteffensenOptions, grf_project, srf_project
from .bench import (
    BenchConfig,
    BenchRecord,
    gen_laplacian_rows,
    gen_mtl_problem,
    gen_uniform,
    metrics,
    run_bench,
)
from .estimators import Linf1BallProjection, ProjectedMultiTaskLasso
from .l1ball import (
    L1Projection,
    project_l1_michelot,
    project_l1_sort,
    shrink,
)
from .matio import MatrixFormatError, read_matrix, write_matrix
from .mtl import (
    MtlProblem,
    MtlResult,
    PgdOptions,
    lipschitz_estimate,
    objective,
    pgd_solve,
)
from .oracle import KktReport, bisect_project, check_kkt
from .projection import (
    ProjectionResult,
    SolverOptions,
    linf1_norm,
    newton_project,
)

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "get_projector",
    "project",
    "SteffensenOptions",
    "grf_project",
    "srf_project",
    "BenchConfig",
    "BenchRecord",
    "gen_laplacian_rows",
    "gen_mtl_problem",
    "gen_uniform",
    "metrics",
    "run_bench",
    "Linf1BallProjection",
    "ProjectedMultiTaskLasso",
    "L1Projection",
    "project_l1_michelot",
    "project_l1_sort",
    "shrink",
    "MatrixFormatError",
    "read_matrix",
    "write_matrix",
    "MtlProblem",
    "MtlResult",
    "PgdOptions",
    "lipschitz_estimate",
    "objective",
    "pgd_solve",
    "KktReport",
    "bisect_project",
    "check_kkt",
    "ProjectionResult",
    "SolverOptions",
    "linf1_norm",
    "newton_project",
]
