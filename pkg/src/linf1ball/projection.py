"""Euclidean projection onto the l_inf,1-norm ball by Newton root search.

The l_inf,1 norm of a matrix is the sum over rows of each row's largest
absolute entry; its ball promotes solutions with few nonzero rows.  The
projection of ``B`` onto the ball of radius ``tau`` equals ``B - A`` where
each row of ``A`` is the projection of the corresponding row of ``B`` onto
a common l1 ball whose radius ``gamma`` is the unknown.  The right
``gamma`` is the unique root of the scalar search function

    f(gamma) = sum_m lam_m(gamma) - tau,

with ``lam_m`` the per-row shrink threshold, a quantity delivered by the
:mod:`~linf1ball.l1ball` kernel.  ``f`` is piecewise linear, convex and
decreasing, so a Newton iteration using the one-sided slope
``-sum_m 1/n_m`` (``n_m`` the per-row support count) walks monotonically up
to the root.  Two further ingredients make the solver fast: rows whose l1
norm falls below the current ``gamma`` can never re-enter and are pruned
permanently, and a cheap initial point ``gamma_0 = max_k ||shrink(b_k,
tau)||_1`` is provably on the left of the root.
"""

import time
from dataclasses import dataclass

import numpy as np

from ._validate import as_matrix, check_nonnegative
from .l1ball import row_thresholds_michelot

__all__ = [
    "SolverOptions",
    "SearchEval",
    "ProjectionResult",
    "ActiveSet",
    "linf1_norm",
    "trivial_check",
    "initial_gamma",
    "eval_search",
    "newton_step",
    "assemble",
    "newton_project",
]


@dataclass
class SolverOptions:
    """Knobs for the root-search projectors.

    tolerance
        Stop once ``|f(gamma)| <= tolerance * max(1, tau)``.
    max_iter
        Cap on search iterations; exceeding it returns the best iterate
        with ``converged=False``.
    use_initial_point / use_pruning
        Feature toggles, mainly for ablation runs.
    """

    tolerance: float = 1e-12
    max_iter: int = 100
    use_initial_point: bool = True
    use_pruning: bool = True

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SearchEval:
    """One evaluation of the search function at a given gamma.

    ``f_value`` is ``sum(thresholds) - tau``; ``sum_inv_support`` is
    ``sum_m 1/n_m`` over rows still outside their l1 ball, i.e. the negated
    slope estimate used by the Newton update.
    """

    f_value: float
    sum_inv_support: float
    thresholds: np.ndarray
    supports: np.ndarray


@dataclass
class ProjectionResult:
    """Projected matrix plus root-search diagnostics."""

    X: np.ndarray
    gamma_star: float
    iterations: int
    residual: float
    elapsed: float
    converged: bool
    f_evals: int = 0
    gamma_trace: tuple = ()
    active_counts: tuple = ()
    method: str = "newton"


class ActiveSet:
    """Compacted view of the rows still participating in the search.

    Holds a working copy of ``|B|`` with cached row norms; pruned rows are
    removed by compacting survivors to the array prefix, and the original
    row order is restored only when the solution is assembled, via the
    ``indices`` map.  Rows are never re-admitted: the search radius only
    grows.
    """

    def __init__(self, B):
        self.abs_rows = np.abs(B)
        self.row_l1 = self.abs_rows.sum(axis=1)
        self.row_linf = self.abs_rows.max(axis=1)
        self._idx = np.arange(B.shape[0])
        self.count = B.shape[0]

    @property
    def indices(self):
        return self._idx[: self.count]

    def prune(self, gamma):
        """Drop rows with l1 norm <= gamma; returns how many were removed.

        Non-strict comparison: a row at exact equality has a zero threshold
        and contributes nothing, so discarding it is exact.
        """
        keep = self.row_l1[: self.count] > gamma
        m = int(np.count_nonzero(keep))
        if m < self.count:
            self.abs_rows[:m] = self.abs_rows[: self.count][keep]
            self.row_l1[:m] = self.row_l1[: self.count][keep]
            self._idx[:m] = self._idx[: self.count][keep]
        removed = self.count - m
        self.count = m
        return removed


def linf1_norm(B):
    """Sum over rows of the largest absolute entry."""
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2:
        raise ValueError("expected a matrix")
    return float(np.abs(B).max(axis=1).sum())


def trivial_check(B, tau):
    """Handle the inputs that need no root search at all.

    Returns a finished :class:`ProjectionResult` when ``B`` is already
    inside the ball (projection is the identity) or when ``tau == 0``
    (projection is the zero matrix); returns ``None`` otherwise.
    """
    B = as_matrix(B)
    tau = check_nonnegative(tau, "tau")
    norm = linf1_norm(B)
    if norm <= tau:
        return ProjectionResult(
            X=B.copy(), gamma_star=0.0, iterations=0, residual=0.0,
            elapsed=0.0, converged=True,
        )
    if tau == 0.0:
        # the dual row radius saturates at the largest row l1 norm
        gamma = float(np.abs(B).sum(axis=1).max())
        return ProjectionResult(
            X=np.zeros_like(B), gamma_star=gamma, iterations=0, residual=0.0,
            elapsed=0.0, converged=True,
        )
    return None


def initial_gamma(B, tau):
    """Initial root-search point ``max_k ||shrink(b_k, tau)||_1``.

    Assumes the caller already knows ``B`` is outside the ball.  The shrink
    is evaluated only for rows whose max-magnitude exceeds ``tau``; if no
    row passes that guard the start is 0.  The value is guaranteed to sit
    at or left of the root (``f(gamma_0) >= 0``).
    """
    B = as_matrix(B)
    absB = np.abs(B)
    guard = absB.max(axis=1) > tau
    if not np.any(guard):
        return 0.0
    return float(np.maximum(absB[guard] - tau, 0.0).sum(axis=1).max())


def eval_search(active, gamma, tau, prune=True):
    """Evaluate ``f(gamma)`` and its slope surrogate on the active rows.

    With ``prune=True`` rows whose l1 norm is <= ``gamma`` are first
    discarded from ``active`` for good.  Rows left inside their ball
    contribute a zero threshold and are excluded from the slope sum.  An
    emptied active set yields ``f = -tau``.
    """
    if prune:
        active.prune(gamma)
    m = active.count
    if m == 0:
        return SearchEval(-float(tau), 0.0, np.empty(0), np.empty(0, dtype=np.int64))
    lam, n = row_thresholds_michelot(
        active.abs_rows[:m], active.row_l1[:m], gamma
    )
    f = float(lam.sum() - tau)
    pos = n > 0
    sum_inv = float((1.0 / n[pos]).sum()) if pos.any() else 0.0
    return SearchEval(f, sum_inv, lam, n)


def newton_step(gamma, ev):
    """One Newton update ``gamma + f / sum(1/n_m)``.

    Raises when the slope estimate is unusable (empty active set); callers
    fall back to bisection of their bracket in that case.
    """
    if ev.sum_inv_support <= 0:
        raise ValueError("no active rows: search overshot the root")
    return gamma + ev.f_value / ev.sum_inv_support


def assemble(B, active, thresholds):
    """Build the projection from converged per-row thresholds.

    Active rows are clamped elementwise at their threshold,
    ``x = sign(b) * min(|b|, lam)``; pruned rows are exactly zero.
    """
    X = np.zeros_like(B)
    idx = active.indices
    if idx.size:
        rows = B[idx]
        X[idx] = np.sign(rows) * np.minimum(np.abs(rows), thresholds[:, None])
    return X


def newton_project(B, tau, opts=None):
    """Project ``B`` onto the l_inf,1 ball of radius ``tau``.

    Parameters
    ----------
    B : array_like, shape (M, N)
        Input matrix; rows are the groups.
    tau : float
        Ball radius, >= 0.
    opts : SolverOptions, optional

    Returns
    -------
    ProjectionResult

    Notes
    -----
    The Newton step never overshoots on this convex piecewise-linear
    function, so the iterates climb monotonically from the initial point to
    the root and pruning is safe.  A bisection safeguard on the bracket
    ``[last gamma with f >= 0, smallest gamma seen with f < 0]`` keeps
    convergence unconditional even under adversarial rounding; it does not
    trigger on the fast path.
    """
    if opts is None:
        opts = SolverOptions()
    B = as_matrix(B)
    tau = check_nonnegative(tau, "tau")
    start = time.perf_counter()
    trivial = trivial_check(B, tau)
    if trivial is not None:
        trivial.elapsed = time.perf_counter() - start
        return trivial

    active = ActiveSet(B)
    gamma = initial_gamma(B, tau) if opts.use_initial_point else 0.0
    lo = gamma                             # f(gamma_0) >= 0 by construction
    hi = float(active.row_l1.max())        # f there is exactly -tau < 0
    stop = opts.tolerance * max(1.0, tau)

    trace = []
    counts = []
    ev = None
    converged = False
    iterations = 0
    for _ in range(opts.max_iter):
        ev = eval_search(active, gamma, tau, prune=opts.use_pruning)
        iterations += 1
        trace.append(gamma)
        counts.append(active.count)
        if abs(ev.f_value) <= stop:
            converged = True
            break
        if ev.f_value > 0:
            lo = gamma
        else:
            hi = min(hi, gamma)
        if ev.f_value > 0 and ev.sum_inv_support > 0:
            cand = newton_step(gamma, ev)
        else:
            cand = None
        if cand is None or not lo < cand < hi:
            cand = 0.5 * (lo + hi)
        gamma = cand

    X = assemble(B, active, ev.thresholds)
    return ProjectionResult(
        X=X,
        gamma_star=float(trace[-1]),
        iterations=iterations,
        residual=abs(ev.f_value),
        elapsed=time.perf_counter() - start,
        converged=converged,
        f_evals=iterations,
        gamma_trace=tuple(trace),
        active_counts=tuple(counts),
        method="newton",
    )
