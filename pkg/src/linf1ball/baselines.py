"""Prior root-search projectors used as comparison points.

Both baselines find the root of the same scalar search function as the
Newton solver but drive it differently:

* ``grf_project`` ("general root finding") runs a Brent-style bracketing
  hybrid, combining bisection, the secant method and inverse quadratic
  interpolation, on the interval ``[0, max_m ||b_m||_1]``.  By default it
  uses neither row pruning nor the shrink-based initial point, preserving
  the character of the generic approach; both can be switched on for
  ablation runs.

* ``srf_project`` ("Steffensen root finding") is a derivative-free
  quasi-Newton iteration that replaces the slope with a secant built from
  an auxiliary point ``y_n = x_n + alpha_n |f(x_n)|``, at the cost of two
  function evaluations per iteration.  The perturbation size is held
  mid-way inside the admissible band ``(tol_u/2, tol_u)``; plain
  Steffensen (perturbation ``f(x_n)`` itself) diverges easily when started
  far from the root.  Pruning and the initial point are shared with the
  Newton solver by default.
"""

import time
from dataclasses import dataclass

import numpy as np

from ._validate import as_matrix, check_nonnegative
from .projection import (
    ActiveSet,
    ProjectionResult,
    SolverOptions,
    assemble,
    eval_search,
    initial_gamma,
    trivial_check,
)

__all__ = ["SteffensenOptions", "grf_project", "srf_project"]

_EPS = float(np.finfo(np.float64).eps)


@dataclass
class SteffensenOptions:
    """Options for :func:`srf_project`.

    ``tol_c`` is the machine-precision floor of the perturbation band and
    ``tol_u`` the user-level scale that sizes the auxiliary point; the band
    requires ``tol_c`` to be well below ``tol_u``.  ``tolerance`` is the
    stopping rule ``|f| <= tolerance * max(1, tau)``, kept identical to the
    Newton solver's so iteration counts and errors are comparable.
    """

    tol_c: float = 1e-12
    tol_u: float = 1e-8
    max_iter: int = 100
    tolerance: float = 1e-12
    use_pruning: bool = True
    use_initial_point: bool = True

    def __post_init__(self):
        if not (0 < self.tol_c < self.tol_u):
            raise ValueError("need 0 < tol_c < tol_u")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


def grf_project(B, tau, opts=None):
    """Project onto the l_inf,1 ball with a Brent-style root search.

    ``opts`` defaults to ``SolverOptions(use_pruning=False,
    use_initial_point=False)``; pass explicit options to ablate.

    The search function is monotonically decreasing on the bracket and
    differs in sign at its endpoints (``f(0) = ||B||_inf,1 - tau > 0`` and
    ``f(max_m ||b_m||_1) = -tau < 0``), so the hybrid always converges.
    Convergence means ``|f| <= tol * max(1, tau)``, the same rule as the
    other solvers; a bracket collapsed to machine width or an exhausted
    iteration budget ends the search with ``converged=False``.  A
    scale-level bracket criterion would be cheaper but can stop short of
    the feasibility budget when the search function is steep near the
    root (slope well above ``tau`` per unit radius).
    """
    if opts is None:
        opts = SolverOptions(use_pruning=False, use_initial_point=False)
    B = as_matrix(B)
    tau = check_nonnegative(tau, "tau")
    start = time.perf_counter()
    trivial = trivial_check(B, tau)
    if trivial is not None:
        trivial.elapsed = time.perf_counter() - start
        trivial.method = "grf"
        return trivial

    active = ActiveSet(B)
    a = initial_gamma(B, tau) if opts.use_initial_point else 0.0
    b = float(active.row_l1.max())
    ftol = opts.tolerance * max(1.0, tau)

    evals = 0
    bracket_lo = a

    def f(x):
        nonlocal evals
        evals += 1
        return eval_search(active, x, tau, prune=False).f_value

    fa = f(a)
    if abs(fa) <= ftol:
        # the ablation initial point can land on the root outright
        ev = eval_search(active, a, tau, prune=False)
        evals += 1
        return ProjectionResult(
            X=assemble(B, active, ev.thresholds),
            gamma_star=float(a),
            iterations=0,
            residual=abs(ev.f_value),
            elapsed=time.perf_counter() - start,
            converged=True,
            f_evals=evals,
            gamma_trace=(float(a),),
            active_counts=(active.count,),
            method="grf",
        )
    if opts.use_pruning:
        active.prune(bracket_lo)
    fb = f(b)
    if not (fa > 0 >= fb):
        raise RuntimeError(
            "search function does not change sign on the bracket; "
            "input should have been caught by the trivial check"
        )

    c, fc = a, fa
    e = d = b - a
    iterations = 0
    while True:
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * max(abs(b), 1.0)
        m = 0.5 * (c - b)
        if abs(fb) <= ftol or fb == 0.0:
            break
        # backstops; ending here leaves the result marked unconverged
        if abs(m) <= tol or iterations >= opts.max_iter:
            break
        if abs(e) < tol or abs(fa) <= abs(fb):
            e = d = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            s = e
            e = d
            if 2.0 * p < 3.0 * m * q - abs(tol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                e = d = m
        a, fa = b, fb
        if abs(d) > tol:
            b += d
        elif m > 0.0:
            b += tol
        else:
            b -= tol
        fb = f(b)
        iterations += 1
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            e = d = b - a
        if opts.use_pruning:
            # only prune below a certified sign-change pair: its left end
            # cannot exceed the root, and future queries stay inside it
            new_lo = min(b, c)
            if new_lo > bracket_lo:
                bracket_lo = new_lo
                active.prune(bracket_lo)

    # final evaluation at the root supplies the assembly thresholds
    ev = eval_search(active, b, tau, prune=False)
    evals += 1
    X = assemble(B, active, ev.thresholds)
    residual = abs(ev.f_value)
    return ProjectionResult(
        X=X,
        gamma_star=float(b),
        iterations=iterations,
        residual=residual,
        elapsed=time.perf_counter() - start,
        converged=residual <= ftol,
        f_evals=evals,
        gamma_trace=(float(b),),
        active_counts=(active.count,),
        method="grf",
    )


def srf_project(B, tau, opts=None):
    """Project onto the l_inf,1 ball with the modified Steffensen iteration.

    Each iteration evaluates the search function twice, at ``x_n`` and at
    the auxiliary point ``y_n = x_n + 0.75 * tol_u`` (the mid-band choice
    of ``alpha_n |f(x_n)|``), and updates ``x`` with the secant through the
    two points.  A flat or wrong-signed secant, or a candidate leaving the
    sign-change bracket, falls back to bisection.
    """
    if opts is None:
        opts = SteffensenOptions()
    B = as_matrix(B)
    tau = check_nonnegative(tau, "tau")
    start = time.perf_counter()
    trivial = trivial_check(B, tau)
    if trivial is not None:
        trivial.elapsed = time.perf_counter() - start
        trivial.method = "srf"
        return trivial

    active = ActiveSet(B)
    x = initial_gamma(B, tau) if opts.use_initial_point else 0.0
    lo = x
    hi = float(active.row_l1.max())
    stop = opts.tolerance * max(1.0, tau)
    pert = 0.75 * opts.tol_u

    evals = 0
    trace = []
    counts = []
    ev = None
    converged = False
    iterations = 0
    for _ in range(opts.max_iter):
        ev = eval_search(active, x, tau, prune=opts.use_pruning)
        # the auxiliary evaluation must not prune: y sits right of x and
        # may even overstep the root
        ev_y = eval_search(active, x + pert, tau, prune=False)
        evals += 2
        iterations += 1
        trace.append(x)
        counts.append(active.count)
        fx = ev.f_value
        if abs(fx) <= stop:
            converged = True
            break
        if fx > 0:
            lo = x
        else:
            hi = min(hi, x)
        slope = (ev_y.f_value - fx) / pert
        if np.isfinite(slope) and slope < 0:
            cand = x - fx / slope
        else:
            cand = None
        if cand is None or not lo < cand < hi:
            cand = 0.5 * (lo + hi)
        x = cand

    X = assemble(B, active, ev.thresholds)
    return ProjectionResult(
        X=X,
        gamma_star=float(trace[-1]),
        iterations=iterations,
        residual=abs(ev.f_value),
        elapsed=time.perf_counter() - start,
        converged=converged,
        f_evals=evals,
        gamma_trace=tuple(trace),
        active_counts=tuple(counts),
        method="srf",
    )
