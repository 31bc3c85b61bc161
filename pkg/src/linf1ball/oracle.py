"""Slow, trusted reference solvers used for verification.

Everything here is deliberately independent of the production search: the
root is located by plain bisection and the per-row thresholds come from the
sort-based kernel only, never the fixed-point one, so agreement between the
oracle and the fast solvers is evidence rather than tautology.
"""

import time
from dataclasses import dataclass

import numpy as np

from ._validate import as_matrix, check_nonnegative, check_positive
from .l1ball import row_thresholds_sort
from .projection import ProjectionResult, trivial_check

__all__ = ["KktReport", "bisect_project", "check_kkt"]


@dataclass
class KktReport:
    """Outcome of the optimality structure check.

    ``clause`` names the first violated condition (``"a"``..``"d"``) or is
    None when everything passed.
    """

    passed: bool
    clause: str | None
    message: str
    recovered_gamma: float


def bisect_project(B, tau, eps=None):
    """Project onto the l_inf,1 ball by pure bisection of the dual radius.

    The search function is evaluated with the sort-based row kernel and the
    interval ``[0, max_m ||b_m||_1]`` is halved until its width drops below
    ``eps`` (default ``1e-13`` times the right endpoint).  Orders of
    magnitude slower than the production solvers; meant for tests.
    """
    B = as_matrix(B)
    tau = check_nonnegative(tau, "tau")
    start = time.perf_counter()
    trivial = trivial_check(B, tau)
    if trivial is not None:
        trivial.elapsed = time.perf_counter() - start
        trivial.method = "bisect"
        return trivial

    absB = np.abs(B)
    row_l1 = absB.sum(axis=1)
    hi = float(row_l1.max())
    lo = 0.0
    if eps is None:
        eps = 1e-13 * hi
    else:
        eps = check_positive(eps, "eps")

    def f(gamma):
        lam, _ = row_thresholds_sort(absB, row_l1, gamma)
        return float(lam.sum() - tau), lam

    steps = 0
    # invariant: f(lo) >= 0 > f(hi)
    while hi - lo > eps:
        mid = 0.5 * (lo + hi)
        fmid, _ = f(mid)
        if fmid >= 0:
            lo = mid
        else:
            hi = mid
        steps += 1

    gamma = 0.5 * (lo + hi)
    residual, lam = f(gamma)
    X = np.sign(B) * np.minimum(absB, lam[:, None])
    return ProjectionResult(
        X=X,
        gamma_star=gamma,
        iterations=steps,
        residual=abs(residual),
        elapsed=time.perf_counter() - start,
        converged=True,
        f_evals=steps + 1,
        gamma_trace=(gamma,),
        method="bisect",
    )


def check_kkt(B, tau, X, tol):
    """Verify that ``X`` has the structure of the true projection of ``B``.

    Checks, in order:

    a. ``| ||X||_inf,1 - tau | <= tol``;
    b. every row of ``X`` is either zero or an elementwise clamp of the
       corresponding row of ``B`` at the row's max magnitude;
    c. the clamp levels of the nonzero rows sum to ``tau`` within ``tol``;
    d. rows that were zeroed had l1 norm at most the recovered dual radius
       (the largest l1 norm among the removed parts ``b_m - x_m`` of the
       surviving rows) plus ``tol``.

    Returns a :class:`KktReport` naming the first violated clause.
    """
    B = as_matrix(B, "B")
    X = as_matrix(X, "X")
    if B.shape != X.shape:
        raise ValueError(f"shape mismatch: B {B.shape} vs X {X.shape}")
    tau = check_nonnegative(tau, "tau")
    tol = check_positive(tol, "tol")

    levels = np.abs(X).max(axis=1)
    nonzero = levels > 0

    err = abs(float(levels.sum()) - tau)
    if err > tol:
        return KktReport(False, "a", f"|norm(X) - tau| = {err:.3e} > {tol:.3e}", 0.0)

    for m in np.nonzero(nonzero)[0]:
        clamp = np.sign(B[m]) * np.minimum(np.abs(B[m]), levels[m])
        dev = np.abs(X[m] - clamp).max()
        if dev > tol:
            return KktReport(
                False, "b", f"row {m} deviates from a clamp by {dev:.3e}", 0.0
            )

    csum = float(levels[nonzero].sum())
    if abs(csum - tau) > tol:
        return KktReport(
            False, "c", f"clamp levels sum to {csum!r}, expected {tau!r}", 0.0
        )

    if nonzero.any():
        gamma = float(np.abs(B - X)[nonzero].sum(axis=1).max())
    else:
        gamma = 0.0
    zero_l1 = np.abs(B[~nonzero]).sum(axis=1)
    if zero_l1.size and zero_l1.max() > gamma + tol:
        worst = int(np.nonzero(~nonzero)[0][int(np.argmax(zero_l1))])
        return KktReport(
            False, "d",
            f"zeroed row {worst} has l1 norm {zero_l1.max():.6e} "
            f"> recovered gamma {gamma:.6e} + tol",
            gamma,
        )

    return KktReport(True, None, "ok", gamma)
