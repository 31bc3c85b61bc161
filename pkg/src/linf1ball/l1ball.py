"""Projection of a single vector onto the l1-norm ball.

This is the scalar-threshold kernel underneath everything else in the
package: projecting ``u`` onto ``{x : ||x||_1 <= r}`` amounts to finding one
shrink threshold ``lam`` and soft-thresholding ``u`` at that level.  Two
solvers are provided, a sort-based breakpoint search and the finite
fixed-point iteration with element pruning, plus vectorised variants that
compute the threshold for every row of a matrix at once.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validate import as_vector, check_nonnegative, check_positive

__all__ = [
    "L1Projection",
    "shrink",
    "project_l1_sort",
    "project_l1_michelot",
    "row_thresholds_michelot",
    "row_thresholds_sort",
]


@dataclass
class L1Projection:
    """Result of projecting one vector onto an l1 ball.

    Attributes
    ----------
    projected : ndarray
        The projected vector, ``sign(u) * max(|u| - threshold, 0)``.
    threshold : float
        Shrink level ``lam``; 0 when the input was already inside the ball.
    support_size : int
        Number of entries with ``|u_i| > threshold`` (0 for the interior
        case, where no shrinkage happened).
    iterate_trace : tuple
        Threshold iterates recorded by the fixed-point solver; empty for the
        sort-based solver and for interior inputs.
    """

    projected: np.ndarray
    threshold: float
    support_size: int
    iterate_trace: tuple = field(default_factory=tuple)


def shrink(v, kappa):
    """Elementwise soft-thresholding ``sign(v) * max(|v| - kappa, 0)``.

    ``kappa`` must be nonnegative; ``kappa == 0`` returns ``v`` unchanged.
    """
    v = as_vector(v, "v")
    kappa = check_nonnegative(kappa, "kappa")
    return np.sign(v) * np.maximum(np.abs(v) - kappa, 0.0)


def project_l1_sort(u, radius):
    """Project ``u`` onto the l1 ball of the given radius by sorting.

    Sorts the magnitudes in decreasing order and scans for the largest
    prefix whose running mean excess stays below the next magnitude; the
    threshold is that prefix's mean excess.  O(N log N), exact up to
    rounding, used as the trusted reference for the fixed-point variant.
    """
    u = as_vector(u, "u")
    radius = check_positive(radius, "radius")
    a = np.abs(u)
    if a.sum() <= radius:
        return L1Projection(u.copy(), 0.0, 0)
    v = np.sort(a)[::-1]
    cand = (np.cumsum(v) - radius) / np.arange(1, u.size + 1)
    last = int(np.nonzero(cand < v)[0][-1])
    lam = float(cand[last])
    proj = np.sign(u) * np.maximum(a - lam, 0.0)
    return L1Projection(proj, lam, int(np.count_nonzero(a > lam)))


def project_l1_michelot(u, radius):
    """Project ``u`` onto the l1 ball by the pruned fixed-point iteration.

    Starting from the full-support mean excess the threshold is repeatedly
    recomputed over the entries still above it, discarding the rest for
    good; the iterates are nondecreasing and the loop stops exactly when
    the surviving set stops changing.  Same result contract as
    :func:`project_l1_sort`.
    """
    u = as_vector(u, "u")
    radius = check_positive(radius, "radius")
    a = np.abs(u)
    total = a.sum()
    if total <= radius:
        return L1Projection(u.copy(), 0.0, 0)
    # survivors are compacted to the buffer prefix each pass
    buf = a.copy()
    count = buf.size
    lam = (total - radius) / count
    trace = [lam]
    while True:
        active = buf[:count]
        keep = active > lam
        m = int(np.count_nonzero(keep))
        if m == count:
            break
        active[:m] = active[keep]
        count = m
        lam = (buf[:count].sum() - radius) / count
        trace.append(lam)
    lam = float(lam)
    proj = np.sign(u) * np.maximum(a - lam, 0.0)
    return L1Projection(proj, lam, count, tuple(trace))


def row_thresholds_michelot(A, s, radius):
    """Shrink thresholds and support counts for every row of ``A`` at once.

    Parameters
    ----------
    A : ndarray, shape (m, N)
        Row magnitudes (entries must be nonnegative).
    s : ndarray, shape (m,)
        Per-row sums of ``A`` (cached l1 norms).
    radius : float
        Common l1-ball radius, >= 0.

    Returns
    -------
    lam, n : ndarray
        Per-row threshold and support count.  Rows with ``s <= radius``
        project onto themselves and get ``(0, 0)``.  ``radius == 0`` gives
        the row maximum and the number of entries attaining it, which is
        the one-sided limit the root search needs at zero.

    Notes
    -----
    Runs the same fixed-point iteration as :func:`project_l1_michelot`
    vectorised across rows; converged rows recompute to the same value, so
    the loop can update all rows until every support count is stable.
    """
    m, N = A.shape
    lam = np.zeros(m)
    n = np.zeros(m, dtype=np.int64)
    out = s > radius
    if not np.any(out):
        return lam, n
    Ao = A[out]
    so = s[out]
    if radius == 0.0:
        lo = Ao.max(axis=1)
        no = (Ao >= lo[:, None]).sum(axis=1)
    else:
        lo = (so - radius) / N
        prev = np.full(Ao.shape[0], N, dtype=np.int64)
        while True:
            mask = Ao > lo[:, None]
            no = mask.sum(axis=1)
            if np.array_equal(no, prev):
                break
            # radius > 0 keeps every support non-empty, so no 0-division
            lo = (np.where(mask, Ao, 0.0).sum(axis=1) - radius) / no
            prev = no
    lam[out] = lo
    n[out] = no
    return lam, n


def row_thresholds_sort(A, s, radius):
    """Sort-based counterpart of :func:`row_thresholds_michelot`.

    Kept free of any fixed-point code so that reference computations built
    on it stay independent of the production path.
    """
    m, N = A.shape
    lam = np.zeros(m)
    n = np.zeros(m, dtype=np.int64)
    out = s > radius
    if not np.any(out):
        return lam, n
    Ao = A[out]
    if radius == 0.0:
        lo = Ao.max(axis=1)
        no = (Ao >= lo[:, None]).sum(axis=1)
    else:
        v = -np.sort(-Ao, axis=1)
        cand = (np.cumsum(v, axis=1) - radius) / np.arange(1, N + 1)
        hit = cand < v
        last = N - 1 - np.argmax(hit[:, ::-1], axis=1)
        lo = cand[np.arange(Ao.shape[0]), last]
        no = (Ao > lo[:, None]).sum(axis=1)
    lam[out] = lo
    n[out] = no
    return lam, n
