"""Method dispatch for the projection solvers."""

from .baselines import SteffensenOptions, grf_project, srf_project
from .oracle import bisect_project
from .projection import SolverOptions, newton_project

__all__ = ["METHODS", "get_projector", "project"]

METHODS = ("newton", "grf", "srf")


def get_projector(method, tolerance=1e-12, max_iter=100,
                  use_pruning=None, use_initial_point=None):
    """Bind a method name and solver settings into a ``(B, tau)`` callable.

    ``method`` is one of ``newton``, ``grf``, ``srf``, or ``bisect`` (the
    slow reference, intended for debugging).  The pruning and initial-point
    toggles default to the method's own convention (on for ``newton`` and
    ``srf``, off for ``grf``); pass an explicit bool to ablate.
    """
    if method in ("newton", "srf"):
        prune = True if use_pruning is None else use_pruning
        ini = True if use_initial_point is None else use_initial_point
    else:
        prune = False if use_pruning is None else use_pruning
        ini = False if use_initial_point is None else use_initial_point
    if method == "newton":
        opts = SolverOptions(tolerance=tolerance, max_iter=max_iter,
                             use_pruning=prune, use_initial_point=ini)
        return lambda B, tau: newton_project(B, tau, opts)
    if method == "grf":
        opts = SolverOptions(tolerance=tolerance, max_iter=max_iter,
                             use_pruning=prune, use_initial_point=ini)
        return lambda B, tau: grf_project(B, tau, opts)
    if method == "srf":
        opts = SteffensenOptions(tolerance=tolerance, max_iter=max_iter,
                                 use_pruning=prune, use_initial_point=ini)
        return lambda B, tau: srf_project(B, tau, opts)
    if method == "bisect":
        return lambda B, tau: bisect_project(B, tau)
    raise ValueError(f"unknown method {method!r}; expected one of "
                     f"{METHODS + ('bisect',)}")


def project(B, tau, method="newton", **kwargs):
    """Project ``B`` onto the l_inf,1 ball of radius ``tau``.

    Convenience wrapper over :func:`get_projector`; returns the full
    result object with diagnostics.
    """
    return get_projector(method, **kwargs)(B, tau)
