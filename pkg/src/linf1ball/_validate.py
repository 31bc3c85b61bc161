"""Input validation helpers shared across the package."""

import numpy as np


def as_vector(u, name="u"):
    """Coerce to a 1-d float64 array, rejecting non-finite entries."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {u.shape}")
    if u.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(u)):
        raise ValueError(f"{name} contains non-finite entries")
    return u


def as_matrix(B, name="B"):
    """Coerce to a 2-d float64 array, rejecting non-finite entries."""
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {B.shape}")
    if B.shape[0] < 1 or B.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(B)):
        raise ValueError(f"{name} contains non-finite entries")
    return B


def check_positive(x, name):
    x = float(x)
    if not np.isfinite(x) or x <= 0:
        raise ValueError(f"{name} must be positive, got {x}")
    return x


def check_nonnegative(x, name):
    x = float(x)
    if not np.isfinite(x) or x < 0:
        raise ValueError(f"{name} must be nonnegative, got {x}")
    return x
