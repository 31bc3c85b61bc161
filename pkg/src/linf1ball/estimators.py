"""Scikit-learn style wrappers around the projection and the MTL solver.

These make the algorithms compose with the wider ecosystem: the projection
is a stateless transformer usable inside a ``Pipeline``, and the
multi-task model follows the usual ``fit``/``predict``/``coef_``
conventions (``coef_`` has shape ``(n_targets, n_features)``).
"""

import numpy as np
from sklearn.base import BaseEstimator, MultiOutputMixin, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .api import METHODS, get_projector
from .mtl import MtlProblem, PgdOptions, pgd_solve
from .projection import linf1_norm

__all__ = ["Linf1BallProjection", "ProjectedMultiTaskLasso"]


def _check_method(method):
    if method not in METHODS + ("bisect",):
        raise ValueError(
            f"method must be one of {METHODS + ('bisect',)}, got {method!r}"
        )


class Linf1BallProjection(TransformerMixin, BaseEstimator):
    """Transformer projecting each input matrix onto an l_inf,1 ball.

    Exactly one of ``radius`` (absolute budget) and ``alpha`` (budget as a
    fraction of each input's own l_inf,1 norm) must be set.  The transform
    is stateless; ``fit`` only validates parameters and records the input
    width.

    Parameters
    ----------
    radius : float, optional
        Absolute ball radius, >= 0.
    alpha : float, optional
        Relative radius in (0, 1); the budget becomes
        ``alpha * ||X||_inf,1`` per transformed matrix.
    method : str
        One of ``newton``, ``grf``, ``srf``.
    """

    def __init__(self, radius=None, alpha=None, method="newton",
                 tolerance=1e-12, max_iter=100, use_pruning=None,
                 use_initial_point=None):
        self.radius = radius
        self.alpha = alpha
        self.method = method
        self.tolerance = tolerance
        self.max_iter = max_iter
        self.use_pruning = use_pruning
        self.use_initial_point = use_initial_point

    def _validate_params_(self):
        if (self.radius is None) == (self.alpha is None):
            raise ValueError("set exactly one of radius and alpha")
        if self.radius is not None and self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if self.alpha is not None and not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        _check_method(self.method)

    def fit(self, X, y=None):
        self._validate_params_()
        X = check_array(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        tau = self.radius if self.radius is not None \
            else self.alpha * linf1_norm(X)
        projector = get_projector(
            self.method, tolerance=self.tolerance, max_iter=self.max_iter,
            use_pruning=self.use_pruning,
            use_initial_point=self.use_initial_point,
        )
        return projector(X, tau).X


class ProjectedMultiTaskLasso(MultiOutputMixin, RegressorMixin, BaseEstimator):
    """Multi-task linear regression with a shared row-sparsity budget.

    Fits ``min 0.5 ||X W - Y||_F^2`` subject to the sum of row maxima of
    ``W`` not exceeding ``radius``, by projected gradient descent with the
    selected projection operator.

    Attributes
    ----------
    coef_ : ndarray of shape (n_targets, n_features)
    n_iter_ : int
    objective_trace_ : ndarray
    converged_ : bool
    """

    def __init__(self, radius=1.0, method="newton", step="armijo",
                 step_size=None, max_iter=500, tol=1e-9):
        self.radius = radius
        self.method = method
        self.step = step
        self.step_size = step_size
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        _check_method(self.method)
        X = check_array(X, dtype=np.float64)
        y = check_array(y, dtype=np.float64, ensure_2d=False)
        self._single_target_ = y.ndim == 1
        Y = y.reshape(-1, 1) if self._single_target_ else y
        if X.shape[0] != Y.shape[0]:
            raise ValueError(
                f"X has {X.shape[0]} samples but y has {Y.shape[0]}"
            )
        problem = MtlProblem(design=X, targets=Y, radius=self.radius)
        opts = PgdOptions(step=self.step, step_size=self.step_size,
                          max_iter=self.max_iter, tol=self.tol)
        result = pgd_solve(problem, get_projector(self.method), opts)
        self.coef_ = result.coefficients.T
        self.n_iter_ = result.iterations
        self.objective_trace_ = result.objective_trace
        self.converged_ = result.converged
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        pred = X @ self.coef_.T
        return pred.ravel() if self._single_target_ else pred
