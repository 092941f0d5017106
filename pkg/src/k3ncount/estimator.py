"""scikit-learn style front end.

Rows of ``X`` are queries ``(n, d, t)``. :class:`ComponentCounter` has
nothing to learn, so ``fit`` only validates the input; ``transform`` returns
one count per row.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .counting import LEVELS, cross_check
from .query import ModuliQuery

__all__ = ["ComponentCounter", "check_queries"]


def check_queries(X) -> list[ModuliQuery]:
    """Validate an ``(n_samples, 3)`` integer array and turn it into queries."""
    arr = check_array(X, dtype=None, ensure_2d=True)
    if arr.shape[1] != 3:
        raise ValueError(f"expected 3 columns (n, d, t), got {arr.shape[1]}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("queries must be integral")
    arr = arr.astype(np.int64)
    out = []
    for row in arr:
        n, d, t = (int(v) for v in row)
        out.append(ModuliQuery(n, d, t))
    return out


class ComponentCounter(TransformerMixin, BaseEstimator):
    """Number of isometry classes of marked lattices for each query row.

    Parameters
    ----------
    levels : str, default="A"
        Which counting routes to run, e.g. ``"AB"`` or ``"ABCD"``. The
        reported count is the first level in A, B, C, D order.
    strict : bool, default=True
        Raise :class:`~k3ncount.counting.LevelMismatch` when the requested
        levels disagree instead of returning the first level's count.
    """

    def __init__(self, levels: str = "A", strict: bool = True):
        self.levels = levels
        self.strict = strict

    def _levels(self) -> tuple[str, ...]:
        chosen = tuple(x for x in self.levels.upper() if x not in ", ")
        bad = set(chosen) - set(LEVELS)
        if not chosen or bad:
            raise ValueError(f"invalid levels {self.levels!r}")
        return chosen

    def fit(self, X, y=None):
        self._levels()
        check_queries(X)
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        levels = self._levels()
        counts = [cross_check(q, levels, strict=self.strict).count for q in check_queries(X)]
        return np.asarray(counts, dtype=np.int64).reshape(-1, 1)

    def predict(self, X):
        return self.transform(X).ravel()

    def reports(self, X):
        """Full count reports, one per row."""
        check_is_fitted(self, "n_features_in_")
        levels = self._levels()
        return [cross_check(q, levels, strict=self.strict) for q in check_queries(X)]

