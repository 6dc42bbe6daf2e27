"""Input-validation helpers shared by the estimator classes."""

from __future__ import annotations

import numpy as np

from .errors import LengthMismatchError, NotFittedError, ShapeMismatchError


def as_float_matrix(X, n_features=None) -> np.ndarray:
    """Coerce X to a 2-D float64 array, optionally checking the column count."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-D matrix, got ndim={X.ndim}")
    if n_features is not None and X.shape[1] != n_features:
        raise ShapeMismatchError(
            f"expected {n_features} features, got {X.shape[1]}"
        )
    return X


def as_label_vector(y, n_rows=None) -> np.ndarray:
    """Coerce y to a 1-D int64 array of 0/1 labels."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ShapeMismatchError(f"labels must be 1-D, got ndim={y.ndim}")
    y = y.astype(np.int64)
    if y.size and not np.isin(y, (0, 1)).all():
        raise ShapeMismatchError("labels must be 0 or 1")
    if n_rows is not None and y.shape[0] != n_rows:
        raise LengthMismatchError(
            f"{n_rows} rows but {y.shape[0]} labels"
        )
    return y


def check_is_fitted(estimator, attribute: str) -> None:
    """Raise NotFittedError unless `attribute` exists and is not None."""
    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"{type(estimator).__name__} must be fitted before use"
        )
