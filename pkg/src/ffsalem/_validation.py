"""Input checks shared by the estimator wrappers."""

import numpy as np
from sklearn.utils.validation import check_array

from .errors import InputError
from .field import SpaceParams
from .spectral import _frequency_index


def check_space(p, d):
    return SpaceParams(p, d)


def check_membership_matrix(X, space):
    """Validate a ``(n_samples, p**d)`` 0/1 matrix; returns a bool array."""
    X = check_array(X, dtype=None, ensure_2d=True)
    if X.shape[1] != space.n:
        raise InputError(
            f"X has {X.shape[1]} columns, expected p**d = {space.n} for {space}"
        )
    if X.dtype != bool:
        if not np.isin(X, (0, 1)).all():
            raise InputError("X must contain only 0/1 membership values")
        X = X.astype(bool)
    return X


def check_frequency(space, xi):
    return _frequency_index(space, xi)
