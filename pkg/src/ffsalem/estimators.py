"""scikit-learn compatible wrappers.

Each row of an input matrix ``X`` is the membership vector of one subset of
F_p^d, with columns in point-index order.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_frequency, check_membership_matrix, check_space
from .errors import InputError
from .explore import conjecture_explore
from .spectral import dft_batch, phi_from_coeffs


class _SpaceMixin:
    def _validate(self, X, reset):
        space = check_space(self.p, self.d)
        X = check_membership_matrix(X, space)
        if reset:
            self.space_ = space
            self.n_features_in_ = space.n
        return space, X


class FourierTransformer(_SpaceMixin, TransformerMixin, BaseEstimator):
    """Map each set to its Fourier coefficients.

    ``output`` selects ``"complex"`` coefficients, their ``"modulus"`` or the
    ``"power"`` |F(xi)|^2.
    """

    def __init__(self, p=3, d=2, output="modulus"):
        self.p = p
        self.d = d
        self.output = output

    def fit(self, X, y=None):
        if self.output not in ("complex", "modulus", "power"):
            raise InputError(f"unknown output {self.output!r}")
        self._validate(X, reset=True)
        return self

    def transform(self, X):
        check_is_fitted(self, "space_")
        space, X = self._validate(X, reset=False)
        coeffs = dft_batch(X, space)
        if self.output == "complex":
            return coeffs
        mod = np.abs(coeffs)
        return mod if self.output == "modulus" else mod ** 2


class PhiTransformer(_SpaceMixin, TransformerMixin, BaseEstimator):
    """Per-set features ``[phi, cardinality, phi / sqrt(cardinality)]``.

    The ratio column is NaN for empty sets.
    """

    def __init__(self, p=3, d=2):
        self.p = p
        self.d = d

    def fit(self, X, y=None):
        self._validate(X, reset=True)
        return self

    def transform(self, X):
        check_is_fitted(self, "space_")
        space, X = self._validate(X, reset=False)
        phi, _ = phi_from_coeffs(dft_batch(X, space))
        card = X.sum(axis=1).astype(float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(card > 0, phi / np.sqrt(card), np.nan)
        return np.column_stack([phi, card, ratio])

    def get_feature_names_out(self, input_features=None):
        return np.array(["phi", "cardinality", "salem_ratio"], dtype=object)


class ProbeCoefficient(_SpaceMixin, TransformerMixin, BaseEstimator):
    """Real and imaginary part of the coefficient at one frequency."""

    def __init__(self, p=3, d=2, xi=1):
        self.p = p
        self.d = d
        self.xi = xi

    def fit(self, X, y=None):
        space, _ = self._validate(X, reset=True)
        self.xi_ = check_frequency(space, self.xi)
        return self

    def transform(self, X):
        check_is_fitted(self, "xi_")
        space, X = self._validate(X, reset=False)
        c = dft_batch(X, space)[:, self.xi_]
        return np.column_stack([c.real, c.imag])


class WeakSalemClassifier(_SpaceMixin, ClassifierMixin, BaseEstimator):
    """Predict whether phi(E) <= C sqrt(#E ln n).

    Nothing is learned; ``fit`` only checks the inputs and records the classes.
    """

    def __init__(self, p=3, d=2, C=1.0):
        self.p = p
        self.d = d
        self.C = C

    def fit(self, X, y=None):
        if not self.C > 0:
            raise InputError(f"C must be positive, got {self.C}")
        self._validate(X, reset=True)
        self.classes_ = np.array([False, True])
        return self

    def decision_function(self, X):
        """``C sqrt(#E ln n) - phi(E)``; nonnegative means weak Salem."""
        check_is_fitted(self, "classes_")
        space, X = self._validate(X, reset=False)
        phi, _ = phi_from_coeffs(dft_batch(X, space))
        card = X.sum(axis=1)
        if (card < 1).any():
            raise InputError("weak Salem check needs nonempty sets")
        return self.C * np.sqrt(card * math.log(space.n)) - phi

    def predict(self, X):
        return self.decision_function(X) >= 0


class SalemRatioSearch(BaseEstimator):
    """Estimator wrapper around the conjecture explorer.

    After ``fit``: ``best_set_`` (PointSet), ``best_ratio_``,
    ``evaluations_`` and ``restarts_``.
    """

    def __init__(self, p=3, d=2, m=1, mode="exhaustive", budget=None, random_state=0):
        self.p = p
        self.d = d
        self.m = m
        self.mode = mode
        self.budget = budget
        self.random_state = random_state

    def fit(self, X=None, y=None):
        space = check_space(self.p, self.d)
        result = conjecture_explore(
            space, self.m, self.mode, self.budget, master_seed=self.random_state
        )
        self.space_ = space
        self.best_set_ = result.best_set
        self.best_ratio_ = result.best_ratio
        self.evaluations_ = result.evaluations
        self.restarts_ = result.restarts
        return self

    def transform(self, X=None):
        """The best membership vector as a single-row matrix."""
        check_is_fitted(self, "best_set_")
        return self.best_set_.membership[None, :].astype(np.int8)
