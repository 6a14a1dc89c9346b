"""Closed-form tail bounds and thresholds for random subsets of F_p^d.

All logarithms are natural. Bounds larger than 1 are returned unchanged;
use :func:`is_vacuous` to detect them.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError
from .field import dot_row
from .spectral import _frequency_index, character_table, dft_tolerance


@dataclass(frozen=True)
class DeviationParams:
    """Inputs to the exponential tail bound for a sum of N variables with |X_j| <= 1.

    ``mu1`` is the sum of the means, ``mu2`` the sum of second moments.
    """

    N: int
    mu1: float
    mu2: float
    alpha: float
    lam: float

    def __post_init__(self):
        if self.N < 1:
            raise InputError(f"N must be >= 1, got {self.N}")
        if not 0.0 < self.lam < 1.0:
            raise InputError(f"lambda must lie in (0, 1), got {self.lam}")
        if not self.alpha > 0:
            raise InputError(f"alpha must be positive, got {self.alpha}")
        if self.mu2 < 0:
            raise InputError(f"mu2 must be nonnegative, got {self.mu2}")
        if abs(self.mu1) > self.N:
            raise InputError(f"|mu1| = {abs(self.mu1)} exceeds N = {self.N}")


def deviation_bound(params):
    """``exp(-lam*alpha + lam**2*mu2) * (exp(lam*mu1) + exp(-lam*mu1))``."""
    lam, mu1 = params.lam, params.mu1
    base = -lam * params.alpha + lam * lam * params.mu2
    return math.exp(base + lam * mu1) + math.exp(base - lam * mu1)


def is_vacuous(bound):
    return bound >= 1.0


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise InputError(f"delta must lie in (0, 1), got {delta}")


def _check_n(n):
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}")


def _check_eps(epsilon):
    if not epsilon > 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")


def proof_mu2(n, delta):
    """Second-moment sum of the real-part summands E(x)cos(2 pi x.xi / p)."""
    _check_delta(delta)
    return n * delta / 2.0


def proof_alpha(n, delta, epsilon):
    """Per-part deviation level ``sqrt(2(1+eps) n delta ln n)``."""
    _check_n(n)
    _check_delta(delta)
    _check_eps(epsilon)
    return math.sqrt(2.0 * (1.0 + epsilon) * n * delta * math.log(n))


def proof_lambda(n, delta, epsilon):
    return proof_alpha(n, delta, epsilon) / (n * delta)


@dataclass(frozen=True)
class TheoremParams:
    epsilon: float
    delta: float
    n: int

    def __post_init__(self):
        _check_n(self.n)
        _check_delta(self.delta)
        _check_eps(self.epsilon)

    @property
    def alpha(self):
        return proof_alpha(self.n, self.delta, self.epsilon)

    @property
    def lam(self):
        return proof_lambda(self.n, self.delta, self.epsilon)

    @property
    def lambda_valid(self):
        """False when lambda > 1, i.e. n is too small for the tail argument."""
        return self.lam <= 1.0

    def deviation_params(self):
        """Substituted lemma parameters; raises InputError when lambda >= 1."""
        return DeviationParams(
            N=self.n,
            mu1=0.0,
            mu2=proof_mu2(self.n, self.delta),
            alpha=self.alpha,
            lam=self.lam,
        )


def main_threshold(n, delta, epsilon):
    """``2 sqrt((1+eps) delta n ln n)``, the percolation-model cutoff for phi."""
    _check_n(n)
    _check_delta(delta)
    _check_eps(epsilon)
    return 2.0 * math.sqrt((1.0 + epsilon) * delta * n * math.log(n))


def hayes_threshold(m, n, epsilon):
    """``2 sqrt(2(1+eps) m ln n)``, the uniform m-subset cutoff for phi."""
    _check_n(n)
    _check_eps(epsilon)
    if m < 1:
        raise InputError(f"m must be >= 1, got {m}")
    if 2 * m > n:
        raise InputError(f"m = {m} exceeds n/2 = {n / 2}")
    return 2.0 * math.sqrt(2.0 * (1.0 + epsilon) * m * math.log(n))


def failure_prob_bound(n, epsilon):
    """``4 n**-eps``: union bound over nonzero frequencies."""
    _check_n(n)
    _check_eps(epsilon)
    return 4.0 * n ** (-epsilon)


def per_part_tail_bound(n, epsilon):
    """``2 n**-(1+eps)``, tail of |Re F(xi)| (or |Im F(xi)|) at level alpha."""
    _check_n(n)
    _check_eps(epsilon)
    return 2.0 * n ** (-(1.0 + epsilon))


def chebyshev_size_bound(n, delta):
    """Bound on P(|#E - n delta| >= n delta / 2) in the percolation model."""
    _check_delta(delta)
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    return 4.0 * (1.0 - delta) / (n * delta)


class IdentityResiduals(NamedTuple):
    cos_sum: float
    cos_sq: float
    sin_sum: float
    sin_sq: float
    tolerance: float
    # the square-sum identities need 2*xi != 0, which fails for p = 2
    square_identities_apply: bool

    @property
    def ok(self):
        return self.cos_sum <= self.tolerance and self.sin_sum <= self.tolerance and (
            not self.square_identities_apply
            or (self.cos_sq <= self.tolerance and self.sin_sq <= self.tolerance)
        )


def cosine_identity_check(space, xi):
    """Residuals of sum cos, sum cos^2 - n/2 and their sine analogues at ``xi``."""
    xi = _frequency_index(space, xi)
    if xi == 0:
        raise InputError("identities require a nonzero frequency")
    chars = character_table(space.p)[dot_row(space, xi)]
    c, s = chars.real, -chars.imag
    half = space.n / 2.0
    return IdentityResiduals(
        cos_sum=abs(float(np.sum(c))),
        cos_sq=abs(float(np.sum(c * c)) - half),
        sin_sum=abs(float(np.sum(s))),
        sin_sq=abs(float(np.sum(s * s)) - half),
        tolerance=dft_tolerance(space.n),
        square_identities_apply=space.p != 2,
    )
