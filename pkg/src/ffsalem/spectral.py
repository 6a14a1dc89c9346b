"""Fourier analysis of functions and subsets of F_p^d.

The transform uses the convention

    F(xi) = sum_x f(x) * exp(-2*pi*i * (x . xi) / p)

and is evaluated with the row-column method: one length-p transform along
each of the d coordinate axes. Each length-p line is summed naively in a
fixed order, so results do not depend on batch size or worker layout.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InputError
from .field import SpaceParams, all_coords, coords_of, dot_row, index_of


def dft_tolerance(n, cardinality=1):
    """Absolute per-coefficient tolerance used for equality checks."""
    return 1e-7 * math.sqrt(n) * math.sqrt(max(1, cardinality))


@lru_cache(maxsize=64)
def _character_table_cached(p):
    table = np.empty(p, dtype=np.complex128)
    for t in range(p):
        # fold into [-p/2, p/2] so the angle stays small
        s = t if 2 * t <= p else t - p
        if 2 * t == p:
            table[t] = -1.0
            continue
        angle = 2.0 * math.pi * s / p
        table[t] = complex(math.cos(angle), -math.sin(angle))
    table.setflags(write=False)
    return table


def character_table(p):
    """``table[t] = exp(-2*pi*i*t/p)`` for t in 0..p-1."""
    return _character_table_cached(int(p))


def character(p, t):
    if not 0 <= t < p:
        raise InputError(f"residue {t} outside [0, {p - 1}]")
    return complex(character_table(p)[t])


@lru_cache(maxsize=64)
def _line_matrix(p):
    k = np.arange(p)
    w = character_table(p)[np.outer(k, k) % p]
    w.setflags(write=False)
    return w


class PointSet:
    """A subset of F_p^d stored as a dense boolean membership array."""

    def __init__(self, space, membership):
        membership = np.asarray(membership)
        if membership.shape != (space.n,):
            raise InputError(
                f"membership must have shape ({space.n},), got {membership.shape}"
            )
        if membership.dtype != bool:
            if not np.isin(membership, (0, 1)).all():
                raise InputError("membership entries must be 0/1 or boolean")
            membership = membership.astype(bool)
        else:
            membership = membership.copy()
        membership.setflags(write=False)
        self.space = space
        self.membership = membership
        self.cardinality = int(np.count_nonzero(membership))

    @classmethod
    def from_indices(cls, space, indices, allow_duplicates=False):
        idx = np.asarray(list(indices), dtype=np.int64).reshape(-1)
        if idx.size and (idx.min() < 0 or idx.max() >= space.n):
            raise InputError(f"point indices must lie in [0, {space.n - 1}]")
        if not allow_duplicates and np.unique(idx).size != idx.size:
            raise InputError("duplicate point indices")
        mask = np.zeros(space.n, dtype=bool)
        mask[idx] = True
        return cls(space, mask)

    @classmethod
    def from_coords(cls, space, points):
        return cls.from_indices(space, [index_of(space, c) for c in points])

    @classmethod
    def empty(cls, space):
        return cls(space, np.zeros(space.n, dtype=bool))

    @classmethod
    def full(cls, space):
        return cls(space, np.ones(space.n, dtype=bool))

    def indices(self):
        return np.flatnonzero(self.membership)

    def points(self):
        return [coords_of(self.space, int(i)) for i in self.indices()]

    def translate(self, offset):
        """The set ``E + offset``."""
        if isinstance(offset, (int, np.integer)):
            offset = coords_of(self.space, offset)
        shift = np.asarray(offset, dtype=np.int64)
        if shift.shape != (self.space.d,):
            raise InputError(f"offset must have {self.space.d} coordinates")
        pts = (all_coords(self.space)[self.indices()] + shift) % self.space.p
        weights = self.space.p ** np.arange(self.space.d)
        return PointSet.from_indices(self.space, pts @ weights)

    def __len__(self):
        return self.cardinality

    def __contains__(self, point):
        if not isinstance(point, (int, np.integer)):
            point = index_of(self.space, point)
        return bool(self.membership[point])

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.space == other.space and np.array_equal(
            self.membership, other.membership
        )

    def __hash__(self):
        return hash((self.space, self.membership.tobytes()))

    def __repr__(self):
        return f"PointSet({self.space}, cardinality={self.cardinality})"


@dataclass(frozen=True)
class Spectrum:
    space: SpaceParams
    coeffs: np.ndarray = field(repr=False)

    def __getitem__(self, xi):
        if not isinstance(xi, (int, np.integer)):
            xi = index_of(self.space, xi)
        return complex(self.coeffs[xi])

    @property
    def moduli(self):
        return np.abs(self.coeffs)


@dataclass(frozen=True)
class PhiResult:
    phi: float
    argmax_xi: int
    cardinality: int


def _row_column(batch, space):
    """Transform each row of a ``(B, n)`` complex array; returns a new array."""
    p, d = space.p, space.d
    w = _line_matrix(p)
    a = np.asarray(batch, dtype=np.complex128).reshape((-1,) + space.shape)
    for axis in range(1, d + 1):
        a = np.moveaxis(a, axis, -1)
        out = np.zeros_like(a)
        for t in range(p):
            out += a[..., t : t + 1] * w[t]
        a = np.moveaxis(out, -1, axis)
    return np.ascontiguousarray(a).reshape(-1, space.n)


def dft_full(f, space):
    """Full spectrum of ``f`` (length-n array, or a PointSet)."""
    if isinstance(f, PointSet):
        f = f.membership
    f = np.asarray(f)
    if f.shape != (space.n,):
        raise InputError(f"input must have length {space.n}, got shape {f.shape}")
    coeffs = _row_column(f[None, :], space)[0]
    coeffs.setflags(write=False)
    return Spectrum(space, coeffs)


def dft_batch(rows, space):
    """Spectra of every row of a ``(B, n)`` array, as a ``(B, n)`` array."""
    rows = np.asarray(rows)
    if rows.ndim != 2 or rows.shape[1] != space.n:
        raise InputError(f"expected shape (B, {space.n}), got {rows.shape}")
    return _row_column(rows, space)


def _frequency_index(space, xi):
    if isinstance(xi, (int, np.integer)) and not isinstance(xi, bool):
        if not 0 <= xi < space.n:
            raise InputError(f"frequency index {xi} outside [0, {space.n - 1}]")
        return int(xi)
    return index_of(space, xi)


def dft_single(E, xi):
    """Direct character sum of E at one frequency."""
    xi = _frequency_index(E.space, xi)
    if E.cardinality == 0:
        return 0j
    dots = dot_row(E.space, xi)[E.membership]
    return complex(character_table(E.space.p)[dots].sum())


def probe_values(rows, space, xi):
    """Coefficient at frequency ``xi`` for each row of a ``(B, n)`` 0/1 array."""
    xi = _frequency_index(space, xi)
    chars = character_table(space.p)[dot_row(space, xi)]
    return np.asarray(rows, dtype=np.float64) @ chars


def phi_from_coeffs(coeffs):
    """``(max |c|, argmax)`` over nonzero frequencies; rows if 2-D."""
    mod = np.abs(np.asarray(coeffs)[..., 1:])
    arg = np.argmax(mod, axis=-1)
    return np.take_along_axis(mod, arg[..., None], axis=-1)[..., 0], arg + 1


def phi(E):
    """Largest Fourier coefficient modulus over nonzero frequencies.

    Exact ties go to the smallest frequency index.
    """
    if E.space.n < 2:
        raise InputError("phi needs at least one nonzero frequency")
    spec = dft_full(E.membership, E.space)
    value, arg = phi_from_coeffs(spec.coeffs)
    return PhiResult(float(value), int(arg), E.cardinality)


def salem_ratio(E):
    if E.cardinality < 1:
        raise InputError("salem_ratio is undefined for the empty set")
    return phi(E).phi / math.sqrt(E.cardinality)


def plancherel_residual(E):
    n = E.space.n
    energy = float(np.sum(np.abs(dft_full(E.membership, E.space).coeffs) ** 2))
    expected = n * E.cardinality
    return abs(energy - expected) / max(1, expected)


def weak_salem_check(E, C):
    """True iff phi(E) <= C * sqrt(#E * ln n) (natural log)."""
    if C <= 0:
        raise InputError(f"C must be positive, got {C}")
    if E.cardinality < 1:
        raise InputError("weak_salem_check needs a nonempty set")
    return phi(E).phi <= C * math.sqrt(E.cardinality * math.log(E.space.n))
