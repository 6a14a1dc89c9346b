"""The vector space F_p^d: parameters, point encoding and dot products.

Points are encoded as integers in little-endian base p, so that
``index = sum(coords[i] * p**i)`` and ``coords[0]`` is the fastest-varying
digit.
"""

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, ResourceError

DEFAULT_BUDGET = 2 ** 26
BUDGET_ENV = "FFSALEM_BUDGET"


def is_prime(p):
    """Deterministic trial division."""
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def point_budget():
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise InputError(f"{BUDGET_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class SpaceParams:
    """Ambient space F_p^d with ``n = p**d`` points."""

    p: int
    d: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, (int, np.integer)):
            raise InputError(f"p must be an integer, got {self.p!r}")
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise InputError(f"d must be an integer, got {self.d!r}")
        if not is_prime(int(self.p)):
            raise InputError(f"p={self.p} is not prime")
        if self.d < 1:
            raise InputError(f"d must be >= 1, got {self.d}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "d", int(self.d))
        budget = point_budget()
        if self.n > budget:
            raise ResourceError(
                f"space F_{self.p}^{self.d} has {self.n} points, budget is {budget} "
                f"(set {BUDGET_ENV} to raise it)"
            )

    @property
    def n(self):
        return self.p ** self.d

    @property
    def shape(self):
        """Array shape whose C-order flattening matches the index encoding."""
        return (self.p,) * self.d

    def __str__(self):
        return f"F_{self.p}^{self.d}"


def index_of(space, coords):
    coords = tuple(coords)
    if len(coords) != space.d:
        raise InputError(f"expected {space.d} coordinates, got {len(coords)}")
    index = 0
    for c in reversed(coords):
        if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
            raise InputError(f"coordinate {c!r} is not an integer")
        if not 0 <= c < space.p:
            raise InputError(f"coordinate {c} outside [0, {space.p - 1}]")
        index = index * space.p + int(c)
    return index


def coords_of(space, index):
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise InputError(f"index {index!r} is not an integer")
    if not 0 <= index < space.n:
        raise InputError(f"index {index} outside [0, {space.n - 1}]")
    index = int(index)
    coords = []
    for _ in range(space.d):
        index, r = divmod(index, space.p)
        coords.append(r)
    return tuple(coords)


def _as_coords(space, point):
    if isinstance(point, (int, np.integer)) and not isinstance(point, bool):
        return coords_of(space, point)
    coords = tuple(point)
    index_of(space, coords)  # validates arity and range
    return coords


def dot(space, x, xi):
    """``(x . xi) mod p``; points may be given as coordinate tuples or indices."""
    x = _as_coords(space, x)
    xi = _as_coords(space, xi)
    return sum(a * b for a, b in zip(x, xi)) % space.p


@lru_cache(maxsize=32)
def _all_coords_cached(p, d):
    n = p ** d
    idx = np.arange(n, dtype=np.int64)
    out = np.empty((n, d), dtype=np.int64)
    for i in range(d):
        idx, out[:, i] = np.divmod(idx, p)
    out.setflags(write=False)
    return out


def all_coords(space):
    """Read-only ``(n, d)`` array; row ``k`` holds ``coords_of(space, k)``."""
    return _all_coords_cached(space.p, space.d)


def dot_row(space, xi):
    """Length-n array of ``dot(x, xi)`` over every point x, in index order."""
    xi = np.asarray(_as_coords(space, xi), dtype=np.int64)
    return (all_coords(space) @ xi) % space.p


def add_points(space, x, y):
    x = _as_coords(space, x)
    y = _as_coords(space, y)
    return tuple((a + b) % space.p for a, b in zip(x, y))


def negate_index(space, index):
    """Index of ``-x`` for the point with the given index."""
    return index_of(space, tuple((-c) % space.p for c in coords_of(space, index)))
