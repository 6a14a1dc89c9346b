"""Deterministic example sets with known spectral behaviour."""

import itertools

import numpy as np

from .errors import InputError
from .field import all_coords, coords_of
from .spectral import PointSet


def _require_odd(space, what):
    if space.p == 2:
        raise InputError(f"{what} requires odd p")


def paraboloid(space):
    """``{(x, x.x) : x in F_p^(d-1)}``; the last coordinate carries x.x."""
    _require_odd(space, "paraboloid")
    if space.d < 2:
        raise InputError("paraboloid requires d >= 2")
    coords = all_coords(space)
    free = coords[:, :-1]
    mask = coords[:, -1] == (free * free).sum(axis=1) % space.p
    return PointSet(space, mask)


def sphere(space, r):
    """``{x : x.x = r}``. r = 0 is allowed and gives the isotropic cone."""
    _require_odd(space, "sphere")
    if space.d < 2:
        raise InputError("sphere requires d >= 2")
    if not 0 <= r < space.p:
        raise InputError(f"radius residue {r} outside [0, {space.p - 1}]")
    coords = all_coords(space)
    return PointSet(space, (coords * coords).sum(axis=1) % space.p == r)


def rank_mod_p(vectors, p):
    """Rank over F_p by Gaussian elimination."""
    m = np.array(vectors, dtype=np.int64).reshape(len(vectors), -1) % p
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = m[rank] * pow(int(m[rank, c]), -1, p) % p
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] = (m[r] - m[r, c] * m[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def _to_coords(space, v):
    if isinstance(v, (int, np.integer)):
        return coords_of(space, v)
    v = tuple(int(c) for c in v)
    if len(v) != space.d:
        raise InputError(f"expected {space.d} coordinates, got {len(v)}")
    if any(not 0 <= c < space.p for c in v):
        raise InputError(f"coordinates {v} outside [0, {space.p - 1}]")
    return v


def affine_subspace(space, basis, offset=None):
    """``{offset + sum c_i b_i}`` for linearly independent b_i."""
    basis = [_to_coords(space, b) for b in basis]
    offset = (0,) * space.d if offset is None else _to_coords(space, offset)
    if basis and rank_mod_p(basis, space.p) < len(basis):
        raise InputError("basis vectors are linearly dependent over F_p")
    b = np.array(basis, dtype=np.int64).reshape(len(basis), space.d)
    combos = np.array(
        list(itertools.product(range(space.p), repeat=len(basis))), dtype=np.int64
    ).reshape(space.p ** len(basis), len(basis))
    pts = (combos @ b + np.array(offset)) % space.p
    weights = space.p ** np.arange(space.d)
    return PointSet.from_indices(space, pts @ weights)
