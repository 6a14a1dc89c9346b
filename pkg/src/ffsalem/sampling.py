"""Random subsets of F_p^d under the percolation and uniform m-subset models.

Randomness comes from numpy's Philox counter-based generator, keyed by the
pair ``(master_seed, stream_id)``. Each key gives its own stream, so trials
can run in any order or on any worker and still reproduce bit for bit.

Draw-count contract:

* ``sample_bernoulli`` draws one ``Generator.random`` double per point,
  in index order, and includes point k iff ``u[k] < delta``.
* ``sample_uniform_m`` draws a single ``Generator.integers(arange(m), n)``
  vector of m swap targets, then runs a partial Fisher-Yates shuffle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .spectral import PointSet

_U64 = 2 ** 64


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise InputError(f"{name} must be an integer, got {v!r}")
            if not 0 <= v < _U64:
                raise InputError(f"{name} must fit in an unsigned 64-bit integer")


def make_rng(seed):
    key = np.array([seed.master_seed, seed.stream_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise InputError(f"delta must lie in (0, 1), got {delta}")


def _check_m(space, m):
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise InputError(f"m must be an integer, got {m!r}")
    if not 0 <= m <= space.n:
        raise InputError(f"m must lie in [0, {space.n}], got {m}")


def _bernoulli_mask(rng, n, delta):
    return rng.random(n) < delta


def _uniform_mask(rng, n, m):
    mask = np.zeros(n, dtype=bool)
    if m == 0:
        return mask
    targets = rng.integers(np.arange(m), n)
    perm = np.arange(n)
    for i, j in enumerate(targets):
        perm[i], perm[j] = perm[j], perm[i]
    mask[perm[:m]] = True
    return mask


def sample_bernoulli(space, delta, seed):
    """Include each point independently with probability ``delta``."""
    _check_delta(delta)
    return PointSet(space, _bernoulli_mask(make_rng(seed), space.n, delta))


def sample_uniform_m(space, m, seed):
    """A uniformly random m-element subset."""
    _check_m(space, m)
    return PointSet(space, _uniform_mask(make_rng(seed), space.n, m))


def bernoulli_rows(space, delta, master_seed, stream_ids):
    """Membership rows ``(len(stream_ids), n)``; row k matches
    ``sample_bernoulli(space, delta, SeedSpec(master_seed, stream_ids[k]))``."""
    _check_delta(delta)
    rows = np.empty((len(stream_ids), space.n), dtype=bool)
    for k, sid in enumerate(stream_ids):
        rng = make_rng(SeedSpec(master_seed, int(sid)))
        rows[k] = _bernoulli_mask(rng, space.n, delta)
    return rows


def uniform_rows(space, m, master_seed, stream_ids):
    _check_m(space, m)
    rows = np.empty((len(stream_ids), space.n), dtype=bool)
    for k, sid in enumerate(stream_ids):
        rng = make_rng(SeedSpec(master_seed, int(sid)))
        rows[k] = _uniform_mask(rng, space.n, m)
    return rows
