"""Search for m-subsets of F_p^d with small phi(E) / sqrt(#E).

Exhaustive mode visits all m-subsets in ``itertools.combinations`` order,
i.e. lexicographic order of the sorted index tuples. The reported minimiser
is the first subset in that order whose ratio is within ``TIE_TOL`` of the
global minimum, so floating-point noise between truly equal ratios cannot
change the answer.

Local mode runs steepest descent over single member/non-member swaps from
seeded random starts, restarting on successive stream ids until the
evaluation budget is spent.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ResourceError
from .field import all_coords
from .sampling import SeedSpec, sample_uniform_m
from .spectral import (
    PointSet,
    character_table,
    dft_batch,
    dft_full,
    phi_from_coeffs,
    salem_ratio,
)

EXHAUSTIVE_BUDGET = 10 ** 7
LOCAL_BUDGET = 10 ** 5
TIE_TOL = 1e-9
_BATCH = 4096
# cap on complex entries materialised per block of swap candidates
_BLOCK_ENTRIES = 2 ** 21


@dataclass(frozen=True)
class SearchResult:
    best_set: PointSet
    best_ratio: float
    mode: str
    evaluations: int
    restarts: int = 0


def _check_m(space, m):
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise InputError(f"m must be an integer, got {m!r}")
    if not 1 <= m <= space.n:
        raise InputError(f"m must lie in [1, {space.n}], got {m}")


def _exhaustive(space, m, budget):
    total = math.comb(space.n, m)
    if total > budget:
        raise ResourceError(
            f"exhaustive search needs C({space.n}, {m}) = {total} evaluations, "
            f"budget is {budget}"
        )
    combos = itertools.combinations(range(space.n), m)
    root_m = math.sqrt(m)
    best_min = math.inf
    candidates = []  # (global position, ratio, combo) near each batch minimum
    pos = 0
    while True:
        block = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, _BATCH)),
            dtype=np.int64,
        ).reshape(-1, m)
        if block.shape[0] == 0:
            break
        rows = np.zeros((block.shape[0], space.n), dtype=bool)
        np.put_along_axis(rows, block, True, axis=1)
        ratio = phi_from_coeffs(dft_batch(rows, space))[0] / root_m
        lo = float(ratio.min())
        if lo <= best_min + TIE_TOL:
            for k in np.flatnonzero(ratio <= lo + TIE_TOL):
                candidates.append((pos + int(k), float(ratio[k]), block[k].copy()))
        best_min = min(best_min, lo)
        pos += block.shape[0]
    chosen = next(c for c in candidates if c[1] <= best_min + TIE_TOL)
    best = PointSet.from_indices(space, chosen[2])
    return SearchResult(best, salem_ratio(best), "exhaustive", total)


class _SwapSearch:
    """Steepest-descent state for one local search run."""

    def __init__(self, space, budget):
        self.space = space
        self.coords = all_coords(space)
        self.table = character_table(space.p)
        self.budget = budget
        self.evaluations = 0
        self.best_ratio = math.inf
        self.best_mask = None

    def _chars(self, idx):
        return self.table[(self.coords[idx] @ self.coords.T) % self.space.p]

    def record(self, ratio, mask):
        self.evaluations += 1
        if ratio < self.best_ratio - TIE_TOL:
            self.best_ratio = ratio
            self.best_mask = mask.copy()

    @property
    def exhausted(self):
        return self.evaluations >= self.budget

    def descend(self, mask, m):
        """Run steepest descent from ``mask``; returns when stuck or out of budget."""
        root_m = math.sqrt(m)
        spec = dft_full(mask, self.space).coeffs
        current = float(phi_from_coeffs(spec)[0]) / root_m
        self.record(current, mask)
        while not self.exhausted:
            members = np.flatnonzero(mask)
            others = np.flatnonzero(~mask)
            if others.size == 0:
                return
            step = max(1, _BLOCK_ENTRIES // self.space.n)
            best = (current - TIE_TOL, None, None)
            out_chars = self._chars(members)
            for a, out in enumerate(members):
                base = spec - out_chars[a]
                for s in range(0, others.size, step):
                    left = self.budget - self.evaluations
                    if left <= 0:
                        break
                    blk = others[s : s + min(step, left)]
                    ratios = phi_from_coeffs(base + self._chars(blk))[0] / root_m
                    k = int(np.argmin(ratios))
                    self.evaluations += blk.size
                    if ratios[k] < best[0]:
                        best = (float(ratios[k]), int(out), int(blk[k]))
                        if ratios[k] < self.best_ratio - TIE_TOL:
                            trial = mask.copy()
                            trial[out], trial[blk[k]] = False, True
                            self.best_ratio = float(ratios[k])
                            self.best_mask = trial
            if best[1] is None:
                return
            mask = mask.copy()
            mask[best[1]], mask[best[2]] = False, True
            spec = dft_full(mask, self.space).coeffs
            current = float(phi_from_coeffs(spec)[0]) / root_m


def _local(space, m, budget, master_seed):
    search = _SwapSearch(space, budget)
    restarts = 0
    while not search.exhausted:
        start = sample_uniform_m(space, m, SeedSpec(master_seed, restarts))
        search.descend(start.membership.copy(), m)
        restarts += 1
        if m == space.n:
            break
    best = PointSet(space, search.best_mask)
    return SearchResult(best, salem_ratio(best), "local", search.evaluations, restarts)


def conjecture_explore(space, m, mode="exhaustive", budget=None, master_seed=0):
    """Minimise phi(E) / sqrt(m) over m-subsets E."""
    _check_m(space, m)
    if mode == "exhaustive":
        budget = EXHAUSTIVE_BUDGET if budget is None else budget
        return _exhaustive(space, m, budget)
    if mode == "local":
        budget = LOCAL_BUDGET if budget is None else budget
        if budget < 1:
            raise InputError(f"local search budget must be >= 1, got {budget}")
        return _local(space, m, budget, master_seed)
    raise InputError(f"unknown search mode {mode!r}")
