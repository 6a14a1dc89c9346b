import math

import pytest

from ffsalem import (
    InputError,
    ResourceError,
    SeedSpec,
    SpaceParams,
    conjecture_explore,
    salem_ratio,
    sample_uniform_m,
)

from oracles import brute_force_min_ratio


def test_singleton_ratio_one():
    res = conjecture_explore(SpaceParams(5, 2), 1)
    assert res.best_ratio == pytest.approx(1.0, abs=1e-12)
    assert res.best_set.indices().tolist() == [0]
    assert res.evaluations == 25


def test_f5_pairs_match_oracle():
    res = conjecture_explore(SpaceParams(5, 1), 2)
    combo, ratio = brute_force_min_ratio(5, 1, 2)
    assert res.evaluations == math.comb(5, 2) == 10
    assert tuple(res.best_set.indices()) == combo == (0, 1)
    # |1 + e^{-2 pi i / 5}| / sqrt 2 = 2 cos(pi / 5) / sqrt 2
    assert ratio == pytest.approx(2 * math.cos(math.pi / 5) / math.sqrt(2), abs=1e-12)
    assert abs(res.best_ratio - ratio) <= 1e-9


@pytest.mark.parametrize("p,d,m", [(3, 2, 2), (3, 2, 3), (3, 2, 4), (2, 4, 5), (7, 1, 3), (5, 2, 3)])
def test_exhaustive_matches_oracle(p, d, m):
    res = conjecture_explore(SpaceParams(p, d), m)
    combo, ratio = brute_force_min_ratio(p, d, m)
    assert tuple(res.best_set.indices()) == combo
    assert abs(res.best_ratio - ratio) <= 1e-9
    if m <= p ** d / 2:
        assert res.best_ratio >= 1 / math.sqrt(2) - 1e-6


def test_exhaustive_budget():
    with pytest.raises(ResourceError, match="C\\(49, 5\\) = 1906884"):
        conjecture_explore(SpaceParams(7, 2), 5, budget=10 ** 6)
    with pytest.raises(InputError):
        conjecture_explore(SpaceParams(7, 2), 0)
    with pytest.raises(InputError):
        conjecture_explore(SpaceParams(7, 2), 3, mode="annealing")
    with pytest.raises(InputError):
        conjecture_explore(SpaceParams(7, 2), 3, mode="local", budget=0)


@pytest.mark.parametrize("p,d,m", [(3, 2, 3), (5, 2, 3), (2, 4, 6), (7, 1, 3), (5, 2, 5)])
def test_local_never_beats_global(p, d, m):
    space = SpaceParams(p, d)
    exact = conjecture_explore(space, m)
    local = conjecture_explore(space, m, mode="local", budget=2000, master_seed=3)
    assert local.best_set.cardinality == m
    assert local.best_ratio >= exact.best_ratio - 1e-9
    assert local.evaluations <= 2000
    assert local.best_ratio == pytest.approx(salem_ratio(local.best_set))


def test_local_deterministic_and_budget_one():
    space = SpaceParams(7, 2)
    a = conjecture_explore(space, 7, mode="local", budget=3000, master_seed=11)
    b = conjecture_explore(space, 7, mode="local", budget=3000, master_seed=11)
    assert a == b
    one = conjecture_explore(space, 7, mode="local", budget=1, master_seed=11)
    assert one.evaluations == 1 and one.best_set.cardinality == 7


def test_local_improves_on_start():
    space = SpaceParams(11, 2)
    start = salem_ratio(sample_uniform_m(space, 11, SeedSpec(0, 0)))
    res = conjecture_explore(space, 11, mode="local", budget=20000, master_seed=0)
    assert res.best_ratio < start
    assert res.best_ratio >= 1 / math.sqrt(2)


def test_full_space_local():
    space = SpaceParams(3, 1)
    res = conjecture_explore(space, 3, mode="local", budget=10)
    assert res.best_ratio < 1e-9
