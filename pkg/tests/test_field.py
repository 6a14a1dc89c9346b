import itertools

import pytest

from ffsalem import InputError, ResourceError, SpaceParams, coords_of, dot, index_of
from ffsalem.field import add_points, all_coords, dot_row, is_prime


@pytest.mark.parametrize(
    "p,d,coords,index",
    [(5, 2, (0, 0), 0), (5, 2, (3, 2), 13), (3, 3, (2, 2, 2), 26), (2, 4, (1, 1, 0, 1), 11)],
)
def test_index_roundtrip_examples(p, d, coords, index):
    space = SpaceParams(p, d)
    assert index_of(space, coords) == index
    assert coords_of(space, index) == coords


@pytest.mark.parametrize("p,d", [(2, 1), (2, 10), (3, 4), (5, 3), (7, 2), (11, 3), (97, 2)])
def test_index_bijection(p, d):
    space = SpaceParams(p, d)
    assert space.n <= 10 ** 4
    for k in range(space.n):
        assert index_of(space, coords_of(space, k)) == k
    assert all_coords(space).shape == (space.n, d)


def test_space_validation():
    with pytest.raises(InputError):
        SpaceParams(4, 2)
    with pytest.raises(InputError):
        SpaceParams(1, 2)
    with pytest.raises(InputError):
        SpaceParams(5, 0)
    with pytest.raises(ResourceError):
        SpaceParams(2, 27)
    assert SpaceParams(2, 26).n == 2 ** 26


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("FFSALEM_BUDGET", "100")
    with pytest.raises(ResourceError):
        SpaceParams(11, 2)
    assert SpaceParams(7, 2).n == 49


def test_primality():
    primes = [k for k in range(60) if is_prime(k)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert not is_prime(7919 * 7907)


def test_bad_points():
    space = SpaceParams(5, 2)
    with pytest.raises(InputError):
        index_of(space, (5, 0))
    with pytest.raises(InputError):
        index_of(space, (1, 2, 3))
    with pytest.raises(InputError):
        coords_of(space, 25)
    with pytest.raises(InputError):
        coords_of(space, -1)


def test_dot_examples():
    assert dot(SpaceParams(5, 2), (1, 2), (3, 4)) == 1
    assert dot(SpaceParams(3, 1), (2,), (2,)) == 1
    space = SpaceParams(7, 3)
    for k in range(space.n):
        assert dot(space, k, (0, 0, 0)) == 0


@pytest.mark.parametrize("p,d", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)])
def test_dot_symmetric_bilinear(p, d):
    space = SpaceParams(p, d)
    pts = [coords_of(space, k) for k in range(space.n)]
    for x, xi in itertools.product(pts, pts):
        assert dot(space, x, xi) == dot(space, xi, x)
    for x, y, xi in itertools.product(pts, pts, pts):
        assert dot(space, add_points(space, x, y), xi) == (
            dot(space, x, xi) + dot(space, y, xi)
        ) % p


def test_dot_row_matches_dot():
    space = SpaceParams(5, 2)
    for xi in range(space.n):
        row = dot_row(space, xi)
        assert [dot(space, x, xi) for x in range(space.n)] == row.tolist()
