from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from grcs import perm

perms = st.integers(0, 119).map(perm.unrank)


def test_compose_example():
    assert perm.compose((1, 0, 2, 3, 4), (0, 2, 1, 3, 4)) == (1, 2, 0, 3, 4)


def test_compose_identity_and_inverse():
    p = (3, 1, 4, 0, 2)
    assert perm.compose(perm.IDENTITY, p) == p
    assert perm.compose(p, perm.inverse(p)) == perm.IDENTITY


@pytest.mark.parametrize("p, expected", [
    ((0, 1, 2, 3, 4), (0, 1, 2, 3, 4)),
    ((1, 0, 2, 3, 4), (1, 0, 2, 3, 4)),
    ((1, 2, 3, 4, 0), (4, 0, 1, 2, 3)),
])
def test_inverse(p, expected):
    assert perm.inverse(p) == expected


def test_rank_extremes():
    assert perm.rank((0, 1, 2, 3, 4)) == 0
    assert perm.rank((4, 3, 2, 1, 0)) == 119


def test_rank_matches_lexicographic_enumeration():
    for i, p in enumerate(sorted(permutations(range(5)))):
        assert perm.rank(p) == i
        assert perm.unrank(i) == p


def test_round_trip_exhaustive():
    assert all(perm.unrank(perm.rank(p)) == p for p in permutations(range(5)))
    assert all(perm.rank(perm.unrank(i)) == i for i in range(120))
    assert len({perm.unrank(i) for i in range(120)}) == 120


@pytest.mark.parametrize("bad", [-1, 120, 1000])
def test_unrank_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        perm.unrank(bad)


def test_check_rejects_non_bijection():
    with pytest.raises(ValueError):
        perm.check((0, 0, 1, 2, 3))
    with pytest.raises(ValueError):
        perm.check((0, 1, 2, 3))


def test_tables_agree_with_composition():
    for i in range(120):
        assert perm.INV[i] == perm.rank(perm.inverse(perm.unrank(i)))
        for j in range(0, 120, 7):
            assert perm.MUL[i, j] == perm.rank(perm.compose(perm.unrank(i), perm.unrank(j)))


@settings(max_examples=10_000, deadline=None)
@given(perms, perms, perms)
def test_associativity(p, q, s):
    assert perm.compose(perm.compose(p, q), s) == perm.compose(p, perm.compose(q, s))
