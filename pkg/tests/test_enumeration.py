"""Tests for enumerated state spaces and their sizes."""

import pytest

from flipchains.enumeration import (count_pointed, count_quadrangulations,
                                    pointed_space, quad_space, signed_space,
                                    space_for, tree_space)
from flipchains.errors import TooLarge


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 9), (3, 54), (4, 378)])
def test_rooted_quadrangulation_counts(n, expected):
    assert count_quadrangulations(n) == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pointed_maps_are_n_plus_two_times_rooted_maps(n):
    pointed = pointed_space(n)
    quads = quad_space(n)
    assert len(pointed) == count_pointed(n)
    assert len(set(pointed.codes)) == len(pointed)
    assert len(quads) == count_quadrangulations(n)
    assert len(pointed) == (n + 2) * len(quads)


@pytest.mark.slow
def test_rooted_maps_at_four():
    assert len(quad_space(4)) == 378


def test_spaces_index_their_codes():
    space = signed_space(2)
    assert len(space) == 36
    for i, code in enumerate(space.codes):
        assert space.index[code] == i
        assert code in space


def test_quad_space_is_sorted():
    space = quad_space(2)
    assert space.codes == sorted(space.codes)


@pytest.mark.parametrize("kind, n, r, expected", [
    ("trees", 0, 1, 1),
    ("trees", 3, 2, 40),
    ("labelled", 3, 1, 135),
    ("signed", 1, 3, 6),
    ("quad", 2, 3, 9),
    ("quad-pointed", 2, 3, 36),
])
def test_space_for(kind, n, r, expected):
    assert len(space_for(kind, n, r)) == expected


def test_unknown_space():
    with pytest.raises(ValueError):
        space_for("maps", 2)


def test_ceiling_is_enforced():
    with pytest.raises(TooLarge):
        tree_space(6, 3, ceiling=100)
    with pytest.raises(TooLarge):
        pointed_space(3, ceiling=10)
