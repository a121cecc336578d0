"""Tests for the bijection between signed labelled trees and pointed quadrangulations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flipchains.chains import make_rng
from flipchains.enumeration import signed_trees
from flipchains.errors import NegativeLabel
from flipchains.maps import canonical_code, decode, distances_from, far_set_size, radius
from flipchains.schaeffer import (SignedTree, corner_edge, corner_targets,
                                  label_distance_defects, origin_pointed_inverse,
                                  phi, phi_inverse, phi_origin_pointed)
from flipchains.trees import (contour, enumerate_trees, from_code, labels, non_negative,
                              random_tree)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_images_are_pointed_quadrangulations(n):
    for s in signed_trees(n):
        pq = phi(s)
        pq.validate()
        assert pq.point == n + 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_inverse_recovers_the_signed_tree(n):
    for s in signed_trees(n):
        assert phi_inverse(phi(s)).code == s.code


def test_map_survives_decoding_and_inverse(signed_trees_2):
    for s in signed_trees_2:
        code = canonical_code(phi(s))
        assert canonical_code(phi(phi_inverse(decode(code)))) == code


def test_images_are_distinct(signed_trees_2):
    codes = {canonical_code(phi(s)) for s in signed_trees_2}
    assert len(codes) == len(signed_trees_2) == 36


@pytest.mark.parametrize("n", [1, 2, 3])
def test_labels_are_distances_to_the_point(n):
    for s in signed_trees(n):
        assert label_distance_defects(s) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 12), st.integers(0, 2 ** 32 - 1), st.sampled_from([-1, 1]))
def test_bijection_on_random_larger_trees(n, seed, eps):
    s = SignedTree(random_tree(n, 3, make_rng(seed)), eps)
    pq = phi(s)
    pq.validate()
    assert phi_inverse(pq).code == s.code
    assert label_distance_defects(s) == []


def test_sign_picks_the_root_orientation():
    t = from_code("(+)(=)", 3)
    plus, minus = phi(SignedTree(t, 1)), phi(SignedTree(t, -1))
    dist = distances_from(plus.quad, plus.point)
    assert dist[plus.quad.origin(plus.quad.root)] < dist[plus.quad.head(plus.quad.root)]
    assert dist[minus.quad.origin(minus.quad.root)] > dist[minus.quad.head(minus.quad.root)]


def test_corner_targets_step_down_by_one():
    t = from_code("(+(+))(=)", 3)
    lab = labels(t)
    corners = [0, 1, 2, 1, 0, 3]
    for i, target in enumerate(corner_targets(t)):
        if target is None:
            assert lab[corners[i]] == min(lab)
        else:
            assert lab[corners[target]] == lab[corners[i]] - 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_corner_edges_join_corners_to_their_targets(n):
    for s in signed_trees(n):
        q = phi(s).quad
        corners = contour(s.tree).corners
        for i, target in enumerate(corner_targets(s.tree), start=1):
            h = corner_edge(i)
            assert h >> 1 == i - 1
            assert q.origin(h) == corners[i - 1]
            assert q.head(h) == (n + 1 if target is None else corners[target])


def test_origin_pointed_round_trip():
    for t in enumerate_trees(3, 3):
        if non_negative(t):
            q = phi_origin_pointed(t)
            q.validate()
            assert origin_pointed_inverse(q) == t


@pytest.mark.parametrize("n", [2, 3])
def test_origin_pointed_labels_give_the_radius_and_far_set(n):
    for t in enumerate_trees(n, 3):
        if non_negative(t):
            q = phi_origin_pointed(t)
            top = max(labels(t))
            assert radius(q) == top + 1
            assert far_set_size(q) == sum(1 for l in labels(t) if l >= top - 1)


def test_origin_pointed_rejects_negative_labels():
    with pytest.raises(NegativeLabel):
        phi_origin_pointed(from_code("(-)", 3))


def test_signed_tree_validation():
    with pytest.raises(ValueError):
        SignedTree(from_code("(+)", 3), 0)
    with pytest.raises(ValueError):
        SignedTree(from_code("(1)", 1), 1)
    assert SignedTree(from_code("(+)", 3), -1).code == "(+) -"


def test_phi_needs_an_edge():
    with pytest.raises(ValueError):
        phi(SignedTree(from_code("", 3), 1))
