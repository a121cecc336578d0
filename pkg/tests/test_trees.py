"""Tests for coloured plane trees, labels and leaf moves."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flipchains.chains import make_rng
from flipchains.enumeration import count_quadrangulations
from flipchains.errors import BadColour, BadCorner, MalformedCode, NegativeLabel, NotALeaf, NotAPeak
from flipchains.trees import (EQUAL, MINUS, PLUS, Direction, count_dyck_paths,
                              count_trees, corner_vertex, contour,
                              enumerate_trees, find_translation, from_code,
                              from_dyck, from_json, height, join_lr, labels,
                              leaf_corner, leaf_delete, leaf_deletions,
                              leaf_recolour, leaf_replant, leaf_translate,
                              leaves, non_negative, peak_shift, random_tree,
                              reroot_at_corner, reroot_max_label,
                              reroot_max_label_inverse, split_lr,
                              star, to_dyck, to_json)

random_trees = st.builds(
    lambda n, r, seed: random_tree(n, r, make_rng(seed)),
    st.integers(1, 8), st.sampled_from([1, 2, 3]), st.integers(0, 2 ** 32 - 1))


@pytest.mark.parametrize("n, r, expected", [(0, 1, 1), (3, 1, 5), (3, 3, 135), (4, 2, 224), (10, 1, 16796)])
def test_count_trees(n, r, expected):
    assert count_trees(n, r) == expected


@pytest.mark.parametrize("n", range(0, 9))
def test_catalan_matches_dyck_count(n):
    assert count_trees(n) == count_dyck_paths(n)


@pytest.mark.parametrize("n, r", [(0, 3), (1, 3), (3, 2), (4, 1), (3, 3)])
def test_enumeration_is_complete_and_sorted(n, r):
    trees = list(enumerate_trees(n, r))
    codes = [t.code for t in trees]
    assert len(trees) == count_trees(n, r)
    assert codes == sorted(set(codes))


def test_code_format():
    t = from_code("(+(=))(-)", 3)
    assert t.n == 3
    assert t.children[0] == (1, 3)
    assert t.colour[1:] == (PLUS, EQUAL, MINUS)
    assert labels(t) == (0, 1, 1, -1)


@pytest.mark.parametrize("code", ["(", "(+", ")(+)", "(+))", "(x)", "(4)"])
def test_malformed_codes(code):
    with pytest.raises(MalformedCode):
        from_code(code, 3)


@given(random_trees)
def test_code_round_trip(t):
    assert from_code(t.code, t.r) == t


@given(random_trees)
def test_json_round_trip(t):
    assert from_json(to_json(t)) == t


def test_random_tree_is_reproducible():
    assert random_tree(6, 3, make_rng(7)) == random_tree(6, 3, make_rng(7))


def test_random_tree_covers_small_space():
    rng = make_rng(0)
    seen = {random_tree(3, 1, rng).code for _ in range(400)}
    assert seen == {t.code for t in enumerate_trees(3, 1)}


def test_leaves_and_corners_of_a_star():
    s = star(3, 2, 3)
    assert leaves(s) == [1, 2, 3]
    assert [leaf_corner(s, v) for v in leaves(s)] == [2, 4, 6]
    assert contour(s).corners == (0, 1, 0, 2, 0, 3)
    assert height(s) == 1


def test_corner_vertex_range():
    s = star(2)
    assert corner_vertex(s, 1) == 0
    with pytest.raises(BadCorner):
        corner_vertex(s, 5)


def test_leaf_moves_reject_inner_vertices():
    t = from_code("(1(1))", 1)
    with pytest.raises(NotALeaf):
        leaf_translate(t, 1, Direction.RIGHT)
    with pytest.raises(BadColour):
        leaf_recolour(t, 2, 2)


@given(random_trees, st.sampled_from(list(Direction)))
def test_translation_is_undone_by_the_opposite_move(t, d):
    other = Direction.LEFT if d is Direction.RIGHT else Direction.RIGHT
    for v in leaves(t):
        moved = leaf_translate(t, v, d)
        if moved != t:
            assert leaf_translate(moved, v, other) == t
            assert moved.n == t.n


@given(random_trees, st.sampled_from(list(Direction)))
def test_translation_shifts_a_peak(t, d):
    for v in leaves(t):
        i = t.position[v] + 1
        assert to_dyck(leaf_translate(t, v, d)) == peak_shift(to_dyck(t), i, d)


def test_translation_at_the_ends_holds():
    s = star(2)
    assert leaf_translate(s, 2, Direction.RIGHT) is s
    assert leaf_translate(s, 1, Direction.LEFT) is s


def test_peak_shift_moves_a_peak_past_a_descent():
    before, after = "UDUUUDUUDDDUDD", "UDUUUUDUDDDUDD"
    assert peak_shift(before, 5, Direction.RIGHT) == after
    assert peak_shift(after, 6, Direction.LEFT) == before
    t = from_dyck(before)
    v = next(v for v in leaves(t) if t.position[v] == 4)
    assert to_dyck(leaf_translate(t, v, Direction.RIGHT)) == after


@settings(max_examples=50)
@given(random_trees)
def test_leaf_moves_change_the_height_by_at_most_one(t):
    h = height(t)
    for v in leaves(t):
        for d in Direction:
            assert abs(height(leaf_translate(t, v, d)) - h) <= 1
        for k in range(1, 2 * t.n):
            assert abs(height(leaf_replant(t, v, k, 1)) - h) <= 1


def test_peak_shift_rejects_non_peaks():
    with pytest.raises(NotAPeak):
        peak_shift("UUDD", 1, Direction.RIGHT)


def test_find_translation():
    t = from_code("(1)(1(1))", 1)
    moved = leaf_translate(t, 1, Direction.RIGHT)
    assert find_translation(t, moved) == (1, Direction.RIGHT)
    assert find_translation(t, t) is None


def test_replant_moves_a_leaf_anywhere():
    t = star(2, 1, 2)
    assert leaf_replant(t, 1, 2, 2).code == "(1(2))"
    assert leaf_replant(t, 1, 3, 2).code == "(1)(2)"
    with pytest.raises(BadCorner):
        leaf_replant(t, 1, 4, 1)


@given(random_trees)
def test_split_and_join_are_inverse(t):
    left, right, c = split_lr(t)
    assert left.n + right.n + 1 == t.n
    assert join_lr(left, right, c) == t


@given(random_trees)
def test_leaf_deletions_shrink_by_one(t):
    smaller = leaf_deletions(t)
    assert smaller
    assert all(s.n == t.n - 1 for s in smaller.values())
    assert leaf_delete(t, leaves(t)[0]).code in smaller


def test_dyck_conversion():
    t = from_dyck("UUDUDD")
    assert t.code == "(1(1)(1))"
    assert to_dyck(t) == "UUDUDD"


@given(random_trees)
def test_reroot_at_root_corner_is_identity(t):
    assert reroot_at_corner(t, 1) == t


def test_reroot_keeps_label_differences():
    t = from_code("(+(+))(-)", 3)
    moved = reroot_at_corner(t, 3)
    assert sorted(labels(moved)) == sorted(x - labels(t)[2] for x in labels(t))


def test_reroot_max_label_is_non_negative():
    for t in enumerate_trees(3, 3):
        if non_negative(t):
            out = reroot_max_label(t)
            assert out.n == t.n
            assert non_negative(out)
            assert labels(out)[0] == 0


def test_reroot_max_label_merges_mirror_images():
    merged = [from_code(code, 3) for code in ("(+)(=)", "(=)(+)", "(=(+))")]
    # each has a single maximum-label corner, so no tie-break can separate them
    assert all(labels(t).count(max(labels(t))) == 1 for t in merged)
    assert {reroot_max_label(t) for t in merged} == {from_code("(+(=))", 3)}


@pytest.mark.parametrize("n, images", [(2, 7), (3, 35), pytest.param(4, 215, marks=pytest.mark.slow)])
def test_reroot_max_label_misses_part_of_its_target(n, images):
    trees = [t for t in enumerate_trees(n, 3) if non_negative(t)]
    # non-negative trees are as many as the rooted maps they encode
    assert len(trees) == count_quadrangulations(n)
    assert len({reroot_max_label(t).code for t in trees}) == images


def root_is_the_last_zero(t):
    lab = labels(t)
    corner_labels = [lab[v] for v in contour(t).corners]
    j = corner_labels.index(max(lab))
    read = corner_labels[j:] + corner_labels[:j]
    return 0 not in read[(len(read) - j) % len(read) + 1:]


@pytest.mark.parametrize("n", [2, 3])
def test_reroot_max_label_inverse_where_it_exists(n):
    for t in enumerate_trees(n, 3):
        if non_negative(t):
            back = reroot_max_label_inverse(reroot_max_label(t))
            assert (back == t) == root_is_the_last_zero(t)


def test_reroot_max_label_rejects_negative_labels():
    with pytest.raises(NegativeLabel):
        reroot_max_label(from_code("(-)", 3))


def test_labels_need_labelled_trees():
    with pytest.raises(ValueError):
        labels(star(2, 1, 2))


@settings(max_examples=50)
@given(random_trees)
def test_recolour_keeps_shape(t):
    for v in leaves(t):
        for c in range(1, t.r + 1):
            assert to_dyck(leaf_recolour(t, v, c)) == to_dyck(t)
