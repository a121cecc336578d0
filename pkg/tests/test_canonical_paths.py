"""Tests for the leaf-deletion hierarchy and the random replanting paths built on it."""

from fractions import Fraction

import pytest

from flipchains.canonical_paths import (HIERARCHY_CACHE, MIDDLE_COLOUR,
                                        _hierarchy, assemble, audit_congestion,
                                        congestion_bound, congestion_profile,
                                        constants, contract_translations,
                                        deletion_sequences, disassemble,
                                        expand_translations, fiber_map,
                                        find_replant, gamma_paths, hierarchy,
                                        marginals, mass, partial_sum,
                                        partial_sum_closed_form, partial_sums,
                                        path_defects, path_mass, sample_deletion,
                                        sample_gamma, translation_leg)
from flipchains.chains import make_rng
from flipchains.trees import count_trees, enumerate_trees, from_code, split_lr, star


def test_small_constants():
    assert constants(2) == [Fraction(0), Fraction(1)]
    assert constants(3) == [Fraction(0), Fraction(1, 2), Fraction(1)]


@pytest.mark.parametrize("n", range(2, 30))
def test_constants_are_symmetric(n):
    c = constants(n)
    assert c[0] == 0
    assert all(c[i] + c[n - 1 - i] == 1 for i in range(n))


@pytest.mark.parametrize("n, r", [(1, 2), (2, 3), (3, 2), (4, 1)])
def test_rows_sum_to_one(n, r):
    weights = hierarchy(n, r)
    for t in enumerate_trees(n, r):
        assert weights.row_sum(t) == 1


@pytest.mark.parametrize("n, r", [(2, 2), (3, 3), (4, 1)])
def test_columns_sum_to_the_size_ratio(n, r):
    expected = Fraction(count_trees(n, r), count_trees(n - 1, r))
    assert set(hierarchy(n, r).column_sums(n).values()) == {expected}


@pytest.mark.parametrize("n, r", [(3, 1), (3, 2)])
def test_partial_sums_have_product_form(n, r):
    sums = partial_sums(n, r)
    for i in range(n + 1):
        closed = partial_sum_closed_form(n, r, i)
        for t in enumerate_trees(n - i, r):
            assert sums[i][t.code] == closed


def test_single_partial_sum_agrees_with_batch():
    t = from_code("(1)", 1)
    assert partial_sum(3, 1, 2, t) == partial_sums(3, 1)[2][t.code]


def test_hierarchy_needs_positive_size():
    with pytest.raises(ValueError):
        hierarchy(0, 1)


def test_deletion_sequences_are_probability_measures():
    weights = hierarchy(3, 2)
    for t in enumerate_trees(3, 2):
        seqs = list(deletion_sequences(t, weights))
        assert all(seq.is_valid() for seq, _ in seqs)
        assert all(mass(seq, weights) == m for seq, m in seqs)
        assert sum(m for _, m in seqs) == 1
        assert all(sum(layer.values()) == 1 for layer in marginals(t, weights))


def test_path_measures_between_all_pairs():
    n, r = 2, 2
    weights = hierarchy(n, r)
    fibers = fiber_map(n, r)
    for x in fibers.trees:
        for y in fibers.trees:
            total = Fraction(0)
            for path, m in gamma_paths(x, y, weights, fibers):
                total += m
                assert len(path) == 2 * n
                assert path_defects(path, x, y, fibers) == []
                assert path_mass(path, weights) == m
                assert disassemble(path) == (path.r1, path.r2, path.l1, path.l2)
                for inner in path.trees[1:-1]:
                    assert split_lr(inner)[2] == MIDDLE_COLOUR
            assert total == 1


def test_sampled_paths_are_well_formed(rng):
    n, r = 4, 2
    weights = hierarchy(n, r)
    fibers = fiber_map(n, r)
    trees = fibers.trees
    for k in range(20):
        x, y = trees[k % len(trees)], trees[(7 * k) % len(trees)]
        path = sample_gamma(x, y, weights, fibers, rng)
        assert path_defects(path, x, y, fibers) == []


def test_translation_expansion_contracts_back():
    weights = hierarchy(3, 1)
    fibers = fiber_map(3, 1)
    x, y = fibers.trees[0], fibers.trees[-1]
    for path, _ in gamma_paths(x, y, weights, fibers):
        assert contract_translations(expand_translations(path)) == list(path.trees)


def test_translation_leg_ends_with_the_colour():
    t = star(2, 1, 2)
    target = from_code("(1(2))", 2)
    leg = translation_leg(t, target)
    assert leg[-1].kind == "recolour"
    assert leg[-1].tree == target
    with pytest.raises(ValueError):
        translation_leg(t, from_code("(1)", 2))


def test_find_replant():
    t = star(2)
    assert find_replant(t, from_code("(1(1))", 1)) is not None
    assert find_replant(t, star(3)) is None


def test_fiber_map_lands_one_size_down():
    fibers = fiber_map(3, 2)
    for x in fibers.trees[:5]:
        for y in fibers.trees[:5]:
            assert fibers(x, y).n == 2
    assert sum(fibers.fiber_sizes().values()) == len(fibers.trees) ** 2


@pytest.mark.parametrize("n, r", [(4, 1), (3, 2), (3, 3)])
def test_every_fiber_is_small(n, r):
    fibers = fiber_map(n, r)
    assert max(fibers.fiber_sizes().values()) <= 8 * r
    x, y = fibers.trees[1], fibers.trees[-2]
    assert fibers(x, y) == fibers(y, x)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_congestion_stays_under_its_bound(n):
    bound = congestion_bound(n, 1)
    for i in range(2 * n + 1):
        worst, code = audit_congestion(n, 1, i)
        assert worst <= bound
        assert code in congestion_profile(n, 1, i)


def test_congestion_at_the_endpoints():
    profile = congestion_profile(2, 2, 0)
    assert set(profile.values()) == {Fraction(count_trees(2, 2))}


def test_sampled_deletions_have_positive_mass():
    weights = hierarchy(4, 2)
    for t in list(enumerate_trees(4, 2))[::7]:
        seq = sample_deletion(t, weights, make_rng(4))
        assert seq.is_valid()
        assert seq.start == t
        assert mass(seq, weights) > 0
        assert sample_deletion(t, weights, make_rng(4)) == seq


@pytest.mark.parametrize("n, r", [(2, 2), (3, 1)])
def test_disassembly_inverts_assembly(n, r):
    weights = hierarchy(n, r)
    fibers = fiber_map(n, r)
    x, y = fibers.trees[0], fibers.trees[-1]
    for path, _ in gamma_paths(x, y, weights, fibers):
        parts = disassemble(path)
        assert [len(part) for part in parts] == [n + 1, n + 1, n, n]
        assert all(part.is_valid() for part in parts)
        assert assemble(*parts) == path


def test_hierarchy_cache_is_bounded():
    assert hierarchy(3, 2) is hierarchy(3, 2)
    for n in range(1, 2 * HIERARCHY_CACHE + 1):
        hierarchy(n, 1)
    assert _hierarchy.cache_info().currsize <= HIERARCHY_CACHE
