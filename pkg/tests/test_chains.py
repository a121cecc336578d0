"""Tests for chain kernels, samplers and simulation."""

from fractions import Fraction

import numpy as np
import pytest

from flipchains.chains import (CHAINS, build_kernel, forgetful_defects,
                               kernel_flip, kernel_leaf_translation,
                               kernel_xtilde, make_chain, make_rng,
                               observables_for, simulate, split_rngs,
                               star_path_replanting, star_path_translation,
                               start_state, state_space, trajectory)
from flipchains.maps import canonical_code
from flipchains.schaeffer import SignedTree
from flipchains.trees import enumerate_trees, star


@pytest.mark.parametrize("name", CHAINS)
def test_kernels_are_stochastic_and_symmetric(name):
    kernel = build_kernel(make_chain(name, 2, 2))
    assert kernel.is_stochastic()
    assert kernel.asymmetric_pairs() == []
    assert kernel.communicating_classes() == 1


@pytest.mark.parametrize("n", [1, 2])
def test_flip_kernel_entries_are_bounded(n):
    kernel = kernel_flip(n)
    low, high = Fraction(1, 6 * n), Fraction(2, 3 * n)
    assert all(low <= p <= high for _, _, p in kernel.off_diagonal())
    assert all(h >= Fraction(1, 3) for h in kernel.holding())


def test_threaded_kernel_matches_serial():
    chain = make_chain("xtilde", 2)
    assert build_kernel(chain, threads=3).rows == build_kernel(chain).rows


def test_translation_chain_on_a_single_tree():
    kernel = build_kernel(make_chain("translate", 1, 1))
    assert len(kernel) == 1
    assert kernel.transition_prob("(1)", "(1)") == 1


def test_state_space_sizes():
    assert len(state_space(make_chain("flip", 2))) == 9
    assert len(state_space(make_chain("flip-pointed", 2))) == 36
    assert len(state_space(make_chain("xtilde", 2))) == 36
    assert len(state_space(make_chain("replant", 3, 1))) == 5


def test_make_chain_rejects_bad_input():
    with pytest.raises(ValueError):
        make_chain("shuffle", 2)
    with pytest.raises(ValueError):
        make_chain("flip", 0)


@pytest.mark.parametrize("name", CHAINS)
def test_samples_are_kernel_moves(name):
    chain = make_chain(name, 2, 3)
    kernel = build_kernel(chain)
    state = start_state(chain)
    rng = make_rng(3)
    for _ in range(200):
        nxt = chain.sample(state, rng)
        assert kernel.transition_prob(chain.code(state), chain.code(nxt)) > 0
        state = nxt


def test_simulation_is_reproducible():
    chain = make_chain("flip", 4)
    a = simulate(chain, start_state(chain), 300, make_rng(11), seed=11)
    b = simulate(chain, start_state(chain), 300, make_rng(11), seed=11)
    assert a.to_dict() == b.to_dict()
    assert a.stats["radius"].count == 301


def test_simulation_counts_visits():
    chain = make_chain("translate", 3, 1)
    summary = simulate(chain, start_state(chain), 500, make_rng(0), count_visits=True)
    assert sum(summary.visits.values()) == 501
    assert set(summary.visits) <= {t.code for t in enumerate_trees(3, 1)}


def test_trajectory_rejects_unknown_observables():
    chain = make_chain("flip", 2)
    with pytest.raises(ValueError):
        next(trajectory(chain, start_state(chain), 5, make_rng(0), ["mass"]))


def test_split_rngs_are_independent():
    a, b = split_rngs(5, 2)
    assert not np.array_equal(a.random(4), b.random(4))


def test_observables_per_chain():
    assert "point_eccentricity" in observables_for("flip-pointed")
    assert "sign" in observables_for("xtilde")
    assert observables_for("replant") == ("height", "leaves")


@pytest.mark.parametrize("r", [1, 3])
def test_star_paths(r):
    goal = star(3, 1, r)
    for t in enumerate_trees(3, r):
        assert star_path_translation(t)[-1] == goal
        path = star_path_replanting(t)
        assert path[-1] == goal
        assert len(path) - 1 <= 3


def test_pointed_trajectory_projects_to_flip_steps():
    chain = make_chain("flip-pointed", 3)
    states = [s for _, s, _ in trajectory(chain, start_state(chain), 100, make_rng(2), [])]
    assert forgetful_defects(states) == []
    assert canonical_code(states[0]) == canonical_code(start_state(chain))


def test_translation_chain_holds_often_enough():
    r = 2
    kernel = kernel_leaf_translation(3, r)
    assert len(kernel) == 40
    assert min(kernel.holding()) >= Fraction(1, r + 2)


@pytest.mark.parametrize("n", [2, 3])
def test_signed_tree_chain_moves_trees_like_the_translation_chain(n):
    signed, plain = kernel_xtilde(n), kernel_leaf_translation(n, 3)
    slow = Fraction(n, n + 1)
    for t in enumerate_trees(n, 3):
        for eps in (-1, 1):
            here = SignedTree(t, eps).code
            assert signed.transition_prob(here, SignedTree(t, -eps).code) == Fraction(1, n + 1)
            for u in enumerate_trees(n, 3):
                if u != t:
                    there = SignedTree(u, eps).code
                    assert signed.transition_prob(here, there) == slow * plain.transition_prob(t.code, u.code)


def test_flip_chain_visits_small_maps_uniformly():
    chain = make_chain("flip", 2)
    steps = 60000
    summary = simulate(chain, start_state(chain), steps, make_rng(7), count_visits=True)
    assert len(summary.visits) == 9
    assert all(abs(c / (steps + 1) - 1 / 9) < 0.03 for c in summary.visits.values())
