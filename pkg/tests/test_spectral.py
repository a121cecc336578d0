"""Tests for exact spectral gaps, Dirichlet forms and the finite-n gap inequalities."""

import math
from fractions import Fraction

import numpy as np
import pytest

from flipchains.chains import (build_kernel, kernel_flip, kernel_leaf_replanting,
                               kernel_leaf_translation, kernel_xtilde, make_chain)
from flipchains.errors import ConstantObservable, TooLarge
from flipchains.maps import radius
from flipchains.schaeffer import phi
from flipchains.spectral import (AGREEMENT, canonical_path_bound,
                                 comparison_constant, dirichlet_form,
                                 dirichlet_form_exact, gap_report,
                                 law_identity_check, observable_values,
                                 power_iteration_gap, rayleigh,
                                 relaxation_time, replant_flows,
                                 scaled_radius, scaling_slopes, spectral_gap,
                                 verify_inequalities)


def two_state(p):
    return np.array([[1 - p, p], [p, 1 - p]])


@pytest.mark.parametrize("p", [0.1, 0.25, 0.5])
def test_two_state_gap(p):
    result = gap_report(two_state(p), power=True)
    assert result.gap == pytest.approx(2 * p)
    assert result.power_gap == pytest.approx(2 * p, abs=1e-8)
    assert result.solvers_agree
    assert result.relaxation_time == pytest.approx(1 / (2 * p))


def test_single_state_gap_is_one():
    kernel = build_kernel(make_chain("translate", 1, 1))
    assert spectral_gap(kernel) == 1.0


def test_ceiling_applies_to_gaps():
    with pytest.raises(TooLarge):
        gap_report(np.eye(5), ceiling=4)


def test_relaxation_time_of_zero_gap():
    assert relaxation_time(0.0) == math.inf


@pytest.mark.parametrize("name", ["flip", "flip-pointed", "translate", "xtilde"])
def test_solvers_agree_on_small_chains(name):
    kernel = build_kernel(make_chain(name, 2, 2))
    result = gap_report(kernel, power=True)
    assert 0 < result.gap <= 2
    assert result.asymmetry < 1e-12
    assert result.residual < 1e-8
    assert result.top_deviation < 1e-8
    assert abs(result.power_gap - result.gap) <= AGREEMENT


def test_gap_report_is_deterministic():
    kernel = kernel_flip(2)
    assert gap_report(kernel, power=True).to_dict() == gap_report(kernel, power=True).to_dict()


def test_power_iteration_on_one_state():
    assert power_iteration_gap(np.eye(1)) == (1.0, True)


def test_dirichlet_forms_agree():
    kernel = kernel_flip(2)
    values = [radius(q) for q in kernel.space.states]
    exact = dirichlet_form_exact(kernel, values)
    assert isinstance(exact, Fraction)
    assert dirichlet_form(kernel, values) == pytest.approx(float(exact))
    assert dirichlet_form(kernel, "radius") == pytest.approx(float(exact))


def test_rayleigh_quotient_bounds_the_gap():
    kernel = kernel_flip(3)
    gap = spectral_gap(kernel)
    assert gap <= rayleigh(kernel, scaled_radius(3)) + AGREEMENT
    assert gap <= rayleigh(kernel, "root_degree") + AGREEMENT


def test_rayleigh_rejects_constants():
    kernel = kernel_flip(2)
    with pytest.raises(ConstantObservable):
        rayleigh(kernel, [1.0] * len(kernel))


def test_observable_values_check_length():
    kernel = kernel_flip(2)
    with pytest.raises(ValueError):
        observable_values(kernel, [1.0, 2.0])
    with pytest.raises(ValueError):
        observable_values(kernel, "weight")


def test_scaling_slopes():
    ns = [1, 2, 4, 8]
    slopes = scaling_slopes(ns, [n ** -2.0 for n in ns])
    assert slopes['overall'] == pytest.approx(-2.0)
    assert [p['slope'] for p in slopes['pairs']] == pytest.approx([-2.0] * 3)
    with pytest.raises(ValueError):
        scaling_slopes([2], [0.5])


@pytest.mark.parametrize("n", [2, 3])
def test_law_identity_around_the_point(n):
    report = law_identity_check(n)
    assert report.pointed_equal
    assert sum(report.pointed_far.values()) == 2 * 3 ** n * [1, 1, 2, 5][n]
    assert report.to_dict()['pointed']['equal']


def test_canonical_path_bound_gives_a_lower_bound():
    kernel = kernel_leaf_replanting(3, 1)
    bound = canonical_path_bound(kernel, replant_flows(3, 1))
    assert bound > 0
    assert float(1 / bound) <= spectral_gap(kernel) + AGREEMENT


def test_canonical_path_bound_rejects_non_moves():
    kernel = kernel_leaf_translation(3, 1)
    codes = kernel.space.codes
    far = [(a, b) for a in codes for b in codes if a != b and kernel.transition_prob(a, b) == 0]
    with pytest.raises(ValueError):
        canonical_path_bound(kernel, [(list(far[0]), Fraction(1))])


def test_comparison_constant():
    c = comparison_constant(2)
    assert c.constant > 0
    assert c.longest <= 6 * 2 + 17
    assert c.most_paths >= 1


@pytest.mark.parametrize("n", [1, 2])
def test_inequalities_hold(n):
    report = verify_inequalities(n)
    assert report.ok, [c.to_dict() for c in report.failed()]
    assert report.values['nu_pointed'] <= report.values['nu'] + AGREEMENT


@pytest.mark.slow
def test_inequalities_hold_at_three():
    report = verify_inequalities(3)
    assert report.ok, [c.to_dict() for c in report.failed()]


def test_comparison_can_be_left_out():
    report = verify_inequalities(2, compare=False)
    assert report.comparison is None
    assert "signed-tree gap <= A * pointed gap" not in [c.name for c in report.checks]
    assert report.ok


@pytest.mark.slow
def test_inequalities_hold_at_four_without_the_comparison():
    report = verify_inequalities(4, compare=False)
    assert report.ok, [c.to_dict() for c in report.failed()]


@pytest.mark.parametrize("observable", [
    lambda pq: radius(pq, pq.point),
    lambda pq: pq.quad.degree(pq.quad.root_vertex),
])
def test_signed_tree_forms_are_dominated_through_the_bijection(observable):
    n = 2
    pointed_k, xt_k = kernel_flip(n, True), kernel_xtilde(n)
    on_maps = [observable(pq) for pq in pointed_k.space.states]
    on_trees = [observable(phi(st)) for st in xt_k.space.states]
    assert sorted(on_maps) == sorted(on_trees)
    a = comparison_constant(n).constant
    assert dirichlet_form_exact(xt_k, on_trees) <= a * dirichlet_form_exact(pointed_k, on_maps)
    assert rayleigh(xt_k, on_trees) <= float(a) * rayleigh(pointed_k, on_maps) + AGREEMENT
