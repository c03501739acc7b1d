import numpy as np
import pytest

from oracles import brute_weak_value
from wvsim.errors import DimMismatch, OrthogonalSelection, ZeroVector
from wvsim.qcore import L, R, arm_projector, basis_state, identity, make_state, uniform_state, Operator
from wvsim.tsvf import (
    TwoStateVector, alpha_beta_preselection, alpha_beta_tsv, arm_amplitudes, arm_weak_values,
    photon_count_rule_applies, postselect_probability, weak_value,
)


def random_tsv(rng, dim):
    while True:
        pre = make_state(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        post = make_state(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        try:
            return TwoStateVector(pre, post)
        except OrthogonalSelection:
            continue


def test_projector_weak_values_four_and_minus_three(tsv43):
    assert weak_value(tsv43, arm_projector(2, R)) == pytest.approx(4, abs=1e-12)
    assert weak_value(tsv43, arm_projector(2, L)) == pytest.approx(-3, abs=1e-12)


def test_identity_weak_value_is_one(rng, tsv43):
    assert weak_value(tsv43, identity(2)) == pytest.approx(1)
    for dim in range(2, 6):
        assert weak_value(random_tsv(rng, dim), identity(dim)) == pytest.approx(1, abs=1e-12)


def test_orthogonal_selection_rejected():
    with pytest.raises(OrthogonalSelection):
        TwoStateVector(make_state([1, -1]), make_state([1, 1]))


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        TwoStateVector(make_state([1, 1]), make_state([1, 1, 1]))
    with pytest.raises(DimMismatch):
        weak_value(alpha_beta_tsv(4, 3), identity(3))


def test_near_floor_weak_values_stay_finite():
    eps = 1e-9
    tsv = TwoStateVector(make_state([1 + eps, -1]), make_state([1, 1]))
    wv = arm_weak_values(tsv)
    assert np.all(np.isfinite(wv)) and abs(wv[0]) > 1e8


def test_weak_value_matches_brute_force(rng):
    for _ in range(100):
        dim = rng.integers(2, 9)
        tsv = random_tsv(rng, dim)
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        assert weak_value(tsv, Operator(a)) == pytest.approx(
            brute_weak_value(tsv.pre.amps, tsv.post.amps, a), rel=1e-10)


def test_arm_weak_values(tsv43):
    np.testing.assert_allclose(arm_weak_values(tsv43), [4, -3], atol=1e-12)
    sym = TwoStateVector(uniform_state(2), uniform_state(2))
    np.testing.assert_allclose(arm_weak_values(sym), [0.5, 0.5], atol=1e-15)


def test_alpha_six_beta_five():
    # direct evaluation: <Phi|Pi_R|Psi>/<Phi|Psi> = 6/(6-5), -5/(6-5)
    tsv = alpha_beta_tsv(6, 5)
    np.testing.assert_allclose(arm_weak_values(tsv), [6, -5], atol=1e-12)
    assert photon_count_rule_applies(6, 5)
    assert not photon_count_rule_applies(4j, 3)


def test_arm_amplitudes_sum_to_overlap(tsv43):
    assert arm_amplitudes(tsv43).sum() == pytest.approx(tsv43.overlap, abs=1e-15)


def test_postselect_probability():
    assert postselect_probability(alpha_beta_tsv(4, 3)) == pytest.approx(1 / 50, abs=1e-15)
    s = make_state([2, 1j])
    assert postselect_probability(TwoStateVector(s, s)) == pytest.approx(1)
    # |(6 - 5)/sqrt(2 * 61)|^2
    assert postselect_probability(alpha_beta_tsv(6, 5)) == pytest.approx(1 / 122, abs=1e-15)


def test_alpha_beta_preselection():
    np.testing.assert_allclose(alpha_beta_preselection(4, 3).amps, [0.8, -0.6])
    np.testing.assert_allclose(alpha_beta_preselection(1, 0).amps, basis_state(2, R).amps)
    np.testing.assert_allclose(alpha_beta_preselection(4j, 3j).amps, 1j * np.array([0.8, -0.6]))
    with pytest.raises(ZeroVector):
        alpha_beta_preselection(0, 0)


@pytest.mark.parametrize("dim", range(2, 9))
def test_completeness(rng, dim):
    for _ in range(150):
        assert arm_weak_values(random_tsv(rng, dim)).sum() == pytest.approx(1, abs=1e-10)


def test_linearity(rng):
    for _ in range(100):
        dim = rng.integers(2, 7)
        tsv = random_tsv(rng, dim)
        A = Operator(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
        B = Operator(rng.normal(size=(dim, dim)))
        a, b = complex(rng.normal(), rng.normal()), rng.normal()
        assert weak_value(tsv, a * A + b * B) == pytest.approx(
            a * weak_value(tsv, A) + b * weak_value(tsv, B), rel=1e-10, abs=1e-10)


def test_real_amplitudes_give_real_weak_values(rng):
    for _ in range(100):
        dim = rng.integers(2, 9)
        tsv = TwoStateVector(make_state(rng.normal(size=dim)), make_state(rng.normal(size=dim)), floor=1e-6)
        assert np.max(np.abs(arm_weak_values(tsv).imag)) <= 1e-12 * max(1, np.max(np.abs(arm_weak_values(tsv))))


def test_pre_equal_post_gives_expectation(rng):
    for _ in range(100):
        dim = rng.integers(2, 9)
        s = make_state(rng.normal(size=dim) + 1j * rng.normal(size=dim))
        tsv = TwoStateVector(s, s)
        np.testing.assert_allclose(arm_weak_values(tsv), np.abs(s.amps) ** 2, atol=1e-12)
