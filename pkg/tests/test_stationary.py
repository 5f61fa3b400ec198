import random
from fractions import Fraction

import numpy as np
import pytest

from parrondo_ring.chain import Params, build_full_chain, build_reduced_chain
from parrondo_ring.stationary import (
    ReducibleChainError,
    check_detailed_balance,
    closed_form_n3,
    closed_form_n4,
    closed_form_n4_rho2_forms,
    lift_to_full,
    normalize_measure,
    solve_stationary,
    stationary_distribution,
)
from parrondo_ring.states import Symmetry

from helpers import TORAL, rational_params

UNIFORM = Params(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))


def test_uniform_coins_n3():
    chain = build_reduced_chain(3, Symmetry.CYCLIC)
    pi = stationary_distribution(chain, UNIFORM, exact=True)
    assert tuple(pi.weights) == (Fraction(1, 8), Fraction(3, 8), Fraction(3, 8), Fraction(1, 8))


def test_closed_form_n3_against_solver():
    rng = random.Random(31)
    chain = build_reduced_chain(3, Symmetry.CYCLIC)
    for _ in range(10):
        params = rational_params(rng)
        pi = stationary_distribution(chain, params, exact=True)
        assert tuple(pi.weights) == normalize_measure(closed_form_n3(params))


def test_closed_form_n4_against_solver():
    rng = random.Random(32)
    chain = build_reduced_chain(4, Symmetry.CYCLIC)
    for _ in range(10):
        params = rational_params(rng)
        pi = stationary_distribution(chain, params, exact=True)
        assert tuple(pi.weights) == normalize_measure(closed_form_n4(params))


def test_rho2_forms_agree():
    rng = random.Random(33)
    for _ in range(1000):
        params = rational_params(rng, den_max=30)
        a, b = closed_form_n4_rho2_forms(params)
        assert a == b


def test_uniform_measures():
    assert normalize_measure(closed_form_n3(UNIFORM)) == (
        Fraction(1, 8), Fraction(3, 8), Fraction(3, 8), Fraction(1, 8))
    assert normalize_measure(closed_form_n4(UNIFORM)) == (
        Fraction(1, 16), Fraction(4, 16), Fraction(4, 16),
        Fraction(2, 16), Fraction(4, 16), Fraction(1, 16))


def test_case1_unreachable_state_gets_zero():
    # all-losers cannot be reentered once p0 = 1
    chain = build_reduced_chain(3, Symmetry.CYCLIC)
    pi = stationary_distribution(chain, TORAL, exact=True)
    assert pi.weights[0] == 0
    assert all(w > 0 for w in pi.weights[1:])
    measure = closed_form_n3(TORAL)
    assert measure[0] == 0
    pif = stationary_distribution(chain, TORAL, exact=False)
    assert pif.weights[0] == 0.0


def test_lift_to_full():
    chain = build_reduced_chain(3, Symmetry.CYCLIC)
    rng = random.Random(34)
    params = rational_params(rng)
    pi = stationary_distribution(chain, params, exact=True)
    full = lift_to_full(pi, chain.classes)
    assert sum(full.weights) == 1
    rho0, r1, r2, rho3 = closed_form_n3(params)
    total = rho0 + r1 + r2 + rho3
    expected = [rho0, r1 / 3, r1 / 3, r2 / 3, r1 / 3, r2 / 3, r2 / 3, rho3]
    assert list(full.weights) == [e / total for e in expected]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 9])
def test_lifted_distribution_is_stationary_on_full_chain(n):
    rng = random.Random(200 + n)
    chain = build_reduced_chain(n, Symmetry.CYCLIC)
    params = rational_params(rng)
    full = build_full_chain(n, params, exact=True)
    pi = lift_to_full(stationary_distribution(chain, params, exact=True), chain.classes)
    for j in range(1 << n):
        assert sum(pi.weights[i] * full[i].get(j, Fraction(0)) for i in range(1 << n)) == pi.weights[j]


def test_float_matches_exact():
    rng = random.Random(35)
    for n in (3, 5, 8, 10):
        chain = build_reduced_chain(n, Symmetry.CYCLIC)
        params = rational_params(rng)
        exact = stationary_distribution(chain, params, exact=True).as_floats()
        approx = stationary_distribution(chain, params, exact=False).weights
        assert np.max(np.abs(exact - approx)) < 1e-10
    chain = build_reduced_chain(12, Symmetry.DIHEDRAL)
    params = rational_params(rng, p1_eq_p2=True)
    exact = stationary_distribution(chain, params, exact=True).as_floats()
    approx = stationary_distribution(chain, params, exact=False).weights
    assert np.max(np.abs(exact - approx)) < 1e-10


def test_sum_dependence_on_p1_plus_p2():
    # two parameter vectors with equal p1 + p2
    a = Params(Fraction(1, 3), Fraction(1, 5), Fraction(2, 5), Fraction(1, 2))
    b = Params(Fraction(1, 3), Fraction(3, 10), Fraction(3, 10), Fraction(1, 2))
    for n in (3, 4, 5):
        chain = build_reduced_chain(n, Symmetry.CYCLIC)
        pa = stationary_distribution(chain, a, exact=True)
        pb = stationary_distribution(chain, b, exact=True)
        assert tuple(pa.weights) == tuple(pb.weights), n
    chain6 = build_reduced_chain(6, Symmetry.CYCLIC)
    pa = stationary_distribution(chain6, a, exact=True)
    pb = stationary_distribution(chain6, b, exact=True)
    assert tuple(pa.weights) != tuple(pb.weights)


def test_detailed_balance_n3_always_n4_generically_not():
    rng = random.Random(36)
    chain3 = build_reduced_chain(3, Symmetry.CYCLIC)
    chain4 = build_reduced_chain(4, Symmetry.CYCLIC)
    for _ in range(5):
        params = rational_params(rng)
        m3 = chain3.transition_matrix(params, exact=True)
        assert check_detailed_balance(solve_stationary(m3, exact=True), m3)
        m4 = chain4.transition_matrix(params, exact=True)
        assert not check_detailed_balance(solve_stationary(m4, exact=True), m4)
    # fair coins balance even on the ring of 4
    m4 = chain4.transition_matrix(UNIFORM, exact=True)
    assert check_detailed_balance(solve_stationary(m4, exact=True), m4)


def test_doubly_absorbing_chain_rejected():
    chain = build_reduced_chain(4, Symmetry.CYCLIC)
    bad = Params(Fraction(0), Fraction(1, 3), Fraction(1, 3), Fraction(1))
    with pytest.raises(ReducibleChainError):
        solve_stationary(chain.transition_matrix(bad, exact=True), exact=True)
    with pytest.raises(ReducibleChainError):
        solve_stationary(chain.transition_matrix(bad, exact=False))


def test_exclude_reinserts_zero():
    chain = build_reduced_chain(3, Symmetry.CYCLIC)
    params = Params(Fraction(1), Fraction(1, 4), Fraction(1, 4), Fraction(7, 10))
    direct = solve_stationary(chain.transition_matrix(params, exact=True), exact=True)
    excluded = solve_stationary(chain.transition_matrix(params, exact=True), exact=True, exclude=(0,))
    assert tuple(direct.weights) == tuple(excluded.weights)
