from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promise_lab.automata import (
    BitBudgetExceeded,
    OrthogonalMatrix,
    OutcomeDistribution,
    StochasticMatrix,
    UnaryDFA,
    UnaryMCQFA,
    UnaryPFA,
    dfa_accepts,
    dfa_decisions,
    dfa_to_pfa,
    float_shadow,
    pfa_outcome,
    pfa_outcomes,
    pfa_state_at,
    qfa_accept_probabilities,
    qfa_accept_probability,
    qfa_state_at,
)
from promise_lab.constructions import build_lkn_dfa, build_lkn_pfa, build_theta_qfa
from promise_lab.problems import PythagoreanAngle

F = Fraction


THETA_QFA = build_theta_qfa(PythagoreanAngle.from_sin(F(3, 5)))


@pytest.fixture
def theta_qfa():
    return THETA_QFA


def swap_pfa():
    return UnaryPFA.build(StochasticMatrix.from_function([1, 0]), [1, 0], {1})


def random_pfa(draw_seed, n=4):
    import random

    rng = random.Random(draw_seed)
    rows = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        weights = [rng.randint(0, 3) for _ in range(n)]
        if sum(weights) == 0:
            weights[rng.randrange(n)] = 1
        total = sum(weights)
        for j in range(n):
            rows[j][i] = F(weights[j], total)
    init = [F(1, n)] * n
    return UnaryPFA.build(StochasticMatrix.from_dense(rows), init, {0})


def naive_power_apply(rows, vec, m):
    for _ in range(m):
        vec = [sum(rows[j][i] * vec[i] for i in range(len(vec))) for j in range(len(vec))]
    return vec


# -- validation ---------------------------------------------------------------


def test_stochastic_rejects_bad_column():
    with pytest.raises(ValueError):
        StochasticMatrix.from_dense([[F(1, 2), 0], [F(1, 3), 1]])


def test_orthogonal_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        OrthogonalMatrix.from_dense([[1, 1], [0, 1]])


def test_pfa_rejects_overlapping_neutral():
    with pytest.raises(ValueError):
        UnaryPFA.build(StochasticMatrix.from_function([0]), [1], {0}, {0})


def test_qfa_requires_unit_initial():
    rot = OrthogonalMatrix.rotation(F(3, 5), F(4, 5))
    with pytest.raises(ValueError):
        UnaryMCQFA.build(rot, [F(1, 2), F(1, 2)], {0})


def test_outcome_distribution_must_sum_to_one():
    with pytest.raises(ValueError):
        OutcomeDistribution(F(1, 2), F(1, 3), F(0))


# -- PFA ----------------------------------------------------------------------


def test_pfa_state_at_zero_is_initial():
    pfa = random_pfa(3)
    assert pfa_state_at(pfa, 0) == pfa.initial


def test_one_state_pfa_huge_power():
    pfa = UnaryPFA.build(StochasticMatrix.from_function([0]), [1], {0})
    assert pfa_state_at(pfa, 10**9) == (F(1),)


def test_swap_pfa_odd_power():
    assert pfa_state_at(swap_pfa(), 7) == (F(0), F(1))


def test_all_accepting_pfa():
    pfa = UnaryPFA.build(StochasticMatrix.from_function([1, 2, 0]), [F(1, 3)] * 3, {0, 1, 2})
    for m in (0, 1, 5, 123):
        assert pfa_outcome(pfa, m).accept == 1


def test_lkn_pfa_examples():
    pfa = build_lkn_pfa(3, 2)
    assert pfa_outcome(pfa, 105).accept == 1
    assert pfa_outcome(pfa, 1).accept == 0


def test_neutral_mass_is_dont_know():
    pfa = UnaryPFA.build(StochasticMatrix.from_function([0, 1, 2]), [F(1, 2), F(1, 4), F(1, 4)], {0}, {1})
    out = pfa_outcome(pfa, 3)
    assert (out.accept, out.dont_know, out.reject) == (F(1, 2), F(1, 4), F(1, 4))


@pytest.mark.parametrize("seed", range(5))
def test_pfa_power_matches_naive_stepping(seed):
    pfa = random_pfa(seed)
    rows = pfa.transition.to_dense()
    for m in (0, 1, 2, 7, 13):
        assert list(pfa_state_at(pfa, m, None)) == naive_power_apply(rows, list(pfa.initial), m)


@pytest.mark.parametrize("seed", range(3))
def test_pfa_sweep_matches_pointwise(seed):
    pfa = random_pfa(seed)
    sweep = [o.accept for _, o in pfa_outcomes(pfa, 3, 20, None)]
    assert sweep == [pfa_outcome(pfa, m, None).accept for m in range(3, 20)]


@settings(max_examples=40, deadline=None)
@given(a=st.integers(0, 2**20), b=st.integers(0, 2**20))
def test_pfa_power_consistency(a, b):
    pfa = build_lkn_pfa(3, 2)
    sa = pfa_state_at(pfa, a)
    step = pfa.transition.power(b)
    applied = step.apply({i: x for i, x in enumerate(sa) if x})
    assert pfa_state_at(pfa, a + b) == tuple(applied.get(i, F(0)) for i in range(pfa.size))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), m=st.integers(0, 40))
def test_pfa_distribution_sums_to_one(seed, m):
    vec = pfa_state_at(random_pfa(seed), m, None)
    assert sum(vec) == 1 and all(x >= 0 for x in vec)


# -- QFA ----------------------------------------------------------------------


def test_qfa_state_examples(theta_qfa):
    assert qfa_state_at(theta_qfa, 0) == (1, 0)
    v1 = qfa_state_at(theta_qfa, 1)
    assert (v1[0], abs(v1[1])) == (F(4, 5), F(3, 5))
    assert qfa_state_at(theta_qfa, 2)[0] == F(7, 25)


@pytest.mark.parametrize("m, expected", [(0, F(1)), (1, F(16, 25)), (2, F(49, 625))])
def test_qfa_accept_examples(theta_qfa, m, expected):
    assert qfa_accept_probability(theta_qfa, m) == expected


def test_qfa_transpose_convention_same_probabilities(theta_qfa):
    other = UnaryMCQFA.build(theta_qfa.transition.transpose(), theta_qfa.initial, theta_qfa.accepting)
    for m in range(30):
        assert qfa_accept_probability(other, m) == qfa_accept_probability(theta_qfa, m)


@settings(max_examples=30, deadline=None)
@given(a=st.integers(0, 2**12), b=st.integers(0, 2**12))
def test_qfa_power_consistency_and_norm(a, b):
    theta_qfa = THETA_QFA
    va = qfa_state_at(theta_qfa, a)
    vb = va
    i = 0
    e = b
    while e:
        if e & 1:
            vb = theta_qfa.transition.squaring(i).apply(vb)
        e >>= 1
        i += 1
    vab = qfa_state_at(theta_qfa, a + b)
    assert vb == vab
    assert sum(x * x for x in vab) == 1
    assert 0 <= qfa_accept_probability(theta_qfa, a) <= 1


def test_qfa_sweep_matches_pointwise(theta_qfa):
    sweep = dict(qfa_accept_probabilities(theta_qfa, 0, 60))
    assert all(sweep[m] == qfa_accept_probability(theta_qfa, m) for m in range(60))


def test_qfa_bit_budget(theta_qfa):
    with pytest.raises(BitBudgetExceeded):
        qfa_state_at(theta_qfa, 10**6)
    with pytest.raises(BitBudgetExceeded):
        qfa_state_at(theta_qfa, 100, bit_budget=64)
    # a larger budget lets the same length through
    assert sum(x * x for x in qfa_state_at(theta_qfa, 100, bit_budget=1000)) == 1


# -- DFA ----------------------------------------------------------------------


def lasso_dfa():
    # tail 0->1->2, cycle 3->4->5->6->3
    return UnaryDFA.build([1, 2, 3, 4, 5, 6, 3], 0, {0, 2, 5})


def test_dfa_start_accepting():
    assert dfa_accepts(lasso_dfa(), 0)


def test_lkn_dfa_examples():
    dfa = build_lkn_dfa(3, 2)
    assert dfa.size == 105
    assert dfa_accepts(dfa, 105)
    assert not dfa_accepts(dfa, 104)
    assert dfa_accepts(dfa, 0)
    assert not dfa_accepts(dfa, 61)


def test_dfa_cycle_shortcut_matches_naive():
    dfa = lasso_dfa()
    q = dfa.start
    for m in range(200):
        assert dfa_accepts(dfa, m) == (q in dfa.accepting)
        q = dfa.next[q]
    assert dfa_accepts(dfa, 10**15 + 3) == ((10**15 + 3 - 3) % 4 == 2)


def test_dfa_decisions_kernel_matches_pointwise():
    dfa = lasso_dfa()
    decisions = dfa_decisions(dfa, 500)
    assert [bool(x) for x in decisions] == [dfa_accepts(dfa, m) for m in range(500)]


@pytest.mark.parametrize("dfa", [lasso_dfa(), build_lkn_dfa(2, 1), build_lkn_dfa(3, 2)])
def test_dfa_pfa_embedding_agrees(dfa):
    pfa = dfa_to_pfa(dfa)
    decisions = dfa_decisions(dfa, 10**4 + 1)
    for m, out in pfa_outcomes(pfa, 0, 10**4 + 1):
        assert out.accept in (0, 1)
        assert bool(out.accept) == bool(decisions[m])


# -- float shadow -------------------------------------------------------------


def test_float_shadow():
    assert float_shadow(F(1, 2)) == 0.5
    assert abs(float_shadow(F(49, 625)) - 0.0784) < 1e-15
    assert abs(float_shadow(F(25, 169)) - 0.14792899408284024) < 1e-15
