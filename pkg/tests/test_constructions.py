import math
from fractions import Fraction

import mpmath
import pytest

from promise_lab.automata import dfa_accepts, pfa_outcome, qfa_accept_probability
from promise_lab.constructions import (
    BlockRotationQFA,
    ConversionError,
    Interval,
    build_lkn_dfa,
    build_lkn_pfa,
    build_lkn_qfa,
    build_theta_qfa,
    cyclic_conversion,
    lkn_dfa_prime_count,
    lkn_pfa_offsets,
    pfa_to_cyclic_dfa,
)
from promise_lab.automata import StochasticMatrix, UnaryPFA
from promise_lab.problems import LknProblem, PromiseLabel, classify_lkn, theta_cos

F = Fraction


# -- intervals ----------------------------------------------------------------


def test_interval_ops():
    a = Interval(F(1, 4), F(1, 2))
    assert (a + a) == Interval(F(1, 2), F(1))
    assert (1 - a) == Interval(F(1, 2), F(3, 4))
    assert a.scale(F(2)) == Interval(F(1, 2), F(1))
    assert a.width == F(1, 4)
    assert Interval.point(3).is_exact
    with pytest.raises(ValueError):
        Interval(F(1), F(0))


# -- theta QFA ------------------------------------------------------------------


def test_theta_qfa_shape(theta_problem):
    qfa = build_theta_qfa(theta_problem.phi)
    assert qfa.size == 2 and qfa.states == ("q1", "q2")
    assert qfa.initial == (1, 0) and qfa.accepting == frozenset({0})


def test_theta_qfa_is_cos_squared(theta_problem):
    qfa = build_theta_qfa(theta_problem.phi)
    for m in range(501):
        assert qfa_accept_probability(qfa, m) == theta_cos(theta_problem, m) ** 2


# -- L^{k,n} QFA ----------------------------------------------------------------


def mp_accept(k, n, m):
    primes = LknProblem(k, n).primes
    with mpmath.workprec(300):
        return sum(mpmath.cos(2 * mpmath.pi * m / p) ** 2 for p in primes) / k


def test_lkn_qfa_layout():
    q = build_lkn_qfa(3, 2)
    assert q.size == 6
    assert q.states == ("q1_0", "q1_1", "q2_0", "q2_1", "q3_0", "q3_1")
    assert q.accepting == frozenset({0, 2, 4})
    u = q.float_transition()
    assert max(abs((u.T @ u) - __import__("numpy").eye(6)).flatten()) < 1e-14
    assert abs(sum(q.float_initial() ** 2) - 1) < 1e-15


def test_lkn_qfa_symbolic_yes():
    q = build_lkn_qfa(3, 2)
    assert q.accept_interval(0) == Interval.point(1)
    assert q.accept_interval(105) == Interval.point(1)
    assert q.reject_interval(210) == Interval.point(0)


def test_lkn_qfa_reject_example():
    q = build_lkn_qfa(1, 3)
    rej = q.reject_interval(1)
    assert rej.width < F(1, 10**60)
    assert abs(float(rej.lo) - math.sin(2 * math.pi / 5) ** 2) < 1e-15
    assert abs(float(rej.lo) - 0.9045084971874737) < 1e-15


@pytest.mark.parametrize("k, n", [(1, 3), (2, 2), (3, 2), (4, 5)])
def test_lkn_qfa_interval_contains_mp_value(k, n):
    q = build_lkn_qfa(k, n)
    for m in list(range(0, 60)) + [10**6 + 7, 10**12 + 1]:
        iv = q.accept_interval(m)
        ref = mp_accept(k, n, m)
        with mpmath.workprec(300):
            slack = mpmath.mpf(2) ** -240
            assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref + slack
            assert mpmath.mpf(iv.hi.numerator) / iv.hi.denominator >= ref - slack
        assert iv.width < F(1, 10**60)


@pytest.mark.parametrize("k, n", [(2, 2), (3, 2)])
def test_lkn_qfa_float_agrees_with_interval(k, n):
    q = build_lkn_qfa(k, n)
    for m in range(200):
        assert abs(q.accept_probability_float(m) - q.accept_interval(m).midpoint()) < 1e-9


def test_lkn_qfa_invalid():
    with pytest.raises(ValueError):
        BlockRotationQFA(0, 2)
    with pytest.raises(ValueError):
        build_lkn_qfa(2, 2).float_state_at(-1)


# -- L^{k,n} PFA ----------------------------------------------------------------


def test_lkn_pfa_layout():
    pfa = build_lkn_pfa(3, 2)
    assert pfa.size == 15
    assert lkn_pfa_offsets(3, 2) == [0, 3, 8]
    assert pfa.states[:4] == ("q1,0", "q1,1", "q1,2", "q2,0")
    assert pfa.accepting == frozenset({0, 3, 8})
    assert pfa.initial[0] == pfa.initial[3] == pfa.initial[8] == F(1, 3)
    assert pfa.transition.is_deterministic()


@pytest.mark.parametrize("k, n", [(1, 3), (2, 2), (3, 2)])
def test_lkn_pfa_accepts_dividing_fraction(k, n):
    pfa = build_lkn_pfa(k, n)
    primes = LknProblem(k, n).primes
    for m in range(600):
        assert pfa_outcome(pfa, m).accept == F(sum(m % p == 0 for p in primes), k)


# -- L^{k,n} DFA ----------------------------------------------------------------


def test_lkn_dfa_sizes():
    assert lkn_dfa_prime_count(3) == 3
    assert lkn_dfa_prime_count(6) == 4
    assert build_lkn_dfa(3, 2).size == 105
    assert build_lkn_dfa(3, 3).size == 5 * 7 * 11


def test_lkn_dfa_agrees_on_promised():
    for k, n in [(3, 2), (3, 3), (4, 2)]:
        problem, dfa = LknProblem(k, n), build_lkn_dfa(k, n)
        for m in range(3000):
            label = classify_lkn(problem, m)
            if label is not PromiseLabel.UNPROMISED:
                assert dfa_accepts(dfa, m) == (label is PromiseLabel.YES)


def test_lkn_dfa_k1_uses_more_primes_than_the_window():
    # floor(k/3)+2 = 2 primes for k=1, so the yes-instance p_n is rejected
    problem, dfa = LknProblem(1, 3), build_lkn_dfa(1, 3)
    assert dfa.size == 35
    assert classify_lkn(problem, 5) is PromiseLabel.YES
    assert not dfa_accepts(dfa, 5)


# -- PFA -> cyclic DFA ----------------------------------------------------------


def test_conversion_lkn_21():
    res = cyclic_conversion(build_lkn_pfa(2, 1), F(1, 3), LknProblem(2, 1))
    assert res.period == 6
    assert res.threshold == 0
    assert res.accepting_residues == frozenset({0, 2, 3, 4})
    assert res.dfa.size == 6


def test_conversion_lkn_32_matches_rounding():
    pfa = build_lkn_pfa(3, 2)
    problem = LknProblem(3, 2)
    res = cyclic_conversion(pfa, F(1, 3), problem)
    assert res.period == 105
    for m in range(res.threshold, 3000):
        if classify_lkn(problem, m) is PromiseLabel.UNPROMISED:
            continue
        assert dfa_accepts(res.dfa, m) == (pfa_outcome(pfa, m).accept >= F(1, 2))


def test_conversion_with_transient_tail():
    # state 0 is transient and accepting; the cycle 1 <-> 2 accepts on 1
    matrix = StochasticMatrix.from_function([1, 2, 1])
    pfa = UnaryPFA.build(matrix, [1, 0, 0], {0, 1})
    res = cyclic_conversion(pfa, F(0))
    for m in range(200):
        assert dfa_accepts(res.dfa, m) == (pfa_outcome(pfa, m).accept >= F(1, 2))


def test_conversion_mixing_chain():
    # aperiodic two-state chain, stationary mass 2/3 on the accepting state
    matrix = StochasticMatrix.from_dense([[F(1, 2), F(1, 4)], [F(1, 2), F(3, 4)]])
    pfa = UnaryPFA.build(matrix, [0, 1], {1})
    res = cyclic_conversion(pfa, F(1, 10))
    assert res.period == 1 and res.accepting_residues == frozenset({0})
    assert abs(res.limits[0] - 2 / 3) < 1e-4


def test_conversion_rejects_qfa(theta_problem):
    with pytest.raises(TypeError):
        pfa_to_cyclic_dfa(build_theta_qfa(theta_problem.phi), F(1, 3))


def test_conversion_bad_arguments():
    pfa = build_lkn_pfa(2, 1)
    with pytest.raises(ValueError):
        pfa_to_cyclic_dfa(pfa, F(1, 2))
    with pytest.raises(ValueError):
        pfa_to_cyclic_dfa(pfa, F(1, 3), search_bound=4)


def test_conversion_error_is_value_error():
    assert issubclass(ConversionError, ValueError)
