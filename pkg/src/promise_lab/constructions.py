"""Builders for the explicit automata, and the PFA to cyclic DFA conversion."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .automata import (
    ONE,
    ZERO,
    OrthogonalMatrix,
    StochasticMatrix,
    UnaryDFA,
    UnaryMCQFA,
    UnaryPFA,
    pfa_outcome,
)
from .markov import acceptance_series, analyze_chain
from .numtheory import prime_window
from .problems import LknProblem, LThetaProblem, PromiseLabel, PythagoreanAngle, classify

INTERVAL_PRECISION = 256


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __rsub__(self, x) -> "Interval":
        x = Fraction(x)
        return Interval(x - self.hi, x - self.lo)

    def scale(self, c: Fraction) -> "Interval":
        if c < 0:
            raise ValueError("negative scale")
        return Interval(self.lo * c, self.hi * c)

    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)


# -- theta family -------------------------------------------------------------


def build_theta_qfa(phi: PythagoreanAngle) -> UnaryMCQFA:
    """Two states, rotation by ``phi``, start in and accept on the first state."""
    return UnaryMCQFA.build(
        OrthogonalMatrix.rotation(phi.sin, phi.cos),
        [ONE, ZERO],
        {0},
        states=("q1", "q2"),
    )


# -- lkn family ---------------------------------------------------------------


class _CertifiedCos2:
    """Cache of rigorous enclosures of ``cos^2(2*pi*r/p)``."""

    def __init__(self, prec: int = INTERVAL_PRECISION) -> None:
        self._ctx = mpmath.ctx_iv.MPIntervalContext()
        self._ctx.prec = prec
        self._lock = threading.Lock()
        self._cache: dict[tuple[int, int], Interval] = {}

    @staticmethod
    def _to_fraction(mpf_tuple) -> Fraction:
        p, q = mpmath.libmp.to_rational(mpf_tuple)
        return Fraction(int(p), int(q))

    def __call__(self, r: int, p: int) -> Interval:
        key = (r % p, p)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        with self._lock:
            r = key[0]
            if r == 0 or 2 * r == p:
                value = Interval.point(1)
            else:
                ctx = self._ctx
                c = ctx.cos(2 * ctx.pi * ctx.mpf(r) / p)
                sq = c * c
                lo_t, hi_t = sq._mpi_
                lo = max(ZERO, self._to_fraction(lo_t))
                hi = min(ONE, self._to_fraction(hi_t))
                value = Interval(lo, hi)
            self._cache[key] = value
            return value


_COS2 = _CertifiedCos2()


@dataclass(frozen=True)
class BlockRotationQFA:
    """``2k``-state MCQFA of k isolated rotation blocks with angles ``2*pi/p_j``.

    Its amplitudes (``1/sqrt(k)``, ``cos(2*pi/p)``) are irrational, so it is
    not a :class:`UnaryMCQFA`.  Two evaluation paths are offered:

    * ``accept_interval`` -- exact 1 when every ``p_j`` divides ``m``,
      otherwise a rigorous rational enclosure of
      ``(1/k) * sum_j cos^2(2*pi*(m mod p_j)/p_j)``;
    * ``accept_probability_float`` -- plain double-precision simulation of
      ``U^m |v_0>``.
    """

    k: int
    n: int
    primes: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 1:
            raise ValueError(f"need k >= 1 and n >= 1, got k={self.k}, n={self.n}")
        object.__setattr__(self, "primes", tuple(prime_window(self.n, self.k)))

    @property
    def size(self) -> int:
        return 2 * self.k

    @property
    def states(self) -> tuple[str, ...]:
        return tuple(f"q{j}_{b}" for j in range(1, self.k + 1) for b in (0, 1))

    @property
    def accepting(self) -> frozenset[int]:
        return frozenset(range(0, 2 * self.k, 2))

    def float_transition(self) -> np.ndarray:
        u = np.zeros((2 * self.k, 2 * self.k))
        for j, p in enumerate(self.primes):
            c, s = math.cos(2 * math.pi / p), math.sin(2 * math.pi / p)
            u[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = [[c, -s], [s, c]]
        return u

    def float_initial(self) -> np.ndarray:
        v = np.zeros(2 * self.k)
        v[0::2] = 1 / math.sqrt(self.k)
        return v

    def float_state_at(self, m: int) -> np.ndarray:
        if m < 0:
            raise ValueError("input length must be nonnegative")
        return np.linalg.matrix_power(self.float_transition(), m) @ self.float_initial()

    def accept_probability_float(self, m: int) -> float:
        v = self.float_state_at(m)
        return float(np.sum(v[0::2] ** 2))

    def is_symbolic_yes(self, m: int) -> bool:
        return all(m % p == 0 for p in self.primes)

    def accept_interval(self, m: int) -> Interval:
        if m < 0:
            raise ValueError("input length must be nonnegative")
        if self.is_symbolic_yes(m):
            return Interval.point(1)
        total = Interval.point(0)
        for p in self.primes:
            total = total + _COS2(m % p, p)
        return total.scale(Fraction(1, self.k))

    def reject_interval(self, m: int) -> Interval:
        return 1 - self.accept_interval(m)


def build_lkn_qfa(k: int, n: int) -> BlockRotationQFA:
    return BlockRotationQFA(k, n)


def lkn_pfa_offsets(k: int, n: int) -> list[int]:
    """Index of ``q_{i,0}`` for each counter ``i`` (0-based)."""
    offsets, total = [], 0
    for p in prime_window(n, k):
        offsets.append(total)
        total += p
    return offsets


def build_lkn_pfa(k: int, n: int) -> UnaryPFA:
    """k modular counters run with probability 1/k each; accept on any counter at 0."""
    primes = prime_window(n, k)
    states, nxt, initial, accepting = [], [], [], []
    base = 0
    for i, p in enumerate(primes, start=1):
        for j in range(p):
            states.append(f"q{i},{j}")
            nxt.append(base + (j + 1) % p)
            initial.append(Fraction(1, k) if j == 0 else ZERO)
        accepting.append(base)
        base += p
    return UnaryPFA.build(
        StochasticMatrix.from_function(nxt), initial, accepting, states=states
    )


def lkn_dfa_prime_count(k: int) -> int:
    return k // 3 + 2


def build_lkn_dfa(k: int, n: int) -> UnaryDFA:
    """Cyclic DFA on ``t = p_n * ... * p_{n + k//3 + 1}`` states accepting multiples of t."""
    if k < 1 or n < 1:
        raise ValueError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    t = math.prod(prime_window(n, lkn_dfa_prime_count(k)))
    return UnaryDFA.build([(i + 1) % t for i in range(t)], 0, {0})


# -- PFA -> cyclic DFA ----------------------------------------------------------


class ConversionError(ValueError):
    """Limiting acceptance did not settle within the search bound."""


@dataclass(frozen=True)
class ConversionResult:
    dfa: UnaryDFA
    period: int
    threshold: int
    limits: tuple[float, ...]
    accepting_residues: frozenset[int]


def _rounded(pfa: UnaryPFA, m: int, estimate: float) -> bool:
    # resolve near-ties exactly; the rule at exactly 1/2 is "accept"
    if abs(estimate - 0.5) < 1e-9:
        return pfa_outcome(pfa, m).accept >= Fraction(1, 2)
    return estimate >= 0.5


def cyclic_conversion(
    pfa: UnaryPFA,
    epsilon: Fraction,
    problem: LknProblem | LThetaProblem | Callable[[int], PromiseLabel] | None = None,
    search_bound: int = 1024,
    window: int = 8,
) -> ConversionResult:
    """Turn a bounded-error unary PFA into a tail-plus-cycle DFA.

    The cycle has length ``D`` (lcm of the chain's periods); residue ``j`` is
    accepting when the limiting acceptance along ``r*D + j`` is at least
    1/2.  Limits count as settled once two consecutive windows of ``window``
    periods have means within ``(1/2 - epsilon)/4``.  Below the detected
    threshold the DFA copies the PFA's own rounded decisions.  ``problem``,
    when given, restricts the threshold search to promised lengths.
    """
    if not isinstance(pfa, UnaryPFA):
        raise TypeError(f"expected a UnaryPFA, got {type(pfa).__name__}")
    epsilon = Fraction(epsilon)
    if not epsilon < Fraction(1, 2):
        raise ValueError("epsilon must be below 1/2")
    if search_bound < 2 * window:
        raise ValueError("search_bound must cover at least two windows")
    if isinstance(problem, (LknProblem, LThetaProblem)):
        problem_obj = problem
        problem = lambda m: classify(problem_obj, m)  # noqa: E731
    D = analyze_chain(pfa.transition).D
    margin = float(Fraction(1, 2) - epsilon) / 4

    # f(m) for m < (w+1)*window*D, grown window by window
    series = np.empty(0)
    prev = None
    w = 0
    limits = None
    while (w + 1) * window <= search_bound:
        needed = (w + 1) * window * D
        if len(series) < needed:
            series = acceptance_series(pfa, max(needed, 2 * len(series)))
        block = series[w * window * D : needed].reshape(window, D)
        means = block.mean(axis=0)
        if prev is not None and float(np.abs(means - prev).max()) < margin:
            limits = means
            break
        prev = means
        w += 1
    if limits is None:
        raise ConversionError(
            f"limit estimates still oscillate by more than {margin:.3g} after "
            f"{search_bound} periods of length {D}; the PFA may not solve the problem"
        )
    end = (w + 1) * window * D
    accepting_residues = frozenset(j for j in range(D) if limits[j] >= 0.5)

    last_bad = -1
    for m in range(end - 1, -1, -1):
        if problem is not None and problem(m) is PromiseLabel.UNPROMISED:
            continue
        if _rounded(pfa, m, float(series[m])) != ((m % D) in accepting_residues):
            last_bad = m
            break
    r0 = last_bad // D + 1 if last_bad >= 0 else 0
    tail = r0 * D

    nxt = list(range(1, tail + D)) + [tail]
    acc = {m for m in range(tail) if _rounded(pfa, m, float(series[m]))}
    acc |= {tail + j for j in accepting_residues}
    dfa = UnaryDFA.build(nxt, 0, acc)
    return ConversionResult(dfa, D, tail, tuple(float(x) for x in limits), accepting_residues)


def pfa_to_cyclic_dfa(
    pfa: UnaryPFA,
    epsilon: Fraction,
    problem: LknProblem | LThetaProblem | Callable[[int], PromiseLabel] | None = None,
    search_bound: int = 1024,
    window: int = 8,
) -> UnaryDFA:
    return cyclic_conversion(pfa, epsilon, problem, search_bound, window).dfa
