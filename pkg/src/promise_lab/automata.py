"""Unary DFAs, PFAs and Moore-Crutchfield QFAs with exact simulation.

Conventions
-----------
Vectors are columns and matrices act on the left, so ``transition[j][i]``
is the weight of moving from state ``i`` to state ``j``.  A stochastic
matrix therefore has columns summing to one.

Rotations are ``[[cos, -sin], [sin, cos]]``.  The transpose convention
rotates the other way and gives the same squared amplitudes, which are
the only quantities this package compares.

Powers are computed by repeated squaring.  The squarings ``A^(2^i)`` are
cached on the matrix so sweeps over many lengths reuse them.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import kernels
from .numtheory import bit_length

DEFAULT_BIT_BUDGET = 1 << 20

ONE = Fraction(1)
ZERO = Fraction(0)

SparseColumn = tuple[tuple[int, Fraction], ...]


class BitBudgetExceeded(ArithmeticError):
    """An exact computation would need more bits per entry than allowed."""

    def __init__(self, needed: int, budget: int, what: str = "entry"):
        super().__init__(
            f"bit budget exceeded: {what} needs about {needed} bits, budget is {budget}"
        )
        self.needed = needed
        self.budget = budget


def _log2_ceil(d: int) -> float:
    return math.log2(d) if d > 1 else 0.0


class _SquaringCache:
    """Lazily grown list ``[A, A^2, A^4, ...]``; safe for concurrent readers."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._items: list = []

    def get(self, base, i: int, square):
        items = self._items
        if i < len(items):
            return items[i]
        with self._lock:
            if not self._items:
                self._items.append(base)
            while len(self._items) <= i:
                self._items.append(square(self._items[-1]))
            return self._items[i]

    def __reduce__(self):
        # cached powers are cheap to rebuild; ship an empty cache to workers
        return (_SquaringCache, ())


# -- matrices ---------------------------------------------------------------


@dataclass(frozen=True)
class StochasticMatrix:
    """Column-stochastic matrix stored by sparse columns.

    ``columns[i]`` lists ``(j, A[j][i])`` for the nonzero entries, sorted
    by ``j``.  Zero means exactly zero; nothing is thresholded.
    """

    dimension: int
    columns: tuple[SparseColumn, ...]
    _cache: _SquaringCache = field(
        default_factory=_SquaringCache, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if self.dimension < 1 or len(self.columns) != self.dimension:
            raise ValueError("column count must equal the dimension")
        for i, col in enumerate(self.columns):
            total = ZERO
            for j, w in col:
                if not 0 <= j < self.dimension:
                    raise ValueError(f"row index {j} out of range in column {i}")
                if not ZERO < w <= ONE:
                    raise ValueError(f"entry ({j},{i}) = {w} outside (0, 1]")
                total += w
            if total != ONE:
                raise ValueError(f"column {i} sums to {total}, not 1")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "StochasticMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        cols = []
        for i in range(n):
            col = tuple(
                (j, Fraction(rows[j][i])) for j in range(n) if Fraction(rows[j][i]) != 0
            )
            cols.append(col)
        return cls(n, tuple(cols))

    @classmethod
    def from_function(cls, nxt: Sequence[int]) -> "StochasticMatrix":
        """0/1 matrix of a total map ``i -> nxt[i]``."""
        return cls(len(nxt), tuple(((int(j), ONE),) for j in nxt))

    def to_dense(self) -> list[list[Fraction]]:
        rows = [[ZERO] * self.dimension for _ in range(self.dimension)]
        for i, col in enumerate(self.columns):
            for j, w in col:
                rows[j][i] = w
        return rows

    def successors(self, i: int) -> list[int]:
        return [j for j, _ in self.columns[i]]

    def csr(self) -> tuple[list[int], list[int]]:
        """Support graph (edge i -> j iff A[j][i] != 0) in CSR form."""
        indptr = [0]
        indices: list[int] = []
        for col in self.columns:
            indices.extend(j for j, _ in col)
            indptr.append(len(indices))
        return indptr, indices

    def is_deterministic(self) -> bool:
        return all(len(col) == 1 for col in self.columns)

    def denominator_lcm(self) -> int:
        d = 1
        for col in self.columns:
            for _, w in col:
                d = math.lcm(d, w.denominator)
        return d

    def apply(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, x in vec.items():
            for j, w in self.columns[i]:
                y = x if w == 1 else x * w
                if j in out:
                    out[j] += y
                else:
                    out[j] = y
        return out

    def __matmul__(self, other: "StochasticMatrix") -> "StochasticMatrix":
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        cols = []
        for col in other.columns:
            prod = self.apply(dict(col))
            cols.append(tuple(sorted((j, w) for j, w in prod.items() if w != 0)))
        return StochasticMatrix(self.dimension, tuple(cols))

    def squaring(self, i: int) -> "StochasticMatrix":
        """``A^(2^i)``, cached."""
        return self._cache.get(self, i, lambda a: a @ a)

    def power(self, m: int) -> "StochasticMatrix":
        result = StochasticMatrix.from_function(range(self.dimension))
        i = 0
        while m:
            if m & 1:
                result = self.squaring(i) @ result
            m >>= 1
            i += 1
        return result


@dataclass(frozen=True)
class OrthogonalMatrix:
    """Dense real orthogonal matrix over the rationals (``M^T M = I`` exactly)."""

    dimension: int
    rows: tuple[tuple[Fraction, ...], ...]
    _cache: _SquaringCache = field(
        default_factory=_SquaringCache, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        n = self.dimension
        if n < 1 or len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("orthogonal matrix must be square of the given dimension")
        for a in range(n):
            for b in range(a, n):
                dot = sum((self.rows[r][a] * self.rows[r][b] for r in range(n)), ZERO)
                if dot != (ONE if a == b else ZERO):
                    raise ValueError(f"columns {a} and {b} are not orthonormal")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "OrthogonalMatrix":
        return cls(len(rows), tuple(tuple(Fraction(x) for x in r) for r in rows))

    @classmethod
    def rotation(cls, sin: Fraction, cos: Fraction) -> "OrthogonalMatrix":
        return cls.from_dense([[cos, -sin], [sin, cos]])

    def denominator_lcm(self) -> int:
        d = 1
        for r in self.rows:
            for x in r:
                d = math.lcm(d, x.denominator)
        return d

    def apply(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            sum((x * v for x, v in zip(row, vec) if x and v), ZERO) for row in self.rows
        )

    def _mul(self, other: "OrthogonalMatrix") -> "OrthogonalMatrix":
        n = self.dimension
        cols = list(zip(*other.rows))
        rows = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in cols)
            for r in self.rows
        )
        # product of orthogonal matrices is orthogonal; skip re-validation
        out = object.__new__(OrthogonalMatrix)
        object.__setattr__(out, "dimension", n)
        object.__setattr__(out, "rows", rows)
        object.__setattr__(out, "_cache", _SquaringCache())
        return out

    def squaring(self, i: int) -> "OrthogonalMatrix":
        return self._cache.get(self, i, lambda a: a._mul(a))

    def transpose(self) -> "OrthogonalMatrix":
        return OrthogonalMatrix(self.dimension, tuple(zip(*self.rows)))


# -- automata ---------------------------------------------------------------


def _default_states(n: int) -> tuple[str, ...]:
    return tuple(f"q{i}" for i in range(n))


def _check_indices(name: str, idx: frozenset[int], n: int) -> None:
    bad = [i for i in idx if not 0 <= i < n]
    if bad:
        raise ValueError(f"{name} indices out of range: {sorted(bad)}")


@dataclass(frozen=True)
class UnaryDFA:
    states: tuple[str, ...]
    next: tuple[int, ...]
    start: int
    accepting: frozenset[int]

    def __post_init__(self) -> None:
        n = len(self.states)
        if len(self.next) != n:
            raise ValueError("transition table must cover every state")
        _check_indices("next", frozenset(self.next), n)
        _check_indices("start", frozenset([self.start]), n)
        _check_indices("accepting", self.accepting, n)

    @classmethod
    def build(cls, nxt: Sequence[int], start: int, accepting, states=None) -> "UnaryDFA":
        nxt = tuple(int(x) for x in nxt)
        return cls(
            tuple(states) if states is not None else _default_states(len(nxt)),
            nxt,
            int(start),
            frozenset(int(a) for a in accepting),
        )

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class UnaryPFA:
    states: tuple[str, ...]
    transition: StochasticMatrix
    initial: tuple[Fraction, ...]
    accepting: frozenset[int]
    neutral: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        n = len(self.states)
        if self.transition.dimension != n or len(self.initial) != n:
            raise ValueError("states, transition and initial vector disagree in size")
        if any(not ZERO <= x <= ONE for x in self.initial) or sum(self.initial, ZERO) != ONE:
            raise ValueError("initial vector must be a probability distribution")
        _check_indices("accepting", self.accepting, n)
        _check_indices("neutral", self.neutral, n)
        if self.accepting & self.neutral:
            raise ValueError("accepting and neutral states overlap")

    @classmethod
    def build(cls, transition: StochasticMatrix, initial, accepting, neutral=(), states=None):
        return cls(
            tuple(states) if states is not None else _default_states(transition.dimension),
            transition,
            tuple(Fraction(x) for x in initial),
            frozenset(accepting),
            frozenset(neutral),
        )

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class UnaryMCQFA:
    states: tuple[str, ...]
    transition: OrthogonalMatrix
    initial: tuple[Fraction, ...]
    accepting: frozenset[int]

    def __post_init__(self) -> None:
        n = len(self.states)
        if self.transition.dimension != n or len(self.initial) != n:
            raise ValueError("states, transition and initial vector disagree in size")
        if sum((x * x for x in self.initial), ZERO) != ONE:
            raise ValueError("initial vector must have unit norm")
        _check_indices("accepting", self.accepting, n)

    @classmethod
    def build(cls, transition: OrthogonalMatrix, initial, accepting, states=None):
        return cls(
            tuple(states) if states is not None else _default_states(transition.dimension),
            transition,
            tuple(Fraction(x) for x in initial),
            frozenset(accepting),
        )

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class OutcomeDistribution:
    accept: Fraction
    reject: Fraction
    dont_know: Fraction = ZERO

    def __post_init__(self) -> None:
        for name in ("accept", "reject", "dont_know"):
            if not ZERO <= getattr(self, name) <= ONE:
                raise ValueError(f"{name} probability outside [0, 1]")
        if self.accept + self.reject + self.dont_know != ONE:
            raise ValueError("outcome probabilities must sum to 1")


# -- simulation -------------------------------------------------------------


def _check_growth(m: int, denominator: int, budget: int | None) -> None:
    if budget is None:
        return
    needed = int(m * _log2_ceil(denominator)) + 1
    if needed > budget:
        raise BitBudgetExceeded(needed, budget)


def _pfa_sparse_state_at(pfa: UnaryPFA, m: int, budget: int | None) -> dict[int, Fraction]:
    if m < 0:
        raise ValueError("input length must be nonnegative")
    _check_growth(m, pfa.transition.denominator_lcm(), budget)
    vec = {i: x for i, x in enumerate(pfa.initial) if x}
    i = 0
    while m:
        if m & 1:
            vec = pfa.transition.squaring(i).apply(vec)
        m >>= 1
        i += 1
    return vec


def pfa_state_at(pfa: UnaryPFA, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> tuple[Fraction, ...]:
    """``A^m v_0`` as a dense exact vector."""
    vec = _pfa_sparse_state_at(pfa, m, bit_budget)
    return tuple(vec.get(i, ZERO) for i in range(pfa.size))


def _outcome(pfa: UnaryPFA, vec: dict[int, Fraction]) -> OutcomeDistribution:
    acc = sum((vec[i] for i in pfa.accepting if i in vec), ZERO)
    dk = sum((vec[i] for i in pfa.neutral if i in vec), ZERO)
    return OutcomeDistribution(acc, ONE - acc - dk, dk)


def pfa_outcome(pfa: UnaryPFA, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> OutcomeDistribution:
    return _outcome(pfa, _pfa_sparse_state_at(pfa, m, bit_budget))


def pfa_outcomes(
    pfa: UnaryPFA, start: int, stop: int, bit_budget: int | None = DEFAULT_BIT_BUDGET
) -> Iterator[tuple[int, OutcomeDistribution]]:
    """Outcomes for every m in ``[start, stop)`` by stepping one letter at a time."""
    if stop <= start:
        return
    _check_growth(stop, pfa.transition.denominator_lcm(), bit_budget)
    vec = _pfa_sparse_state_at(pfa, start, None)
    a = pfa.transition
    for m in range(start, stop):
        yield m, _outcome(pfa, vec)
        if m + 1 < stop:
            vec = {j: x for j, x in a.apply(vec).items() if x}


def _qfa_vector_at(qfa: UnaryMCQFA, m: int, budget: int | None) -> tuple[Fraction, ...]:
    if m < 0:
        raise ValueError("input length must be nonnegative")
    _check_growth(m, qfa.transition.denominator_lcm(), budget)
    vec = qfa.initial
    i = 0
    while m:
        if m & 1:
            vec = qfa.transition.squaring(i).apply(vec)
        m >>= 1
        i += 1
    return vec


def qfa_state_at(qfa: UnaryMCQFA, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> tuple[Fraction, ...]:
    """``U^m |v_0>`` exactly."""
    return _qfa_vector_at(qfa, m, bit_budget)


def _accept_mass(qfa: UnaryMCQFA, vec: Sequence[Fraction]) -> Fraction:
    return sum((vec[i] * vec[i] for i in qfa.accepting), ZERO)


def qfa_accept_probability(qfa: UnaryMCQFA, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> Fraction:
    return _accept_mass(qfa, _qfa_vector_at(qfa, m, bit_budget))


def qfa_accept_probabilities(
    qfa: UnaryMCQFA, start: int, stop: int, bit_budget: int | None = DEFAULT_BIT_BUDGET
) -> Iterator[tuple[int, Fraction]]:
    if stop <= start:
        return
    _check_growth(stop, qfa.transition.denominator_lcm(), bit_budget)
    vec = _qfa_vector_at(qfa, start, None)
    for m in range(start, stop):
        yield m, _accept_mass(qfa, vec)
        if m + 1 < stop:
            vec = qfa.transition.apply(vec)


def dfa_state_at(dfa: UnaryDFA, m: int) -> int:
    """State after ``m`` letters; walks to the cycle once, then reduces ``m`` mod its length."""
    if m < 0:
        raise ValueError("input length must be nonnegative")
    seen: dict[int, int] = {}
    q = dfa.start
    step = 0
    while step < m:
        if q in seen:
            cycle = step - seen[q]
            remaining = (m - step) % cycle
            for _ in range(remaining):
                q = dfa.next[q]
            return q
        seen[q] = step
        q = dfa.next[q]
        step += 1
    return q


def dfa_accepts(dfa: UnaryDFA, m: int) -> bool:
    return dfa_state_at(dfa, m) in dfa.accepting


def dfa_decisions(dfa: UnaryDFA, stop: int):
    """0/1 decisions for every m in ``[0, stop)`` as a numpy array."""
    mask = [1 if i in dfa.accepting else 0 for i in range(dfa.size)]
    return kernels.dfa_trace(dfa.next, dfa.start, mask, stop)


def dfa_to_pfa(dfa: UnaryDFA) -> UnaryPFA:
    """The same machine written with a 0/1 stochastic matrix."""
    initial = [ZERO] * dfa.size
    initial[dfa.start] = ONE
    return UnaryPFA.build(
        StochasticMatrix.from_function(dfa.next),
        initial,
        dfa.accepting,
        states=dfa.states,
    )


def float_shadow(x: Fraction | int) -> float:
    """Nearest double.  For reporting only."""
    return float(Fraction(x))


def max_entry_bits(vec: Sequence[Fraction]) -> int:
    return max((bit_length(x) for x in vec), default=0)
