"""Bound verification sweeps, density witnesses and the state-count table."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .automata import (
    DEFAULT_BIT_BUDGET,
    BitBudgetExceeded,
    UnaryDFA,
    UnaryMCQFA,
    UnaryPFA,
    dfa_decisions,
    float_shadow,
    pfa_outcomes,
    qfa_accept_probabilities,
)
from .constructions import BlockRotationQFA, Interval, lkn_dfa_prime_count
from .numtheory import prime_window
from .problems import (
    LknProblem,
    LThetaProblem,
    Problem,
    PromiseLabel,
    classify_theta,
    iter_labels,
    theta_labels,
)

Automaton = Union[UnaryDFA, UnaryPFA, UnaryMCQFA, BlockRotationQFA]
Value = Union[Fraction, Interval]

THREADS_ENV = "PROMISE_LAB_THREADS"


class NoInstanceNotFound(LookupError):
    """No no-instance within the search limit.  Not a refutation of density."""


def _lower(v: Value) -> Fraction:
    return v.lo if isinstance(v, Interval) else v


def _upper(v: Value) -> Fraction:
    return v.hi if isinstance(v, Interval) else v


def exact_length_limit(automaton: Automaton, budget: int | None) -> int | None:
    """Largest length whose exact evaluation fits the bit budget (None = unbounded)."""
    if budget is None:
        return None
    if isinstance(automaton, UnaryPFA):
        d = automaton.transition.denominator_lcm()
    elif isinstance(automaton, UnaryMCQFA):
        d = automaton.transition.denominator_lcm()
    else:
        return None
    if d == 1:
        return None
    return max(0, math.floor((budget - 1) / math.log2(d)))


def acceptance_sweep(
    automaton: Automaton, start: int, stop: int, bit_budget: int | None = DEFAULT_BIT_BUDGET
) -> Iterator[tuple[int, Value]]:
    """Acceptance for each m in ``[start, stop)``: exact Fraction or certified Interval."""
    if stop <= start:
        return
    if isinstance(automaton, UnaryDFA):
        decisions = dfa_decisions(automaton, stop)
        for m in range(start, stop):
            yield m, Fraction(int(decisions[m]))
    elif isinstance(automaton, UnaryPFA):
        for m, out in pfa_outcomes(automaton, start, stop, bit_budget):
            yield m, out.accept
    elif isinstance(automaton, UnaryMCQFA):
        yield from qfa_accept_probabilities(automaton, start, stop, bit_budget)
    elif isinstance(automaton, BlockRotationQFA):
        for m in range(start, stop):
            yield m, automaton.accept_interval(m)
    else:
        raise TypeError(f"unsupported automaton {type(automaton).__name__}")


@dataclass
class BoundReport:
    problem: dict
    automaton: dict
    m_range: tuple[int, int]
    yes_bound: Fraction
    no_bound: Fraction
    min_yes: Fraction | None = None
    max_no: Fraction | None = None
    yes_count: int = 0
    no_count: int = 0
    unpromised_count: int = 0
    budget_exceeded: int = 0
    certified: bool = False
    counterexamples: list[tuple[int, str, Value]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.min_yes is None or self.min_yes >= self.yes_bound) and (
            self.max_no is None or self.max_no <= self.no_bound
        )

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        def r(x):
            return None if x is None else str(x)

        def v(x):
            if isinstance(x, Interval):
                return {"lo": str(x.lo), "hi": str(x.hi)}
            return str(x)

        return {
            "problem": self.problem,
            "automaton": self.automaton,
            "range": list(self.m_range),
            "yes_bound": str(self.yes_bound),
            "no_bound": str(self.no_bound),
            "min_yes": r(self.min_yes),
            "max_no": r(self.max_no),
            "min_yes_float": None if self.min_yes is None else float_shadow(self.min_yes),
            "max_no_float": None if self.max_no is None else float_shadow(self.max_no),
            "yes_count": self.yes_count,
            "no_count": self.no_count,
            "unpromised_count": self.unpromised_count,
            "budget_exceeded": self.budget_exceeded,
            "certified_intervals": self.certified,
            "verdict": self.verdict,
            "counterexamples": [
                {"m": m, "label": label, "value": v(x)} for m, label, x in self.counterexamples
            ],
        }


def _automaton_descriptor(automaton: Automaton) -> dict:
    kind = {
        UnaryDFA: "dfa",
        UnaryPFA: "pfa",
        UnaryMCQFA: "mcqfa",
        BlockRotationQFA: "lkn-mcqfa",
    }[type(automaton)]
    out = {"kind": kind, "states": automaton.size}
    if isinstance(automaton, BlockRotationQFA):
        out.update(k=automaton.k, n=automaton.n)
    return out


def _sweep_chunk(args) -> dict:
    automaton, problem, start, stop, yes_bound, no_bound, bit_budget = args
    part = {
        "min_yes": None,
        "max_no": None,
        "yes": 0,
        "no": 0,
        "unpromised": 0,
        "budget": 0,
        "certified": False,
        "bad": [],
    }
    if stop <= start:
        return part
    limit = exact_length_limit(automaton, bit_budget)
    labels = iter_labels(problem, start, stop, bit_budget)
    values = acceptance_sweep(
        automaton, start, stop if limit is None else min(stop, limit + 1), bit_budget
    )
    values_iter = iter(values)
    done = start
    try:
        for m, label in labels:
            done = m + 1
            value = None
            if limit is None or m <= limit:
                vm, value = next(values_iter)
                assert vm == m
            if label is PromiseLabel.UNPROMISED:
                part["unpromised"] += 1
                continue
            if value is None:
                part["budget"] += 1
                continue
            if isinstance(value, Interval) and not value.is_exact:
                part["certified"] = True
            if label is PromiseLabel.YES:
                part["yes"] += 1
                lo = _lower(value)
                if part["min_yes"] is None or lo < part["min_yes"]:
                    part["min_yes"] = lo
                if lo < yes_bound:
                    part["bad"].append((m, "Yes", value))
            else:
                part["no"] += 1
                hi = _upper(value)
                if part["max_no"] is None or hi > part["max_no"]:
                    part["max_no"] = hi
                if hi > no_bound:
                    part["bad"].append((m, "No", value))
    except BitBudgetExceeded:
        # labels are computed incrementally, so every later length is out of budget too
        part["budget"] += stop - done
    return part


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def verify_bounds(
    automaton: Automaton,
    problem: Problem,
    m_max: int,
    yes_bound,
    no_bound,
    bit_budget: int | None = DEFAULT_BIT_BUDGET,
    workers: int | None = None,
) -> BoundReport:
    """Check every promised ``m <= m_max``: yes accepted with at least
    ``yes_bound``, no accepted with at most ``no_bound``.

    Certified intervals are compared pessimistically (lower end for yes,
    upper end for no).  Unpromised lengths are skipped but counted.
    """
    yes_bound, no_bound = Fraction(yes_bound), Fraction(no_bound)
    for b in (yes_bound, no_bound):
        if not 0 <= b <= 1:
            raise ValueError(f"bound {b} outside [0, 1]")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    workers = worker_count() if workers is None else max(1, workers)
    bounds = [round(i * (m_max + 1) / workers) for i in range(workers + 1)]
    jobs = [
        (automaton, problem, bounds[i], bounds[i + 1], yes_bound, no_bound, bit_budget)
        for i in range(workers)
    ]
    if workers == 1:
        parts = [_sweep_chunk(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sweep_chunk, jobs))

    report = BoundReport(
        problem=problem.to_dict(),
        automaton=_automaton_descriptor(automaton),
        m_range=(0, m_max),
        yes_bound=yes_bound,
        no_bound=no_bound,
    )
    for part in parts:
        if part["min_yes"] is not None:
            report.min_yes = part["min_yes"] if report.min_yes is None else min(report.min_yes, part["min_yes"])
        if part["max_no"] is not None:
            report.max_no = part["max_no"] if report.max_no is None else max(report.max_no, part["max_no"])
        report.yes_count += part["yes"]
        report.no_count += part["no"]
        report.unpromised_count += part["unpromised"]
        report.budget_exceeded += part["budget"]
        report.certified |= part["certified"]
        report.counterexamples.extend(part["bad"])
    return report


# -- density witness ----------------------------------------------------------


def find_no_instance_in_progression(
    problem: LThetaProblem,
    n0: int,
    D: int,
    search_limit: int = 10**6,
    bit_budget: int | None = DEFAULT_BIT_BUDGET,
) -> int:
    """Smallest ``l >= 1`` (up to ``search_limit``) with ``n0 + l*D`` a no-instance."""
    if D < 1 or search_limit < 1:
        raise ValueError("D and search_limit must be positive")
    if classify_theta(problem, n0, bit_budget) is not PromiseLabel.YES:
        raise ValueError(f"n0 = {n0} is not a yes-instance")
    stop = n0 + (search_limit + 1) * D
    for m, label in theta_labels(problem, n0 + D, stop, D, bit_budget):
        if label is PromiseLabel.NO:
            return (m - n0) // D
    raise NoInstanceNotFound(
        f"no no-instance among n0 + l*D for l <= {search_limit}; "
        "this does not refute density, the search merely stopped"
    )


# -- state-count table --------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    k: int
    n: int
    qfa: int
    pfa: int
    dfa: int
    pfa_lower: int
    dfa_lower: int

    FIELDS = ("k", "n", "qfa", "pfa", "dfa", "pfa_lower", "dfa_lower")

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, f) for f in self.FIELDS)


def table_row(k: int, n: int) -> TableRow:
    lower = prime_window(n, -(-k // 3) + 1)
    return TableRow(
        k=k,
        n=n,
        qfa=2 * k,
        pfa=sum(prime_window(n, k)),
        dfa=math.prod(prime_window(n, lkn_dfa_prime_count(k))),
        pfa_lower=sum(lower),
        dfa_lower=math.prod(lower),
    )


def emit_table(k_range: Iterable[int], n_range: Iterable[int]) -> list[TableRow]:
    n_values = list(n_range)
    return [table_row(k, n) for k in k_range for n in n_values]


def describe(problem: Problem) -> str:
    if isinstance(problem, LknProblem):
        return f"L^{{{problem.k},{problem.n}}}"
    return f"L^theta(phi: sin={problem.phi.sin}, theta: sin={problem.theta.sin})"
