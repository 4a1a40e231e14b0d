"""The two unary promise families and their exact classifiers.

``theta`` family: input length ``m`` is a yes-instance when ``m*phi`` lies
within ``theta`` of a multiple of pi, a no-instance when it lies within
``theta`` of an odd multiple of pi/2.  With rational ``(sin, cos)`` pairs
both tests reduce to comparing ``cos^2(m*phi)`` against ``cos^2(theta)``
and ``sin^2(theta)``, which is done over the integers.

``lkn`` family: with ``P = p_n..p_{n+k-1}`` and ``N = prod(P)``, yes means
``N | m``; no means at least ``2k/3`` primes have ``m mod p`` inside
``[p/8, 3p/8] U [5p/8, 7p/8]`` (closed bounds).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

import numpy as np

from . import kernels
from .automata import DEFAULT_BIT_BUDGET, BitBudgetExceeded
from .numtheory import ResidueConstraint, crt_solve, nth_prime, parse_rational, prime_window


class PromiseLabel(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNPROMISED = "Unpromised"

    def __str__(self) -> str:
        return self.value


_LABEL_CODES = (PromiseLabel.UNPROMISED, PromiseLabel.YES, PromiseLabel.NO)


@dataclass(frozen=True)
class PythagoreanAngle:
    """First-quadrant angle with rational sine and cosine."""

    sin: Fraction
    cos: Fraction

    def __post_init__(self) -> None:
        if self.sin * self.sin + self.cos * self.cos != 1:
            raise ValueError(f"sin^2 + cos^2 != 1 for ({self.sin}, {self.cos})")
        if not (0 < self.sin < 1 and 0 < self.cos < 1):
            raise ValueError("angle must lie strictly inside the first quadrant")

    @classmethod
    def from_sin(cls, sin) -> "PythagoreanAngle":
        s = parse_rational(sin)
        c2 = 1 - s * s
        if c2 <= 0:
            raise ValueError(f"sin = {s} leaves no positive cosine")
        num, den = math.isqrt(c2.numerator), math.isqrt(c2.denominator)
        if num * num != c2.numerator or den * den != c2.denominator:
            raise ValueError(f"cos = sqrt(1 - ({s})^2) is irrational; not a Pythagorean angle")
        return cls(s, Fraction(num, den))

    @property
    def gaussian(self) -> tuple[int, int, int]:
        """``(x, y, d)`` with ``cos = x/d`` and ``sin = y/d``."""
        d = math.lcm(self.sin.denominator, self.cos.denominator)
        return int(self.cos * d), int(self.sin * d), d

    def to_dict(self) -> dict:
        return {"sin": str(self.sin), "cos": str(self.cos)}


def _gaussian_mul(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def gaussian_power(x: int, y: int, m: int) -> tuple[int, int]:
    """``(x + iy)^m`` over the Gaussian integers."""
    result, base = (1, 0), (x, y)
    while m:
        if m & 1:
            result = _gaussian_mul(result, base)
        m >>= 1
        if m:
            base = _gaussian_mul(base, base)
    return result


@dataclass(frozen=True)
class LThetaProblem:
    phi: PythagoreanAngle
    theta: PythagoreanAngle

    def __post_init__(self) -> None:
        if not self.theta.sin < self.theta.cos:
            raise ValueError("theta must be below pi/4 (sin theta < cos theta)")

    @classmethod
    def from_sines(cls, phi_sin, theta_sin) -> "LThetaProblem":
        return cls(PythagoreanAngle.from_sin(phi_sin), PythagoreanAngle.from_sin(theta_sin))

    @property
    def yes_bound(self) -> Fraction:
        return self.theta.cos * self.theta.cos

    @property
    def no_bound(self) -> Fraction:
        return self.theta.sin * self.theta.sin

    def to_dict(self) -> dict:
        return {"family": "theta", "phi": self.phi.to_dict(), "theta": self.theta.to_dict()}


@dataclass(frozen=True)
class LknProblem:
    k: int
    n: int
    primes: tuple[int, ...] = field(init=False)
    N: int = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 1:
            raise ValueError(f"need k >= 1 and n >= 1, got k={self.k}, n={self.n}")
        primes = tuple(prime_window(self.n, self.k))
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "N", math.prod(primes))

    def to_dict(self) -> dict:
        return {"family": "lkn", "k": self.k, "n": self.n}


Problem = Union[LThetaProblem, LknProblem]


# -- theta family -----------------------------------------------------------


def _theta_label(problem: LThetaProblem, re: int, den_m: int) -> PromiseLabel:
    # cos^2(m phi) = re^2 / den_m^2
    lhs = re * re
    rhs = den_m * den_m
    yes, no = problem.yes_bound, problem.no_bound
    if lhs * yes.denominator >= yes.numerator * rhs:
        return PromiseLabel.YES
    if lhs * no.denominator <= no.numerator * rhs:
        return PromiseLabel.NO
    return PromiseLabel.UNPROMISED


def _check_theta_budget(problem: LThetaProblem, m: int, budget: int | None) -> None:
    if budget is None:
        return
    d = problem.phi.gaussian[2]
    needed = int(m * math.log2(d)) + 1
    if needed > budget:
        raise BitBudgetExceeded(needed, budget, what=f"cos({m}*phi)")


def theta_cos(problem: LThetaProblem, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> Fraction:
    """``cos(m*phi)`` exactly, read off the rational rotation power."""
    _check_theta_budget(problem, m, bit_budget)
    x, y, d = problem.phi.gaussian
    re, _ = gaussian_power(x, y, m)
    return Fraction(re, d**m)


def classify_theta(problem: LThetaProblem, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> PromiseLabel:
    if m < 0:
        raise ValueError("input length must be nonnegative")
    _check_theta_budget(problem, m, bit_budget)
    x, y, d = problem.phi.gaussian
    re, _ = gaussian_power(x, y, m)
    return _theta_label(problem, re, d**m)


def theta_labels(
    problem: LThetaProblem,
    start: int,
    stop: int,
    step: int = 1,
    bit_budget: int | None = DEFAULT_BIT_BUDGET,
) -> Iterator[tuple[int, PromiseLabel]]:
    """Labels along ``range(start, stop, step)``, multiplying by ``z^step`` each time."""
    if stop <= start:
        return
    x, y, d = problem.phi.gaussian
    _check_theta_budget(problem, start, bit_budget)
    z = gaussian_power(x, y, start)
    den = d**start
    zstep = gaussian_power(x, y, step)
    dstep = d**step
    for m in range(start, stop, step):
        _check_theta_budget(problem, m, bit_budget)
        yield m, _theta_label(problem, z[0], den)
        z = _gaussian_mul(z, zstep)
        den *= dstep


# -- lkn family -------------------------------------------------------------


def in_no_interval(r: int, p: int) -> bool:
    """``r`` in ``[p/8, 3p/8] U [5p/8, 7p/8]``, closed, tested over the integers."""
    return p <= 8 * r <= 3 * p or 5 * p <= 8 * r <= 7 * p


def satisfied_count(problem: LknProblem, m: int) -> int:
    return sum(1 for p in problem.primes if in_no_interval(m % p, p))


def classify_lkn(problem: LknProblem, m: int) -> PromiseLabel:
    if m < 0:
        raise ValueError("input length must be nonnegative")
    if m % problem.N == 0:
        return PromiseLabel.YES
    if 3 * satisfied_count(problem, m) >= 2 * problem.k:
        return PromiseLabel.NO
    return PromiseLabel.UNPROMISED


def lkn_label_codes(problem: LknProblem, start: int, stop: int) -> np.ndarray:
    """Label codes (0 unpromised, 1 yes, 2 no) for m in ``[start, stop)``."""
    return kernels.lkn_labels(problem.primes, start, max(0, stop - start))


def label_from_code(code: int) -> PromiseLabel:
    return _LABEL_CODES[int(code)]


def generate_no_instance_lkn(
    problem: LknProblem, satisfied: Iterable[int] | None = None, offset: int = 0
) -> int:
    """A no-instance built by Chinese remaindering.

    ``satisfied`` holds global prime indices (``3`` means ``p_3 = 5``) drawn
    from ``n..n+k-1``; ``None`` selects all of them.  Each selected prime
    gets the smallest residue inside its interval union, ``ceil(p/8)``; the
    rest get residue 0.  Results are ``K + offset*N``.
    """
    window = range(problem.n, problem.n + problem.k)
    chosen = set(window) if satisfied is None else set(satisfied)
    outside = chosen - set(window)
    if outside:
        raise ValueError(f"prime indices {sorted(outside)} are outside {problem.n}..{problem.n + problem.k - 1}")
    if 3 * len(chosen) < 2 * problem.k:
        raise ValueError(
            f"{len(chosen)} satisfied primes is fewer than 2k/3 for k={problem.k}"
        )
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    constraints = []
    for idx in window:
        p = nth_prime(idx)
        r = 0
        if idx in chosen:
            r = -(-p // 8)
            if not in_no_interval(r, p):
                raise ValueError(f"p = {p} has no integer residue inside the no-intervals")
        constraints.append(ResidueConstraint(r, p))
    return crt_solve(constraints) + offset * problem.N


# -- shared -----------------------------------------------------------------


def classify(problem: Problem, m: int, bit_budget: int | None = DEFAULT_BIT_BUDGET) -> PromiseLabel:
    if isinstance(problem, LknProblem):
        return classify_lkn(problem, m)
    return classify_theta(problem, m, bit_budget)


def iter_labels(
    problem: Problem, start: int, stop: int, bit_budget: int | None = DEFAULT_BIT_BUDGET
) -> Iterator[tuple[int, PromiseLabel]]:
    if isinstance(problem, LknProblem):
        codes = lkn_label_codes(problem, start, stop)
        for offset, code in enumerate(codes.tolist()):
            yield start + offset, _LABEL_CODES[code]
    else:
        yield from theta_labels(problem, start, stop, bit_budget=bit_budget)


def enumerate_promised(
    problem: Problem, limit: int, bit_budget: int | None = DEFAULT_BIT_BUDGET
) -> list[tuple[int, PromiseLabel]]:
    """Every promised ``m`` in ``[0, limit]`` with its label, ascending."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    return [
        (m, label)
        for m, label in iter_labels(problem, 0, limit + 1, bit_budget)
        if label is not PromiseLabel.UNPROMISED
    ]


def problem_from_dict(data: dict) -> Problem:
    family = data.get("family")
    if family == "theta":
        phi = PythagoreanAngle(parse_rational(data["phi"]["sin"]), parse_rational(data["phi"]["cos"]))
        theta = PythagoreanAngle(parse_rational(data["theta"]["sin"]), parse_rational(data["theta"]["cos"]))
        return LThetaProblem(phi, theta)
    if family == "lkn":
        return LknProblem(int(data["k"]), int(data["n"]))
    raise ValueError(f"unknown problem family {family!r}")
