"""Integer and rational utilities: primes, gcd/lcm, Chinese remaindering.

Primes are indexed from 1, so ``nth_prime(1) == 2``.  Rationals are the
standard library :class:`fractions.Fraction`, which is always reduced and
never rounds.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` into an exact Fraction.

    Decimal notation is refused on purpose: ``"0.1"`` would silently mean
    1/10 here but means something else as a float.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction | int) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class ResidueConstraint:
    """The congruence ``x = residue (mod modulus)``."""

    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.modulus})"
            )


# -- primes -----------------------------------------------------------------

_sieve_lock = threading.Lock()
_primes: list[int] = [2, 3, 5, 7, 11, 13]
_sieve_limit = 16


def _sieve_upto(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i in range(limit + 1) if flags[i]]


def _ensure_primes(count: int) -> None:
    global _primes, _sieve_limit
    if len(_primes) >= count:
        return
    with _sieve_lock:
        limit = _sieve_limit
        while len(_primes) < count:
            # p_n < n (ln n + ln ln n) for n >= 6
            estimate = count * (math.log(count) + math.log(math.log(count))) if count >= 6 else 16
            limit = max(2 * limit, int(estimate) + 16)
            _primes = _sieve_upto(limit)
            _sieve_limit = limit


def is_prime(n: int) -> bool:
    """Deterministic trial division; adequate for the sub-10^7 range used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def nth_prime(n: int) -> int:
    if n < 1:
        raise ValueError(f"prime index must be >= 1, got {n}")
    _ensure_primes(n)
    return _primes[n - 1]


def prime_window(n: int, k: int) -> list[int]:
    """The ``k`` consecutive primes ``p_n, ..., p_{n+k-1}``."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    _ensure_primes(n + k - 1)
    return _primes[n - 1 : n + k - 1]


# -- gcd / lcm / crt --------------------------------------------------------


def lcm_list(values: Iterable[int]) -> int:
    values = list(values)
    if not values:
        raise ValueError("lcm of an empty list is undefined")
    if any(v < 1 for v in values):
        raise ValueError(f"lcm_list expects positive integers, got {values}")
    return reduce(math.lcm, values, 1)


def crt_solve(constraints: Sequence[ResidueConstraint]) -> int:
    """Smallest nonnegative ``K`` meeting every congruence.

    The moduli must be pairwise coprime; all solutions are then
    ``K + t * prod(moduli)``.
    """
    constraints = list(constraints)
    for i, a in enumerate(constraints):
        for b in constraints[i + 1 :]:
            g = math.gcd(a.modulus, b.modulus)
            if g != 1:
                raise ValueError(
                    f"moduli {a.modulus} and {b.modulus} are not coprime (gcd {g})"
                )
    x, m = 0, 1
    for c in constraints:
        # x + m*t = c.residue (mod c.modulus)
        inv = pow(m, -1, c.modulus)
        t = ((c.residue - x) * inv) % c.modulus
        x += m * t
        m *= c.modulus
    return x % m


def bit_length(value: Fraction | int) -> int:
    """Bits needed to store a rational: the larger of numerator and denominator."""
    value = Fraction(value)
    return max(abs(value.numerator).bit_length(), value.denominator.bit_length())
