"""Exact rational scalars, n-adic predicates and the circle metric.

Every breakpoint, slope and circle point in the package is a GMP
rational (``gmpy2.mpq``), exposed here as :data:`Q`.  It compares and
hashes equal to :class:`fractions.Fraction`, so either may be passed in.
A *circle point* is the canonical representative of ``x + Z`` in
``[0, 1)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Union

from gmpy2 import mpq as Q

NRational = type(Q())

Rational = Union[int, Fraction, NRational]


class ZeroDenominator(ZeroDivisionError):
    pass


class NonPositive(ValueError):
    pass


def nrat(p: int, q: int = 1) -> NRational:
    """Reduced fraction ``p/q`` with positive denominator.

    >>> nrat(56, 128)
    mpq(7,16)
    >>> nrat(7, -128)
    mpq(-7,128)
    """
    if q == 0:
        raise ZeroDenominator(f"zero denominator in {p}/{q}")
    return Q(p, q)


def parse_rational(text: str) -> NRational:
    """Parse ``"p/q"`` (or a bare integer) into a reduced fraction."""
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return nrat(int(p), int(q))
    return nrat(int(text))


def format_rational(x: Rational) -> str:
    """``"p/q"`` in reduced form; integers keep an explicit ``/1``."""
    x = Q(x)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=None)
def _radical_divides(q: int, n: int) -> bool:
    # strip from q every prime shared with n; n-adic iff nothing is left
    g = gcd(q, n)
    while g > 1:
        while q % g == 0:
            q //= g
        g = gcd(q, n)
    return q == 1


def is_n_adic(x: Rational, n: int) -> bool:
    """True iff every prime factor of the reduced denominator of x divides n."""
    if n < 2:
        raise ValueError(f"arity must be >= 2, got {n}")
    return _radical_divides(Q(x).denominator, n)


def power_of_n_exponent(x: Rational, n: int) -> Optional[int]:
    """Return k with ``x == n**k`` exactly, or None."""
    x = Q(x)
    if x <= 0:
        raise NonPositive(f"{x} is not positive")
    if n < 2:
        raise ValueError(f"arity must be >= 2, got {n}")
    p, q = x.numerator, x.denominator
    if p != 1 and q != 1:
        return None
    m, sign = (p, 1) if q == 1 else (q, -1)
    k = 0
    while m % n == 0:
        m //= n
        k += 1
    return sign * k if m == 1 else None


def to_circle(x: Rational) -> NRational:
    """Canonical representative of ``x + Z`` in ``[0, 1)``."""
    return Q(x) % 1


def circle_distance(x: Rational, y: Rational) -> NRational:
    """Arclength distance on R/Z."""
    d = Q(x - y) % 1
    return min(d, 1 - d)
