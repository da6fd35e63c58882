"""Exact rationals: parsing, printing, p-adic valuations, square tests.

Rationals are stdlib fractions.Fraction values throughout: always reduced,
denominator >= 1, zero is 0/1.  The text form is "p/q" or "p".
"""

import math
from fractions import Fraction

from .errors import NotPrimeError, ParseError
from .intfactor import is_prime

INF = math.inf


def parse_rational(text):
    """Parse "p/q" or "p" into a Fraction."""
    s = text.strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational: {text!r}", token=s)


def fmt_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def valuation(q, p):
    """Exact p-adic valuation of a rational; +inf for 0.

    Raises NotPrimeError if p fails a primality check.
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return INF
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def vplus(q, p):
    """max(valuation, 0), with 0 mapping to +inf clipped to +inf."""
    v = valuation(q, p)
    return v if v == INF else max(0, v)


def is_rational_square(q):
    """Exact test: q is the square of a rational."""
    q = Fraction(q)
    if q < 0:
        return False
    if q == 0:
        return True
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d
