"""Map types: the normal-form cubic x^3 - 3a^2 x + b and general polynomial
maps of degree >= 2, plus normalization of an arbitrary cubic into normal form.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import NeedsExtension, NotCubicError
from .polynomials import UniPoly
from .rationals import is_rational_square


@dataclass(frozen=True)
class CubicMap:
    """f(x) = x^3 - 3a^2 x + b with critical points +a and -a.

    a = 0 is accepted (single finite critical point); certification paths
    flag it as an obstruction rather than rejecting it.
    """
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @property
    def p_coeff(self):
        return -3 * self.a ** 2

    @property
    def q_coeff(self):
        return self.b

    def poly(self):
        return UniPoly((self.b, self.p_coeff, 0, 1))

    @property
    def degree(self):
        return 3

    def critical_points(self):
        return (self.a, -self.a)

    def critical_values(self):
        a, b = self.a, self.b
        return (-2 * a ** 3 + b, 2 * a ** 3 + b)

    def is_odd(self):
        return self.b == 0

    def __call__(self, x):
        x = Fraction(x)
        return x ** 3 + self.p_coeff * x + self.b

    def __str__(self):
        return str(self.poly())


@dataclass(frozen=True)
class PolyMap:
    """An arbitrary polynomial map over Q of degree >= 2."""
    poly_: UniPoly

    def __post_init__(self):
        if self.poly_.degree < 2:
            raise ValueError("PolyMap needs degree >= 2")

    def poly(self):
        return self.poly_

    @property
    def degree(self):
        return self.poly_.degree

    def __call__(self, x):
        return self.poly_(Fraction(x))

    def __str__(self):
        return str(self.poly_)


def as_unipoly(f):
    if isinstance(f, UniPoly):
        return f
    return f.poly()


def as_map(f):
    """Coerce a UniPoly into a map object (cubic normal form recognized)."""
    if isinstance(f, (CubicMap, PolyMap)):
        return f
    g = f
    if g.degree == 3 and g.lc == 1 and g[2] == 0:
        p = g[1]
        a2 = -p / 3
        if is_rational_square(a2):
            from math import isqrt
            a = Fraction(isqrt(a2.numerator), isqrt(a2.denominator))
            return CubicMap(a, g[0])
    return PolyMap(g)


@dataclass(frozen=True)
class NormalizedCubic:
    """Result of normalize_cubic: the normal-form map plus the conjugating
    change of variables sigma(x) = lam*x + mu carrying the input map's
    dynamics onto the normal form (beta values transport via sigma)."""
    map: CubicMap
    lam: Fraction
    mu: Fraction
    single_critical_point: bool


def normalize_cubic(c3, c2, c1, c0):
    """Conjugate c3 x^3 + c2 x^2 + c1 x + c0 to x^3 - 3a^2 x + b over Q.

    With sigma(x) = lam*x + mu and lam^2 = c3, mu = c2/(3*lam), the conjugate
    sigma o g o sigma^(-1) is monic with no quadratic term.  Raises
    NotCubic when c3 = 0 and NeedsExtension (with the minimal polynomial of
    the missing generator) when lam or a is irrational.
    """
    c3, c2, c1, c0 = (Fraction(c) for c in (c3, c2, c1, c0))
    if c3 == 0:
        raise NotCubicError("leading coefficient is zero")
    # linear coefficient of the conjugate is invariant of lam's sign:
    # P = c1 - c2^2 / (3 c3)
    P = c1 - c2 ** 2 / (3 * c3)
    a2 = -P / 3
    if not is_rational_square(c3):
        if is_rational_square(a2):
            minpoly = UniPoly((-c3, 0, 1))  # lam^2 - c3
        else:
            minpoly = UniPoly((-a2, 0, 1))
        raise NeedsExtension(
            "normal form needs a quadratic extension (leading coefficient "
            "is not a rational square)", minimal_poly=minpoly)
    from math import isqrt
    lam = Fraction(isqrt(c3.numerator), isqrt(c3.denominator))
    mu = c2 / (3 * lam)
    if not is_rational_square(a2):
        raise NeedsExtension(
            "normal form needs a quadratic extension (a^2 = "
            f"{a2} is not a rational square)",
            minimal_poly=UniPoly((-a2, 0, 1)))
    a = Fraction(isqrt(a2.numerator), isqrt(a2.denominator))
    # constant term: conjugate and read it off exactly
    g = UniPoly((c0, c1, c2, c3))
    conj = (g.compose(UniPoly((-mu / lam, Fraction(1) / lam))) * lam
            + UniPoly.constant(mu))
    assert conj.lc == 1 and conj[2] == 0 and conj[1] == P
    b = conj[0]
    return NormalizedCubic(map=CubicMap(a, b), lam=lam, mu=mu,
                           single_critical_point=(a == 0))
