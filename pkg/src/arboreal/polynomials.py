"""Dense univariate polynomials over Q.

Coefficients are Fractions stored low-to-high with no trailing zeros; the zero
polynomial has an empty coefficient tuple.  The ASCII form is the usual
"x^3 - 12*x + 2"; rationals print as "p/q".
"""

import re
from fractions import Fraction
from math import gcd as igcd

from .errors import ParseError


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def from_roots(cls, roots):
        p = cls.one()
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    # -- basics --------------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def __bool__(self):
        return not self.is_zero

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([c * other for c in self.coeffs])
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = UniPoly.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        dlc = other.lc
        dd = other.degree
        while len(r) - 1 >= dd and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < dd:
                break
            k = len(r) - 1 - dd
            c = r[-1] / dlc
            q[k] = c
            for i, b in enumerate(other.coeffs):
                r[k + i] -= c * b
            r.pop()
        return UniPoly(q), UniPoly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        """True iff self divides other exactly."""
        if self.is_zero:
            return other.is_zero
        return (other % self).is_zero

    # -- calculus / evaluation -------------------------------------------

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Evaluate at a Fraction (Horner)."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner):
        """self(inner(x)) as a polynomial."""
        acc = UniPoly.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.constant(c)
        return acc

    def shift(self, t):
        """self(x + t)."""
        return self.compose(UniPoly((Fraction(t), 1)))

    def monic(self):
        if self.is_zero:
            return self
        l = self.lc
        return UniPoly([c / l for c in self.coeffs])

    # -- gcd / resultant ---------------------------------------------------

    def gcd(self, other):
        """Monic gcd over Q."""
        a, b = self, _as_poly(other)
        while not b.is_zero:
            a, b = b, a % b
        return a.monic() if not a.is_zero else a

    # -- integer form --------------------------------------------------------

    def primitive(self):
        """(content, primitive integer coefficient list) with
        content * primitive == self and gcd of the integer coefficients 1,
        positive leading coefficient."""
        if self.is_zero:
            return Fraction(0), [0]
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // igcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = igcd(g, abs(v))
        ints = [v // g for v in ints]
        sign = 1
        if ints[-1] < 0:
            sign = -1
            ints = [-v for v in ints]
        return Fraction(sign * g, den), ints

    @classmethod
    def from_int_coeffs(cls, ints):
        return cls([Fraction(v) for v in ints])

    # -- text form -------------------------------------------------------------

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                term = _fmt_q(mag)
            else:
                xpow = "x" if i == 1 else f"x^{i}"
                term = xpow if mag == 1 else f"{_fmt_q(mag)}*{xpow}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"UniPoly({self!s})"

    _TOKEN = re.compile(r"\s*(?:(?P<num>\d+/\d+|\d+)|(?P<x>x)|(?P<op>[-+*^()]))")

    @classmethod
    def parse(cls, text):
        """Parse "x^3 - 12*x + 2" (signs, optional '*', '^' powers, "p/q")."""
        pos = 0
        tokens = []
        while pos < len(text):
            m = cls._TOKEN.match(text, pos)
            if not m:
                bad = text[pos:].split()[0] if text[pos:].split() else text[pos:]
                raise ParseError(f"unexpected token {bad!r} in polynomial", token=bad)
            pos = m.end()
            tokens.append(m.group().strip())
        tokens = [t for t in tokens if t]
        if not tokens:
            raise ParseError("empty polynomial", token="")

        def term(i):
            # [sign] coeff ['*'] ['x' ['^' k]]  |  [sign] 'x' ['^' k]
            sign = Fraction(1)
            while i < len(tokens) and tokens[i] in "+-":
                if tokens[i] == "-":
                    sign = -sign
                i += 1
            if i >= len(tokens):
                raise ParseError("dangling sign in polynomial", token=tokens[-1])
            coeff = Fraction(1)
            power = 0
            if tokens[i] not in ("x",):
                if not re.fullmatch(r"\d+/\d+|\d+", tokens[i]):
                    raise ParseError(f"unexpected token {tokens[i]!r} in polynomial",
                                     token=tokens[i])
                coeff = Fraction(tokens[i])
                i += 1
                if i < len(tokens) and tokens[i] == "*":
                    i += 1
            if i < len(tokens) and tokens[i] == "x":
                power = 1
                i += 1
                if i < len(tokens) and tokens[i] == "^":
                    i += 1
                    if i >= len(tokens) or not tokens[i].isdigit():
                        raise ParseError("missing exponent after '^'",
                                         token=tokens[i] if i < len(tokens) else "^")
                    power = int(tokens[i])
                    i += 1
            return sign * coeff, power, i

        coeffs = {}
        i = 0
        while i < len(tokens):
            c, k, i = term(i)
            coeffs[k] = coeffs.get(k, Fraction(0)) + c
        top = max(coeffs)
        return cls([coeffs.get(k, Fraction(0)) for k in range(top + 1)])


def _as_poly(v):
    if isinstance(v, UniPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return UniPoly.constant(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to UniPoly")


def _fmt_q(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def resultant(f, g):
    """Res(f, g) over Q via the Euclidean remainder sequence."""
    f, g = _as_poly(f), _as_poly(g)
    if f.is_zero or g.is_zero:
        return Fraction(0)
    res = Fraction(1)
    a, b = f, g
    while b.degree > 0:
        r = a % b
        if r.is_zero:
            return Fraction(0)
        res *= Fraction(-1) ** (a.degree * b.degree) * b.lc ** (a.degree - r.degree)
        a, b = b, r
    # b is a nonzero constant
    return res * b.lc ** a.degree


def discriminant(f):
    """disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)."""
    f = _as_poly(f)
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = Fraction(-1) ** (d * (d - 1) // 2)
    return sign * resultant(f, f.derivative()) / f.lc
