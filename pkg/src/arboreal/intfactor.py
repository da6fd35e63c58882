"""Integer primality and factorization: trial division, then Brent's variant
of Pollard rho with a fixed seed so runs are reproducible.

Primality is deterministic Miller-Rabin for n < 3.3e24 (fixed witness set);
larger inputs use the same witnesses, which is probabilistic but has no known
counterexample.
"""

import math
from dataclasses import dataclass

from .errors import TimeBudgetExceeded
from .util import TimeBudget, det_rng

TRIAL_LIMIT = 10 ** 6

# Deterministic for n < 3,317,044,064,679,887,385,961,981 (covers desk scale).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(limit):
    """All primes < limit, as a Python list."""
    if limit <= 2:
        return []
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, limit, i)))
    return [i for i in range(limit) if sieve[i]]


def primes_in_range(lo, hi):
    """Primes p with lo <= p <= hi (inclusive), ascending."""
    lo = max(lo, 2)
    if hi < lo:
        return []
    return [p for p in sieve_primes(hi + 1) if p >= lo]


@dataclass(frozen=True)
class IntFactorization:
    """sign * prod(p^e) * cofactor reconstructs the input exactly.

    ``complete`` is False only when a time budget interrupted the search,
    in which case ``cofactor`` is the remaining composite part.
    """
    sign: int
    factors: tuple  # ((prime, exponent), ...) primes strictly increasing
    cofactor: int = 1
    complete: bool = True

    def value(self):
        v = self.sign * self.cofactor
        for p, e in self.factors:
            v *= p ** e
        return v

    def distinct_primes(self):
        return [p for p, _ in self.factors]

    def as_dict(self):
        return {
            "sign": self.sign,
            "factors": [[p, e] for p, e in self.factors],
            "cofactor": str(self.cofactor),
            "complete": self.complete,
        }


def _brent_rho(n, rng):
    """One nontrivial factor of composite odd n (Brent's cycle detection)."""
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_integer(n, budget=None):
    """Exact factorization of a nonzero integer, deterministic for a fixed seed.

    Under a time budget, raises TimeBudgetExceeded carrying the partial
    factorization (complete=False, composite cofactor recorded).
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    if budget is None:
        budget = TimeBudget(None)
    sign = 1 if n > 0 else -1
    n = abs(n)
    counts = {}

    for p in (2, 3, 5):
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    # wheel over 6k+-1 up to the trial limit
    d = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    si = 0
    while d <= TRIAL_LIMIT and d * d <= n:
        if n % d == 0:
            counts[d] = counts.get(d, 0) + 1
            n //= d
        else:
            d += steps[si]
            si = (si + 1) % len(steps)
        if si == 0 and budget.expired():
            fac = _as_factorization(sign, counts, n)
            raise TimeBudgetExceeded("factorization budget hit in trial division", partial=fac)

    stack = [n] if n > 1 else []
    rng = det_rng("rho", sign * n)
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend([r, r])
            continue
        if budget.expired():
            rest = m
            for x in stack:
                rest *= x
            fac = _as_factorization(sign, counts, rest)
            raise TimeBudgetExceeded("factorization budget hit in rho", partial=fac)
        g = _brent_rho(m, rng)
        stack.extend([g, m // g])

    return _as_factorization(sign, counts, 1)


def _as_factorization(sign, counts, cofactor):
    facs = tuple(sorted(counts.items()))
    return IntFactorization(sign=sign, factors=facs, cofactor=cofactor,
                            complete=(cofactor == 1))
