"""Factorization over Q: squarefree parts, rational roots, and a Zassenhaus
factorizer (factor mod p, linear Hensel lift, exhaustive recombination).

The degree cap (default 243 = 3^5) bounds the inputs this is asked to handle;
there is deliberately no LLL recombination beyond it.
"""

import math
from fractions import Fraction

from . import gfpoly
from .errors import DegreeBudgetExceeded
from .intfactor import factor_integer, sieve_primes
from .polynomials import UniPoly

DEFAULT_DEGREE_CAP = 243


def squarefree_part(g):
    """g / gcd(g, g'), monic; its roots are the distinct roots of g."""
    if g.is_zero:
        raise ValueError("squarefree part of zero polynomial")
    d = g.derivative()
    if d.is_zero:
        return g.monic() if g.degree == 0 else _sqfree_char0_power(g)
    return (g // g.gcd(d)).monic()


def _sqfree_char0_power(g):
    # degree >= 1 with zero derivative cannot happen over Q
    raise AssertionError("nonconstant polynomial over Q with zero derivative")


def yun_squarefree(g):
    """Yun's algorithm over Q: [(s_i monic squarefree, i)] with
    g = lc * prod s_i^i, the s_i pairwise coprime."""
    f = g.monic()
    out = []
    d = f.derivative()
    a = f.gcd(d)
    b = f // a
    c = d // a
    i = 1
    while b.degree > 0:
        z = c - b.derivative()
        s = b.gcd(z)
        if s.degree > 0:
            out.append((s.monic(), i))
        b = b // s
        c = z // s
        i += 1
    return out


def rational_roots(g, budget=None):
    """All rational roots of g, each listed once, sorted."""
    if g.is_zero:
        raise ValueError("zero polynomial")
    _, ints = squarefree_part(g).primitive()
    # strip x^k
    k = 0
    while ints[k] == 0:
        k += 1
    ints = ints[k:]
    roots = [Fraction(0)] if k else []
    if len(ints) == 1:
        return sorted(roots)
    a0, an = abs(ints[0]), abs(ints[-1])
    ps = [p ** e for p, e in factor_integer(a0, budget).factors]
    qs = [p ** e for p, e in factor_integer(an, budget).factors]
    num_divs = _divisors_from_powers(ps)
    den_divs = _divisors_from_powers(qs)
    poly = UniPoly.from_int_coeffs(ints)
    seen = set()
    for n in num_divs:
        for d in den_divs:
            for cand in (Fraction(n, d), Fraction(-n, d)):
                if cand not in seen and poly(cand) == 0:
                    seen.add(cand)
                    roots.append(cand)
    return sorted(roots)


def _divisors_from_powers(prime_powers):
    divs = [1]
    for pe in prime_powers:
        p = _base_of(pe)
        block = []
        for d in divs:
            q = 1
            while True:
                block.append(d * q)
                if q == pe:
                    break
                q *= p
        divs = block
    return sorted(set(divs))


def _base_of(pe):
    for p in range(2, pe + 1):
        if pe % p == 0:
            return p
    return pe


# ---------------------------------------------------------------------------
# Zassenhaus machinery
# ---------------------------------------------------------------------------

def _mignotte_bound(ints):
    """Coefficient bound for any integer factor of the given primitive poly."""
    n = len(ints) - 1
    norm2 = math.isqrt(sum(c * c for c in ints)) + 1
    return (1 << n) * norm2 * abs(ints[-1])


def _hensel_lift(T, facs, p, pk_target):
    """Lift T = lc * prod(facs) (mod p), facs monic pairwise coprime mod p,
    to the same congruence mod pk_target, linearly one p-power at a time.

    Returns the lifted monic factor list (coefficients in [0, pk_target)).
    """
    r = len(facs)
    lc = T[-1]
    # partial-fraction inverses: w_i = (prod_{j != i} f_j)^(-1) mod (f_i, p)
    ws = []
    for i in range(r):
        prod = [lc % p]
        for j in range(r):
            if j != i:
                prod = gfpoly.mul(prod, facs[j], p)
        prod = gfpoly.mod(prod, facs[i], p)
        ws.append(_gf_inverse(prod, facs[i], p))

    cur = [f[:] for f in facs]
    pk = p
    while pk < pk_target:
        # e = (T - lc*prod) / pk  mod p
        prod = [lc % (pk * p)]
        for f in cur:
            prod = _zmul(prod, f, pk * p)
        diff = _zsub(T, prod, pk * p)
        assert all(c % pk == 0 for c in diff)
        e = gfpoly.from_int_coeffs([c // pk for c in diff], p)
        for i in range(r):
            delta = gfpoly.mod(gfpoly.mul(e, ws[i], p), cur[i], p)
            for k, c in enumerate(delta):
                cur[i][k] = (cur[i][k] + pk * c) % (pk * p)
        pk *= p
    return cur, pk


def _gf_inverse(a, f, p):
    """a^(-1) mod (f, p) by extended Euclid."""
    r0, r1 = f[:], a[:]
    s0, s1 = [], [1]
    while r1:
        q, r = gfpoly.divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, gfpoly.sub(s0, gfpoly.mul(q, s1, p), p)
    assert len(r0) == 1
    inv = pow(r0[0], p - 2, p)
    return gfpoly.scalar_mul(s0, inv, p)


def _zmul(a, b, m):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    while out and out[-1] == 0:
        out.pop()
    return out


def _zsub(a, b, m):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m
            for i in range(n)]


def _symmetric(c, m):
    return c - m if c > m // 2 else c


def _int_primitive(ints):
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if g == 0:
        return ints
    ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_divides(cand, T):
    """Exact division test of primitive integer polys: cand | T."""
    q, r = divmod(UniPoly.from_int_coeffs(T), UniPoly.from_int_coeffs(cand))
    if not r.is_zero:
        return None
    _, qi = q.primitive()
    return q, qi


_PRIME_POOL = None


def _prime_pool():
    global _PRIME_POOL
    if _PRIME_POOL is None:
        _PRIME_POOL = sieve_primes(10 ** 4)
    return _PRIME_POOL


def _factor_squarefree_ints(ints, budget=None):
    """Irreducible primitive integer factors of a squarefree primitive integer
    polynomial (degree >= 1), via Zassenhaus."""
    n = len(ints) - 1
    if n == 1:
        return [ints]

    # choose the odd prime (squarefree reduction, unit lc) with fewest modular
    # factors among a handful of candidates
    best = None
    tried = 0
    for p in _prime_pool():
        if p == 2 or ints[-1] % p == 0:
            continue
        fp = gfpoly.from_int_coeffs(ints, p)
        if not gfpoly.is_squarefree(fp, p):
            continue
        lcp, facs = gfpoly.factor(fp, p)
        tried += 1
        if best is None or len(facs) < len(best[1]):
            best = (p, [g for g, _ in facs])
        if len(facs) == 1 or tried >= 4:
            break
    assert best is not None, "ran out of candidate primes"
    p, modular = best
    if len(modular) == 1:
        return [ints]

    bound = _mignotte_bound(ints)
    target = 1
    while target <= 2 * bound:
        target *= p
    lifted, pk = _hensel_lift(ints, modular, p, target)

    # exhaustive recombination by subset size
    T = ints[:]
    remaining = list(range(len(lifted)))
    found = []
    size = 1
    while 2 * size <= len(remaining):
        if budget is not None:
            budget.check(what="factor recombination")
        hit = _try_subsets(T, lifted, remaining, size, pk)
        if hit is None:
            size += 1
            continue
        subset, factor_ints, quotient_ints = hit
        found.append(factor_ints)
        for i in subset:
            remaining.remove(i)
        T = quotient_ints
    if len(T) > 1:
        found.append(_int_primitive(T))
    return found


def _try_subsets(T, lifted, remaining, size, pk):
    from itertools import combinations

    lc = T[-1]
    for subset in combinations(remaining, size):
        cand = [lc % pk]
        for i in subset:
            cand = _zmul(cand, lifted[i], pk)
        cand = [_symmetric(c, pk) for c in cand]
        cand = _int_primitive(cand)
        res = _int_divides(cand, T)
        if res is not None:
            _, qi = res
            return list(subset), cand, qi
    return None


def factor_polynomial(g, degree_cap=DEFAULT_DEGREE_CAP, budget=None):
    """Factor g over Q: (content, [(monic irreducible, multiplicity)]) with
    content * prod(f^e) == g exactly.  Factors sorted by (degree, coeffs)."""
    if g.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if g.degree > degree_cap:
        raise DegreeBudgetExceeded(f"degree {g.degree} exceeds cap {degree_cap}")
    content = g.lc
    if g.degree == 0:
        return content, []
    factors = []
    for s, mult in yun_squarefree(g):
        _, ints = s.primitive()
        # peel rational roots first (cheap, and covers degree <= 3 conclusively
        # together with the irreducibility of what remains)
        work = UniPoly.from_int_coeffs(ints)
        for r in rational_roots(work, budget):
            root_factor = UniPoly((-r, 1))
            while root_factor.divides(work):
                work = work // root_factor
                factors.append((root_factor, mult))
                break  # squarefree: each root appears once
        if work.degree >= 1:
            if work.degree <= 3:
                # no rational roots left: degree 2 or 3 is irreducible
                factors.append((work.monic(), mult))
            else:
                _, wints = work.primitive()
                for fac_ints in _factor_squarefree_ints(wints, budget):
                    factors.append((UniPoly.from_int_coeffs(fac_ints).monic(), mult))
    factors.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    check = UniPoly.constant(content)
    for f, e in factors:
        check = check * f ** e
    assert check == g, "factorization failed round-trip"
    return content, factors


def is_irreducible_over_q(g, degree_cap=DEFAULT_DEGREE_CAP, budget=None):
    _, facs = factor_polynomial(g, degree_cap, budget)
    return len(facs) == 1 and facs[0][1] == 1
