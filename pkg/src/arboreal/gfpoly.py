"""Dense polynomial arithmetic and factorization over F_p (pure Python ints).

Used by the rational factorizer for its mod-p stage and as the reference
implementation the fast int64 kernels are tested against.  Polynomials are
lists of ints in [0, p), low-to-high, no trailing zeros.
"""

from .util import det_rng


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def from_int_coeffs(ints, p):
    return trim([c % p for c in ints])


def add(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                 for i in range(n)])


def sub(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                 for i in range(n)])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def scalar_mul(a, c, p):
    c %= p
    return trim([x * c % p for x in a])


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("gf division by zero")
    a = a[:]
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) - 1 >= db and a:
        trim(a)
        if len(a) - 1 < db or not a:
            break
        c = a[-1] * inv % p
        k = len(a) - 1 - db
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = (a[k + i] - c * y) % p
        a.pop()
    return trim(q), trim(a)


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def gcd(a, b, p):
    a, b = a[:], b[:]
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def pow_mod(base, e, f, p):
    """base^e mod (f, p)."""
    result = [1]
    base = mod(base, f, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), f, p)
        base = mod(mul(base, base, p), f, p)
        e >>= 1
    return result


def deriv(a, p):
    return trim([(i * c) % p for i, c in enumerate(a)][1:])


def eval_at(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_squarefree(a, p):
    d = deriv(a, p)
    if not d:
        return len(a) <= 1
    return len(gcd(a, d, p)) == 1


def squarefree_decomposition(f, p):
    """[(g_i, e_i)] with f = lc * prod g_i^e_i, g_i monic squarefree coprime."""
    out = []
    f = monic(f, p)

    def rec(f, mult):
        if len(f) <= 1:
            return
        d = deriv(f, p)
        if not d:
            # f = u(x^p) = u(x)^p in F_p[x]
            u = [f[i] for i in range(0, len(f), p)]
            rec(u, mult * p)
            return
        g = gcd(f, d, p)
        w = divmod_(f, g, p)[0]
        i = 1
        while len(w) > 1:
            y = gcd(w, g, p)
            z = divmod_(w, y, p)[0]
            if len(z) > 1:
                out.append((z, mult * i))
            g = divmod_(g, y, p)[0]
            w = y
            i += 1
        if len(g) > 1:
            rec(g, mult)

    rec(f, 1)
    # parts are pairwise coprime by construction; keep a deterministic order
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


def ddf(f, p):
    """Distinct-degree factorization of a monic squarefree f: [(product, d)]."""
    out = []
    f = monic(f, p)
    h = [0, 1]  # x
    x = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = pow_mod(h, p, f, p)
        g = gcd(sub(h, x, p), f, p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, p)[0]
            h = mod(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def degree_counts(f, p):
    """{d: number of irreducible factors of degree d} for monic squarefree f."""
    return {d: (len(g) - 1) // d for g, d in ddf(f, p)}


def degree_sequence(f, p):
    """Sorted degree multiset of the irreducible factors of squarefree f."""
    seq = []
    for d, cnt in degree_counts(f, p).items():
        seq.extend([d] * cnt)
    return tuple(sorted(seq))


def is_irreducible(f, p):
    """Monic f (degree >= 1), via distinct-degree factorization."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    if not is_squarefree(f, p):
        return False
    return degree_sequence(monic(f, p), p) == (n,)


def _edf(f, d, p, rng):
    """Equal-degree splitting (Cantor-Zassenhaus, odd p) of monic squarefree f
    whose irreducible factors all have degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    exponent = (p ** d - 1) // 2
    while True:
        r = [rng.randrange(p) for _ in range(n)] + [1]
        r = trim(r)
        g = gcd(r, f, p)
        if 1 < len(g) < len(f):
            pass
        else:
            t = sub(pow_mod(r, exponent, f, p), [1], p)
            g = gcd(t, f, p)
        if 0 < len(g) - 1 < n:
            return _edf(g, d, p, rng) + _edf(divmod_(f, g, p)[0], d, p, rng)


def factor(f, p):
    """Full factorization mod odd prime p: (lc, [(monic irreducible, e)]),
    deterministic (splitting randomness is seeded from f and p)."""
    if p == 2:
        raise ValueError("factor() requires an odd prime")
    if not f:
        raise ValueError("cannot factor zero")
    lc = f[-1] % p
    rng = det_rng("edf", p, tuple(f))
    out = []
    for g, e in squarefree_decomposition(f, p):
        for part, d in ddf(g, p):
            for irr in _edf(part, d, p, rng):
                out.append((monic(irr, p), e))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return lc, out
