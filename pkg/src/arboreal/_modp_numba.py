"""numba @njit kernels for dense polynomial arithmetic over F_p on int64
arrays (low-to-high coefficients).  Callers guarantee (p-1)^2 * len < 2^63.
"""

import numpy as np
from numba import njit

I64 = np.int64


@njit(cache=True)
def _trim_len(a):
    n = a.shape[0]
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return n


@njit(cache=True)
def mul(a, b, p):
    la, lb = a.shape[0], b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=I64)
    out = np.zeros(la + lb - 1, dtype=I64)
    for i in range(la):
        ai = a[i]
        if ai != 0:
            for j in range(lb):
                out[i + j] = (out[i + j] + ai * b[j]) % p
    return out[:_trim_len(out)].copy()


@njit(cache=True)
def rem(a, f, p):
    """a mod f, f monic-normalizable (lc invertible)."""
    df = f.shape[0] - 1
    r = a % p
    n = _trim_len(r)
    r = r[:n].copy()
    inv = _scalar_inv(f[df], p)
    while r.shape[0] - 1 >= df and r.shape[0] > 0:
        n = _trim_len(r)
        if n - 1 < df:
            break
        c = r[n - 1] * inv % p
        k = n - 1 - df
        for i in range(df + 1):
            r[k + i] = (r[k + i] - c * f[i]) % p
        r = r[:_trim_len(r)].copy()
    return r[:_trim_len(r)].copy()


@njit(cache=True)
def _scalar_inv(x, p):
    return _scalar_pow(x % p, p - 2, p)


@njit(cache=True)
def _scalar_pow(x, e, p):
    r = 1
    b = x % p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def monic(a, p):
    n = _trim_len(a)
    out = a[:n] % p
    if n == 0:
        return out.copy()
    inv = _scalar_inv(out[n - 1], p)
    for i in range(n):
        out[i] = out[i] * inv % p
    return out.copy()


@njit(cache=True)
def gcd(a, b, p):
    x = a[:_trim_len(a)].copy() % p
    y = b[:_trim_len(b)].copy() % p
    while y.shape[0] > 0:
        r = rem(x, y, p)
        x = y
        y = r
    return monic(x, p)


@njit(cache=True)
def pow_mod(base, e, f, p):
    result = np.ones(1, dtype=I64)
    b = rem(base, f, p)
    while e > 0:
        if e & 1:
            result = rem(mul(result, b, p), f, p)
        b = rem(mul(b, b, p), f, p)
        e >>= 1
    return result


@njit(cache=True)
def deriv(a, p):
    n = a.shape[0]
    if n <= 1:
        return np.zeros(0, dtype=I64)
    out = np.zeros(n - 1, dtype=I64)
    for i in range(1, n):
        out[i - 1] = (i * a[i]) % p
    return out[:_trim_len(out)].copy()


@njit(cache=True)
def is_squarefree(a, p):
    d = deriv(a, p)
    if d.shape[0] == 0:
        return a.shape[0] <= 2
    return gcd(a, d, p).shape[0] == 1


@njit(cache=True)
def ddf_counts(f_in, p):
    """counts[d] = number of degree-d irreducible factors of monic
    squarefree f; counts has length deg(f)+1."""
    f = monic(f_in, p)
    degf = f.shape[0] - 1
    counts = np.zeros(degf + 1, dtype=I64)
    x = np.zeros(2, dtype=I64)
    x[1] = 1
    h = x.copy()
    d = 0
    while f.shape[0] - 1 >= 2 * (d + 1):
        d += 1
        h = pow_mod(h, p, f, p)
        diff = np.zeros(max(h.shape[0], 2), dtype=I64)
        for i in range(h.shape[0]):
            diff[i] = h[i]
        diff[1] = (diff[1] - 1) % p
        g = gcd(diff, f, p)
        if g.shape[0] > 1:
            counts[d] += (g.shape[0] - 1) // d
            q = _exact_div(f, g, p)
            f = q
            h = rem(h, f, p)
    if f.shape[0] > 1:
        counts[f.shape[0] - 1] += 1
    return counts


@njit(cache=True)
def _exact_div(a, b, p):
    db = b.shape[0] - 1
    da = a.shape[0] - 1
    q = np.zeros(da - db + 1, dtype=I64)
    r = a.copy()
    inv = _scalar_inv(b[db], p)
    for k in range(da - db, -1, -1):
        c = r[k + db] * inv % p
        q[k] = c
        if c != 0:
            for i in range(db + 1):
                r[k + i] = (r[k + i] - c * b[i]) % p
    return q


@njit(cache=True)
def compose_step(outer, inner, p):
    """outer(inner(x)) by Horner over polynomial coefficients."""
    acc = np.zeros(1, dtype=I64)
    acc[0] = outer[outer.shape[0] - 1] % p
    for k in range(outer.shape[0] - 2, -1, -1):
        acc = mul(acc, inner, p)
        if acc.shape[0] == 0:
            acc = np.zeros(1, dtype=I64)
        acc2 = acc.copy()
        acc2[0] = (acc2[0] + outer[k]) % p
        acc = acc2[:_trim_len(acc2)].copy()
    return acc
