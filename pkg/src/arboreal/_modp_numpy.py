"""Pure-numpy fallback for the F_p kernels (same API as the numba versions).

Convolution-heavy operations are vectorized; control flow stays in Python.
Callers guarantee (p-1)^2 * len < 2^63 so int64 never overflows.
"""

import numpy as np

I64 = np.int64


def _trim(a):
    n = a.shape[0]
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def mul(a, b, p):
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(0, dtype=I64)
    return _trim(np.convolve(a, b) % p)


def rem(a, f, p):
    df = f.shape[0] - 1
    r = _trim(np.asarray(a, dtype=I64) % p).copy()
    inv = pow(int(f[df]), p - 2, p)
    while r.shape[0] - 1 >= df and r.shape[0] > 0:
        c = int(r[-1]) * inv % p
        k = r.shape[0] - 1 - df
        r[k:k + df + 1] = (r[k:k + df + 1] - c * f) % p
        r = _trim(r)
    return r.copy()


def monic(a, p):
    a = _trim(np.asarray(a, dtype=I64) % p)
    if a.shape[0] == 0:
        return a.copy()
    inv = pow(int(a[-1]), p - 2, p)
    return (a * inv % p).astype(I64)


def gcd(a, b, p):
    x = _trim(np.asarray(a, dtype=I64) % p).copy()
    y = _trim(np.asarray(b, dtype=I64) % p).copy()
    while y.shape[0] > 0:
        x, y = y, rem(x, y, p)
    return monic(x, p)


def pow_mod(base, e, f, p):
    result = np.ones(1, dtype=I64)
    b = rem(base, f, p)
    while e > 0:
        if e & 1:
            result = rem(mul(result, b, p), f, p)
        b = rem(mul(b, b, p), f, p)
        e >>= 1
    return result


def deriv(a, p):
    if a.shape[0] <= 1:
        return np.zeros(0, dtype=I64)
    return _trim(np.arange(1, a.shape[0], dtype=I64) * a[1:] % p).copy()


def is_squarefree(a, p):
    d = deriv(a, p)
    if d.shape[0] == 0:
        return a.shape[0] <= 2
    return gcd(a, d, p).shape[0] == 1


def _exact_div(a, b, p):
    db = b.shape[0] - 1
    da = a.shape[0] - 1
    q = np.zeros(da - db + 1, dtype=I64)
    r = a.copy()
    inv = pow(int(b[db]), p - 2, p)
    for k in range(da - db, -1, -1):
        c = int(r[k + db]) * inv % p
        q[k] = c
        if c:
            r[k:k + db + 1] = (r[k:k + db + 1] - c * b) % p
    return q


def ddf_counts(f_in, p):
    f = monic(f_in, p)
    degf = f.shape[0] - 1
    counts = np.zeros(degf + 1, dtype=I64)
    x = np.array([0, 1], dtype=I64)
    h = x.copy()
    d = 0
    while f.shape[0] - 1 >= 2 * (d + 1):
        d += 1
        h = pow_mod(h, p, f, p)
        diff = np.zeros(max(h.shape[0], 2), dtype=I64)
        diff[:h.shape[0]] = h
        diff[1] = (diff[1] - 1) % p
        g = gcd(diff, f, p)
        if g.shape[0] > 1:
            counts[d] += (g.shape[0] - 1) // d
            f = _exact_div(f, g, p)
            h = rem(h, f, p)
    if f.shape[0] > 1:
        counts[f.shape[0] - 1] += 1
    return counts


def compose_step(outer, inner, p):
    acc = np.array([int(outer[-1]) % p], dtype=I64)
    for k in range(outer.shape[0] - 2, -1, -1):
        acc = mul(acc, inner, p)
        if acc.shape[0] == 0:
            acc = np.zeros(1, dtype=I64)
        else:
            acc = acc.copy()
        acc[0] = (acc[0] + int(outer[k])) % p
        acc = _trim(acc).copy()
    return acc
