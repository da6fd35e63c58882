"""Weil and canonical heights, the explicit height-transform bound, gcd
heights, and the prime-support sums used as empirical diagnostics.

All heights are natural-log scale, matching the prime weight log p over Q.

Canonical heights are computed by local decomposition rather than the naive
h(f^N(x))/d^N limit (whose numerators would need ~d^N digits at tight
tolerance):

* at a prime p where every coefficient is p-integral and the leading
  coefficient is a p-unit, the local contribution is exactly log+ |x|_p,
  because |f(z)|_p = |z|_p^d whenever |z|_p > 1 and the orbit stays integral
  otherwise;
* at the finitely many remaining "bad" primes, the valuation of the exact
  orbit is followed until the leading term dominates forever, after which the
  local limit has a closed form;
* the archimedean part follows the real orbit in floating point, switching to
  (sign, log) tracking once values are large; corrections decay doubly
  exponentially past the escape radius.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import TimeBudgetExceeded, UndefinedError
from .intfactor import factor_integer
from .maps import CubicMap, as_unipoly
from .rationals import valuation

LOG = math.log


def weil_height(q):
    """log max(|numerator|, denominator)."""
    q = Fraction(q)
    return LOG(max(abs(q.numerator), q.denominator)) if q != 0 else 0.0


def _log_plus(x):
    return max(0.0, math.log(x)) if x > 0 else 0.0


@dataclass(frozen=True)
class TransformBound:
    """Uniform bound |h(f(x)) - d*h(x)| <= C0 over all rational x, and the
    Weil-height scale past which positive canonical height is certified
    (h(x) > C0/2 forces h_f(x) >= h(x) - C0/2 > 0; the threshold stored is
    the more conservative C0)."""
    c0: float
    escape_threshold: float


def transform_bound(f):
    """Sound explicit C0 with |h(f(x)) - d h(x)| <= C0 for every x in Q.

    Write f = sum c_i x^i, degree d.  Upward, at every place
    |f(x)|_v <= (d+1)^{eps_v} max_i |c_i|_v max(1,|x|_v)^d, which sums to
    h(f(x)) <= d h(x) + log(d+1) + sum_v log+ max_i |c_i|_v.  Downward, at a
    place where |x|_v exceeds M_v (past which the top term strictly
    dominates) the deficit d log+|x|_v - log+|f(x)|_v is at most
    log+ |1/c_d|_v (+ log 2 at the archimedean place); below M_v it is at
    most d log+ M_v.  Summing the per-place maxima over the finitely many
    places where any term is nonzero gives C0's downward half.
    """
    g = as_unipoly(f)
    d = g.degree
    if d < 2:
        raise ValueError("transform bound needs degree >= 2")
    cs = list(g.coeffs)
    lc = cs[-1]

    # upward half
    denom_lcm = 1
    for c in cs:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    arch_max = max(abs(float(c)) for c in cs)
    c_up = LOG(d + 1) + LOG(denom_lcm) + _log_plus(arch_max)

    # downward half: archimedean place
    s = sum(abs(float(c)) for c in cs[:-1])
    m_inf = max(1.0, 2.0 * s / abs(float(lc)))
    c_down = d * _log_plus(m_inf) + LOG(2) + _log_plus(1.0 / abs(float(lc)))

    # downward half: finite places touching any coefficient
    primes = set()
    for c in cs:
        for part in (c.numerator, c.denominator):
            if part not in (0, 1, -1):
                primes.update(factor_integer(part).distinct_primes())
    for p in sorted(primes):
        vlc = valuation(lc, p)
        best = 0.0
        for i, c in enumerate(cs[:-1]):
            if c == 0:
                continue
            vc = valuation(c, p)
            # |c_i/c_d|_p^(1/(d-i)) > 1 iff v(c_i) - v(lc) < 0
            t = (vlc - vc) / (d - i)
            if t > 0:
                best = max(best, t)
        dp = d * best * LOG(p) + max(0, vlc) * LOG(p)
        c_down += dp

    c0 = max(c_up, c_down)
    return TransformBound(c0=c0, escape_threshold=c0)


@dataclass(frozen=True)
class HeightValue:
    value: float
    error_bound: float
    preperiodic: bool = False


def canonical_height(f, x, eps=1e-9):
    """Call-Silverman canonical height of x under f, within eps (the returned
    error_bound is the honest estimate and normally far below eps).
    Preperiodic points return exact 0 with the flag set."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    from .dynamics import orbit_status
    g = as_unipoly(f)
    d = g.degree
    x = Fraction(x)

    status = orbit_status(f, x)
    if status.preperiodic:
        return HeightValue(0.0, 0.0, preperiodic=True)

    cs = list(g.coeffs)
    lc = cs[-1]
    bad = set()
    for c in cs:
        if c.denominator > 1:
            bad.update(factor_integer(c.denominator).distinct_primes())
    for part in (lc.numerator,):
        if abs(part) > 1:
            bad.update(factor_integer(abs(part)).distinct_primes())

    # good-prime part: exactly log of the bad-free denominator of x
    den = x.denominator
    for p in bad:
        while den % p == 0:
            den //= p
    total = LOG(den) if den > 1 else 0.0
    err = 0.0

    # bad primes: follow exact valuations until locked (or budget)
    if bad:
        lam, lam_err = _bad_prime_parts(f, g, x, sorted(bad), eps)
        total += lam
        err += lam_err

    lam_inf, err_inf = _arch_part(g, x, eps)
    total += lam_inf
    err += err_inf

    return HeightValue(total, max(err, 1e-12), preperiodic=False)


def _bad_prime_parts(f, g, x, bad, eps):
    """Sum of local canonical heights at the bad primes, by exact valuation
    tracking along the orbit."""
    d = g.degree
    cs = list(g.coeffs)
    lc = cs[-1]
    digit_budget = 200_000
    total = 0.0
    err = 0.0
    pending = set(bad)
    from .dynamics import _apply
    xs = Fraction(x)
    k = 0
    resolved = {}
    while pending:
        for p in sorted(pending):
            v = valuation(xs, p)
            vlc = valuation(lc, p)
            if v == math.inf:
                continue  # orbit value is 0 at this step; decide next step
            # lock: top term strictly dominates now and forever, and the
            # valuation strictly decreases
            thresholds = []
            for i, c in enumerate(cs[:-1]):
                if c != 0:
                    thresholds.append((valuation(c, p) - vlc) / (d - i))
                else:
                    thresholds.append(math.inf)
            lock = (v < 0 and all(v < t for t in thresholds)
                    and (d - 1) * v < -vlc)
            if lock:
                cterm = Fraction(vlc, d - 1)
                resolved[p] = float(-(v + cterm)) * LOG(p) / d ** k
            elif abs(xs.numerator) + xs.denominator > 10 ** digit_budget:
                # honest give-up: bound the possible remaining contribution
                finite_ts = [abs(t) for t in thresholds if t != math.inf]
                span = max(finite_ts + [1.0]) + abs(vlc) + 1
                resolved[p] = 0.0
                err += span * LOG(p) / d ** k
        for p in list(pending):
            if p in resolved:
                pending.discard(p)
        if not pending:
            break
        xs = _apply(f, xs)
        k += 1
        if k > 64:
            for p in pending:
                resolved[p] = 0.0
                err += 64 * LOG(p) / d ** k
            break
    return sum(resolved.values()), err


def _arch_part(g, x, eps):
    """Archimedean local canonical height by float orbit tracking."""
    d = g.degree
    cs = [float(c) for c in g.coeffs]
    lc = cs[-1]
    s = sum(abs(c) for c in cs[:-1])
    r0 = max(2.0, 2.0 * s / abs(lc), (2.0 / abs(lc)) ** (1.0 / (d - 1)))

    xv = float(x)
    k = 0
    max_plain = 1e80
    # plain tracking until escape from the radius (or bounded-orbit give-up)
    while abs(xv) <= r0:
        acc = 0.0
        for c in reversed(cs):
            acc = acc * xv + c
        xv = acc
        k += 1
        if k >= 20000:
            # real orbit looks bounded: the local term is 0 up to a term
            # smaller than any float; keep a token slack for float shadowing
            return 0.0, 1e-9
    while abs(xv) <= max_plain:
        acc = 0.0
        for c in reversed(cs):
            acc = acc * xv + c
        xv = acc
        k += 1
        if k >= 30000:
            break
    if abs(xv) <= max_plain:
        # extremely slow escape; report with the plain estimate
        return _log_plus(abs(xv)) / d ** k, 1e-6

    # (sign, log) tracking: t = log|x|; corrections decay doubly fast
    t = LOG(abs(xv))
    sg = 1.0 if xv > 0 else -1.0
    est = t / d ** k
    for _ in range(400):
        corr = 0.0
        if t < 40 * LOG(10):
            u = 0.0
            for i, c in enumerate(cs[:-1]):
                if c:
                    u += (c / lc) * (sg ** ((i - d) % 2)) * math.exp((i - d) * t)
            corr = math.log1p(u) if u > -1 else 0.0
        t_next = d * t + LOG(abs(lc)) + corr
        sg = sg ** d * (1.0 if lc > 0 else -1.0)
        k += 1
        t = t_next
        new_est = t / d ** k
        if abs(new_est - est) < eps * 1e-3 and abs(LOG(abs(lc)) / d ** k) < eps * 1e-3:
            est = new_est
            break
        est = new_est
    tail = (abs(LOG(abs(lc))) + 1e-15) / ((d - 1) * d ** k)
    return est, tail + 1e-12


# ---------------------------------------------------------------------------
# gcd heights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GcdHeight:
    finite_part: float
    full: float


def gcd_height(x, y):
    """h0_gcd = sum over primes of log p * min(v+_p(x), v+_p(y)); the full
    version adds the archimedean min(log+|x|, log+|y|)."""
    x, y = Fraction(x), Fraction(y)
    if x == 0 or y == 0:
        raise UndefinedError("gcd height undefined for zero arguments")
    # positive parts live entirely in the numerators (which are coprime to
    # the denominators), so the finite part is log gcd(|num x|, |num y|)
    gnum = math.gcd(abs(x.numerator), abs(y.numerator))
    finite = LOG(gnum) if gnum > 1 else 0.0
    arch = min(_log_plus(abs(float(x))), _log_plus(abs(float(y))))
    return GcdHeight(finite_part=finite, full=finite + arch)


@dataclass(frozen=True)
class GcdSeriesEntry:
    n: int
    finite_part: Optional[float]
    ratio: Optional[float]
    undefined: bool = False


@dataclass(frozen=True)
class GcdSeries:
    entries: tuple
    comparison_base: float  # h_f(a)
    flags: dict


def gcd_height_series(f: CubicMap, c, d_, N, budget=None):
    """Entries (n, h0_gcd(f^n(a) - c, f^n(-a) - d), ratio to 3^n h_f(a)).

    Orbit hits of c or d make the affected entries undefined (flagged); a
    critical-orbit collision flags the whole series as collision regime.
    The conjectural comparison is reported, never asserted.
    """
    from .dynamics import critical_collision, is_odd, orbit_contains
    c, d_ = Fraction(c), Fraction(d_)
    flags = {}
    hit_c = orbit_contains(f, f.a, c)
    hit_d = orbit_contains(f, -f.a, d_)
    if hit_c[0]:
        flags["c_in_orbit_of_a"] = hit_c[1]
    if hit_d[0]:
        flags["d_in_orbit_of_minus_a"] = hit_d[1]
    if is_odd(f):
        flags["odd_map"] = ("f is odd: f^n(-a) = -f^n(a), so the pair is "
                            "(f^n(a) - c, -f^n(a) - d)")
    coll = critical_collision(f)
    if coll.found:
        flags["collision_regime"] = {"m": coll.witness.m, "n": coll.witness.n}

    hf = canonical_height(f, f.a, 1e-9)
    base = hf.value
    entries = []
    xa, xb = f.a, -f.a
    for n in range(1, N + 1):
        if budget is not None:
            try:
                budget.check(what="gcd height series")
            except TimeBudgetExceeded as exc:
                exc.partial = GcdSeries(tuple(entries), base, flags)
                raise
        xa = f(xa)
        xb = f(xb)
        u, v = xa - c, xb - d_
        if u == 0 or v == 0:
            entries.append(GcdSeriesEntry(n, None, None, undefined=True))
            continue
        h0 = gcd_height(u, v).finite_part
        denom = base * 3 ** n
        ratio = h0 / denom if denom > 0 else None
        entries.append(GcdSeriesEntry(n, h0, ratio))
    return GcdSeries(tuple(entries), base, flags)


def prime_support_sum(f, gamma, beta, n, window=None, budget=None):
    """Sum of log p over the primes p with
    min(v_p(f^m(gamma) - beta), v_p(f^n(gamma) - beta)) > 0 for some
    0 < m < n (m restricted to the last `window` indices when given).
    """
    from .dynamics import orbit_contains
    gamma, beta = Fraction(gamma), Fraction(beta)
    hit = orbit_contains(f, gamma, beta)
    if hit[0]:
        raise UndefinedError(
            f"beta lies in the forward orbit of gamma (n = {hit[1]})")
    if n < 1:
        raise ValueError("n must be >= 1")
    lo = 1 if window is None else max(1, n - window)
    vals = []
    x = gamma
    for _ in range(n):
        x = f(x)
        vals.append(x)
    last = vals[n - 1] - beta
    if last == 0:
        raise UndefinedError("f^n(gamma) = beta")
    num_last = abs(last.numerator)
    prod = 1
    for m in range(lo, n):
        dm = vals[m - 1] - beta
        if dm != 0:
            prod *= abs(dm.numerator)
    if prod == 0 or num_last == 0:
        return 0.0
    g = math.gcd(num_last, prod)
    if g <= 1:
        return 0.0
    fac = factor_integer(g, budget)
    return float(sum(LOG(p) for p in fac.distinct_primes()))
