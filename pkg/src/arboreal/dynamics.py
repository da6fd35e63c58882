"""Orbit-level decision procedures: exact iteration, preperiodicity versus
certified escape, PCF detection, critical-orbit collisions, postcriticality,
periodicity.

Escape certificates rest on the transform bound: once the Weil height of an
orbit value exceeds the threshold, heights along the orbit increase strictly
forever, so revisits (and equalities with lower-height targets) are excluded.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegreeBudgetExceeded
from .maps import CubicMap, PolyMap, as_unipoly
from .maps import normalize_cubic  # re-export: part of this module's surface

__all__ = [
    "CubicMap", "PolyMap", "normalize_cubic", "iterate_point", "compose_poly",
    "OrbitStatus", "orbit_status", "orbit_values", "is_pcf", "PcfResult",
    "CollisionWitness", "CollisionReport", "critical_collision",
    "is_postcritical", "is_periodic", "is_odd", "orbit_contains",
]


def _apply(f, x):
    if isinstance(f, (CubicMap, PolyMap)):
        return f(x)
    return f(Fraction(x))  # UniPoly


def iterate_point(f, x, n):
    """Exact f^n(x); f^0 is the identity."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = Fraction(x)
    for _ in range(n):
        x = _apply(f, x)
    return x


def compose_poly(f, n, degree_cap=243):
    """Symbolic f^n.  For a normal-form map the result is again monic with a
    zero coefficient just below the top degree (checked)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = as_unipoly(f)
    if g.degree ** n > degree_cap:
        raise DegreeBudgetExceeded(
            f"deg(f)^n = {g.degree ** n} exceeds cap {degree_cap}")
    out = g
    for _ in range(n - 1):
        out = g.compose(out)
    if g.lc == 1 and g.degree >= 2 and g[g.degree - 1] == 0:
        assert out.lc == 1 and out[out.degree - 1] == 0, \
            "normal form not preserved under composition"
    return out


@dataclass(frozen=True)
class OrbitStatus:
    kind: str  # "preperiodic" | "escaping"
    tail_length: int = 0
    period: int = 0
    escape_index: int = 0
    height_at_escape: float = 0.0

    @property
    def preperiodic(self):
        return self.kind == "preperiodic"


def orbit_values(f, x, limit=None, stop_height=None):
    """Exact orbit x, f(x), ... until revisit or height > stop_height (if set)
    or limit values.  Returns (values, status_hint)."""
    from .heights import weil_height
    seen = {Fraction(x): 0}
    vals = [Fraction(x)]
    k = 0
    while True:
        k += 1
        nxt = _apply(f, vals[-1])
        if nxt in seen:
            return vals, OrbitStatus("preperiodic", tail_length=seen[nxt],
                                     period=k - seen[nxt])
        vals.append(nxt)
        seen[nxt] = k
        if stop_height is not None and weil_height(nxt) > stop_height:
            return vals, OrbitStatus("escaping", escape_index=k,
                                     height_at_escape=weil_height(nxt))
        if limit is not None and k >= limit:
            return vals, None


def orbit_status(f, x):
    """Decide preperiodic vs escaping exactly.  Terminates: non-preperiodic
    rational orbits have positive canonical height, so Weil heights along them
    eventually exceed the escape threshold."""
    from .heights import transform_bound
    tb = transform_bound(f)
    _, status = orbit_values(f, x, stop_height=tb.escape_threshold)
    assert status is not None
    return status


@dataclass(frozen=True)
class PcfResult:
    value: bool
    status_plus: OrbitStatus
    status_minus: OrbitStatus

    def __bool__(self):
        return self.value


def is_pcf(f: CubicMap):
    """Postcritically finite iff both critical orbits are preperiodic."""
    sp = orbit_status(f, f.a)
    sm = orbit_status(f, -f.a)
    return PcfResult(sp.preperiodic and sm.preperiodic, sp, sm)


def is_odd(f: CubicMap):
    return f.b == 0


# ---------------------------------------------------------------------------
# conclusive orbit membership
# ---------------------------------------------------------------------------

def orbit_contains(f, start, target, include_zero=False):
    """Does target appear in the forward orbit {f^n(start) : n >= 1}
    (n >= 0 with include_zero)?  Conclusive: the search stops at a revisit or
    once heights certifiably stay above h(target) forever.

    Returns (answer, index or None, proof: "finite-orbit" | "height-escape").
    """
    from .heights import transform_bound, weil_height
    target = Fraction(target)
    tb = transform_bound(f)
    stop = max(tb.escape_threshold, weil_height(target))
    seen = {Fraction(start): 0}
    x = Fraction(start)
    if include_zero and x == target:
        return True, 0, "exact-hit"
    k = 0
    while True:
        k += 1
        x = _apply(f, x)
        if x == target:
            return True, k, "exact-hit"
        if x in seen:
            return False, None, "finite-orbit"
        seen[x] = k
        if weil_height(x) > stop:
            # heights now strictly increase past h(target)
            return False, None, "height-escape"


def is_postcritical(f: CubicMap, beta):
    """beta in O(a) union O(-a) (forward orbits, n >= 1), conclusively.

    Returns (answer, detail dict)."""
    hit_p, idx_p, proof_p = orbit_contains(f, f.a, beta)
    if hit_p:
        return True, {"critical_point": "a", "n": idx_p, "proof": "exact-hit"}
    hit_m, idx_m, proof_m = orbit_contains(f, -f.a, beta)
    if hit_m:
        return True, {"critical_point": "-a", "n": idx_m, "proof": "exact-hit"}
    return False, {"proof_plus": proof_p, "proof_minus": proof_m}


def is_periodic(f, beta):
    """beta periodic (f^n(beta) = beta, n >= 1)?  Conclusive via orbit_status.

    Returns (answer, cycle dict with period/tail when preperiodic)."""
    st = orbit_status(f, beta)
    if st.preperiodic and st.tail_length == 0:
        return True, {"period": st.period, "tail": 0}
    if st.preperiodic:
        return False, {"period": st.period, "tail": st.tail_length,
                       "note": "preperiodic but not periodic"}
    return False, {"note": "escaping orbit", "escape_index": st.escape_index}


# ---------------------------------------------------------------------------
# critical-orbit collisions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollisionWitness:
    m: int
    n: int
    value: Fraction
    same_n: bool


@dataclass(frozen=True)
class CollisionReport:
    witness: Optional[CollisionWitness]
    same_n_witness: Optional[CollisionWitness]
    bound: int
    # for absences: "proven" | "bounded"; None when a witness exists
    general_absence: Optional[str]
    same_n_absence: Optional[str]
    note: str = ""

    @property
    def found(self):
        return self.witness is not None


def critical_collision(f: CubicMap, N=12):
    """Search f^m(a) = f^n(-a) over 1 <= m, n <= N (ordered by m+n then m).

    Also records whether a same-index witness (the finite-index obstruction
    f^n(a) = f^n(-a)) exists, and whether absences are proven outright or
    only up to the bound.  Proof logic: preperiodic orbits are finite and
    checked in full; escaping-versus-preperiodic separates by height; for two
    escaping orbits a merge forces canonical heights into a common 3-power
    class, so a height-ratio test away from 3^Z certifies absence.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    from .heights import transform_bound, weil_height
    a = f.a
    st1 = orbit_status(f, a)
    st2 = orbit_status(f, -a)

    def orbit_to(x, st):
        # full orbit (tail + cycle) for preperiodic; N values otherwise
        span = st.tail_length + st.period if st.preperiodic else N
        vals = [Fraction(x)]
        for _ in range(span):
            vals.append(_apply(f, vals[-1]))
        return vals

    v1 = orbit_to(a, st1)
    v2 = orbit_to(-a, st2)

    if st1.preperiodic != st2.preperiodic:
        # extend the escaping side until its heights certifiably stay above
        # every value of the finite side
        fin = v1 if st1.preperiodic else v2
        esc = v2 if st1.preperiodic else v1
        tb = transform_bound(f)
        stop = max(max(weil_height(z) for z in fin), tb.escape_threshold)
        while all(weil_height(z) <= stop for z in esc[1:]):
            esc.append(_apply(f, esc[-1]))

    top1, top2 = len(v1) - 1, len(v2) - 1

    witness = None
    for s in range(2, top1 + top2 + 1):
        for m in range(max(1, s - top2), min(top1, s - 1) + 1):
            n = s - m
            if v1[m] == v2[n]:
                witness = CollisionWitness(m, n, v1[m], same_n=(m == n))
                break
        if witness:
            break

    same_n_witness = None
    for k in range(1, min(top1, top2) + 1):
        if v1[k] == v2[k]:
            same_n_witness = CollisionWitness(k, k, v1[k], same_n=True)
            break

    note = ""
    if witness is not None:
        general_absence = None
    elif st1.preperiodic and st2.preperiodic:
        general_absence = "proven"
        note = "both critical orbits finite; checked in full"
    elif st1.preperiodic != st2.preperiodic:
        general_absence = "proven"
        note = "finite orbit versus certified escape"
    else:
        general_absence, note = _escaping_pair_absence(f)

    if witness is not None and same_n_witness is None:
        # merged with a nonzero offset: same-index equality would force a
        # repeat inside an injective escaping tail (or was covered by the
        # finite check for preperiodic orbits)
        same_n_absence = "proven" if general_absence != "bounded" else "bounded"
    elif same_n_witness is not None:
        same_n_absence = None
    else:
        same_n_absence = general_absence

    return CollisionReport(witness=witness, same_n_witness=same_n_witness,
                           bound=N, general_absence=general_absence,
                           same_n_absence=same_n_absence, note=note)


def _escaping_pair_absence(f):
    from .heights import canonical_height
    eps = 1e-9
    h1 = canonical_height(f, f.a, eps)
    h2 = canonical_height(f, -f.a, eps)
    if h1.value <= 0 or h2.value <= 0:
        return "bounded", "canonical height not resolvable"
    r = math.log(h1.value / h2.value) / math.log(3)
    slack = (h1.error_bound / h1.value + h2.error_bound / h2.value) \
        / math.log(3) + 1e-9
    dist = abs(r - round(r))
    if dist > slack:
        return "proven", (
            f"canonical-height ratio log3 = {r:.6f} is {dist:.3g} away from "
            "an integer; a merge would force it into 3^Z")
    return "bounded", "canonical-height ratio near a 3-power; search bounded"
