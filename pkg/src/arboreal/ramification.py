"""Conditions R and U: valuation criteria on a prime that force maximal tame
ramification (R) or no ramification (U) in the iterated-preimage tower, plus
the prime searches that produce witnesses over Q.

Every clause records the exact valuations it inspected, so a report can be
re-verified by hand.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError, TimeBudgetExceeded
from .intfactor import factor_integer, is_prime
from .maps import CubicMap
from .rationals import fmt_rational, valuation
from .dynamics import iterate_point, orbit_contains, is_odd


@dataclass(frozen=True)
class Clause:
    label: str
    description: str
    valuations: tuple  # ((name, value string, valuation), ...)
    passed: bool


@dataclass(frozen=True)
class ConditionReport:
    condition: str  # "R" | "U"
    prime: int
    n: int
    clauses: tuple
    satisfied: bool

    def clause(self, label):
        for c in self.clauses:
            if c.label == label:
                return c
        raise KeyError(label)

    def as_dict(self):
        return {
            "condition": self.condition,
            "prime": self.prime,
            "n": self.n,
            "satisfied": self.satisfied,
            "clauses": [
                {
                    "label": c.label,
                    "description": c.description,
                    "valuations": [
                        {"name": nm, "value": vs, "valuation": _v_str(v)}
                        for nm, vs, v in c.valuations
                    ],
                    "passed": c.passed,
                }
                for c in self.clauses
            ],
        }


def _v_str(v):
    return "inf" if v == float("inf") else int(v)


@dataclass(frozen=True)
class PrimeWitness:
    prime: int
    n: int
    report: ConditionReport


def good_separable_reduction(f: CubicMap, p):
    """Monic normal-form cubics have good reduction at p iff a and b are
    p-integral; the reduced derivative 3x^2 - 3a^2 vanishes identically
    exactly at p = 3, so separability fails only there."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if valuation(f.a, p) < 0 or valuation(f.b, p) < 0:
        return False
    return p != 3


def _orbit_diff_vals(f, start, beta, p, lo, hi, side):
    """Valuations v_p(f^i(start) - beta) for lo <= i <= hi, with bookkeeping."""
    out = []
    x = Fraction(start)
    for _ in range(lo):
        x = f(x)
    i = lo
    while i <= hi:
        diff = x - beta
        out.append((f"f^{i}({side}) - beta", fmt_rational(diff),
                    valuation(diff, p)))
        x = f(x)
        i += 1
    return out


def check_condition_R(f: CubicMap, beta, p, n):
    """Clauses: (a) good separable reduction; (b) v_p(f^i(-a) - beta) = 0 for
    0 <= i <= n; (c) v_p(f^i(a) - beta) = 0 for 0 <= i < n;
    (d) v_p(f^n(a) - beta) = 1; (e) v_p(beta) = 0."""
    beta = Fraction(beta)
    clauses = []

    gsr = good_separable_reduction(f, p)
    clauses.append(Clause("a", "good separable reduction", (), gsr))

    vals_b = tuple(_orbit_diff_vals(f, -f.a, beta, p, 0, n, "-a"))
    clauses.append(Clause(
        "b", f"v_p(f^i(-a) - beta) = 0 for 0 <= i <= {n}", vals_b,
        all(v == 0 for _, _, v in vals_b)))

    vals_c = tuple(_orbit_diff_vals(f, f.a, beta, p, 0, n - 1, "a")) if n >= 1 else ()
    clauses.append(Clause(
        "c", f"v_p(f^i(a) - beta) = 0 for 0 <= i < {n}", vals_c,
        all(v == 0 for _, _, v in vals_c)))

    top = iterate_point(f, f.a, n) - beta
    v_top = valuation(top, p)
    clauses.append(Clause(
        "d", f"v_p(f^{n}(a) - beta) = 1",
        ((f"f^{n}(a) - beta", fmt_rational(top), v_top),), v_top == 1))

    v_beta = valuation(beta, p)
    clauses.append(Clause(
        "e", "v_p(beta) = 0",
        (("beta", fmt_rational(beta), v_beta),), v_beta == 0))

    return ConditionReport("R", p, n, tuple(clauses),
                           all(c.passed for c in clauses))


def check_condition_U(f: CubicMap, beta, p, n):
    """Clauses: (a) good separable reduction; (b) v_p(f^i(a) - beta) =
    v_p(f^i(-a) - beta) = 0 for 0 <= i <= n; (c) v_p(beta) = 0."""
    beta = Fraction(beta)
    clauses = []

    gsr = good_separable_reduction(f, p)
    clauses.append(Clause("a", "good separable reduction", (), gsr))

    vals = (tuple(_orbit_diff_vals(f, f.a, beta, p, 0, n, "a"))
            + tuple(_orbit_diff_vals(f, -f.a, beta, p, 0, n, "-a")))
    clauses.append(Clause(
        "b", f"v_p(f^i(a) - beta) = v_p(f^i(-a) - beta) = 0 for 0 <= i <= {n}",
        vals, all(v == 0 for _, _, v in vals)))

    v_beta = valuation(beta, p)
    clauses.append(Clause(
        "c", "v_p(beta) = 0",
        (("beta", fmt_rational(beta), v_beta),), v_beta == 0))

    return ConditionReport("U", p, n, tuple(clauses),
                           all(c.passed for c in clauses))


def _require_not_postcritical(f, beta):
    from .dynamics import is_postcritical
    hit, detail = is_postcritical(f, beta)
    if hit:
        raise PreconditionError(
            f"beta = {fmt_rational(beta)} is postcritical: "
            f"f^{detail['n']}({detail['critical_point']}) = beta")


def find_condition_R_primes(f: CubicMap, beta, n, budget=None):
    """All Condition-R witnesses at beta for n, sorted ascending.

    Clause (d) forces v_p(f^n(a) - beta) = 1, so every witness divides the
    numerator of f^n(a) - beta with exponent exactly 1; denominator primes
    are excluded by clause (a).  The list may be empty: witness existence is
    only guaranteed asymptotically.
    """
    beta = Fraction(beta)
    _require_not_postcritical(f, beta)
    top = iterate_point(f, f.a, n) - beta
    if top == 0:
        raise PreconditionError("beta is in the critical orbit (f^n(a) = beta)")
    num = abs(top.numerator)
    if num == 1:
        return []
    try:
        fac = factor_integer(num, budget)
    except TimeBudgetExceeded as exc:
        exc.partial = {"witnesses": [], "note": "candidate coverage incomplete",
                       "partial_factorization": exc.partial}
        raise
    out = []
    for p, e in fac.factors:
        if e != 1:
            continue
        rep = check_condition_R(f, beta, p, n)
        if rep.satisfied:
            out.append(PrimeWitness(prime=p, n=n, report=rep))
    out.sort(key=lambda w: w.prime)
    return out


@dataclass(frozen=True)
class CrossWitnessResult:
    """Per-basepoint outcome of the simultaneous R/U prime search."""
    alpha: Fraction
    prime: Optional[int]
    r_report: Optional[ConditionReport]
    u_reports: tuple  # ((other alpha, ConditionReport), ...)
    reason: str = ""

    @property
    def found(self):
        return self.prime is not None


def cross_condition_witnesses(f: CubicMap, alphas, n, budget=None):
    """For each alpha_i, a prime with Condition R at alpha_i for n and
    Condition U at every alpha_j (j != i) for n.

    Preconditions (validated, reported): the alphas are distinct rationals,
    none lies in a critical orbit, none lies in the forward orbit of another
    (nor of itself, i.e. none is periodic), and for odd f none lies in the
    forward orbit of the negative of another.  All basepoints are rational,
    so the unramified-in-L condition of the underlying statement is vacuous.
    """
    alphas = [Fraction(a) for a in alphas]
    if len(set(alphas)) != len(alphas):
        raise PreconditionError("basepoints must be distinct")
    for a in alphas:
        _require_not_postcritical(f, a)
    for i, ai in enumerate(alphas):
        for j, aj in enumerate(alphas):
            hit, idx, _ = orbit_contains(f, aj, ai)
            if hit:
                raise PreconditionError(
                    f"alpha_{i} = f^{idx}(alpha_{j}): orbit-related basepoints")
            if is_odd(f):
                hit, idx, _ = orbit_contains(f, -aj, ai)
                if hit:
                    raise PreconditionError(
                        f"alpha_{i} = f^{idx}(-alpha_{j}) with f odd")

    results = []
    for i, ai in enumerate(alphas):
        try:
            witnesses = find_condition_R_primes(f, ai, n, budget)
        except TimeBudgetExceeded:
            results.append(CrossWitnessResult(ai, None, None, (),
                                              reason="time budget exceeded"))
            continue
        chosen = None
        for w in witnesses:
            u_reps = []
            ok = True
            for j, aj in enumerate(alphas):
                if j == i:
                    continue
                rep = check_condition_U(f, aj, w.prime, n)
                u_reps.append((aj, rep))
                if not rep.satisfied:
                    ok = False
                    break
            if ok:
                chosen = CrossWitnessResult(ai, w.prime, w.report,
                                            tuple(u_reps))
                break
        if chosen is None:
            results.append(CrossWitnessResult(
                ai, None, None, (),
                reason="no witness found at this level (not a refutation: "
                       "existence is asymptotic)"))
        else:
            results.append(chosen)
    return results
