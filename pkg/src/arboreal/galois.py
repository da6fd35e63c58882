"""Irreducibility certificates, level-maximality certificates, the finite-index
checklist report, and Frobenius cycle-type sampling as independent statistical
validation of the certified level groups.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Optional

from . import modp
from .errors import (DegreeBudgetExceeded, Inconclusive, PreconditionError,
                     TimeBudgetExceeded, TooLarge)
from .intfactor import factor_integer, primes_in_range, sieve_primes
from .maps import CubicMap, as_unipoly
from .polynomials import UniPoly
from .polyfactor import factor_polynomial, rational_roots
from .rationals import fmt_rational
from .ramification import PrimeWitness, find_condition_R_primes
from .trees import complete_aut_order
from .dynamics import (compose_poly, critical_collision, is_odd, is_pcf,
                       is_periodic, is_postcritical)


def cubic_discriminant(P, Q):
    """disc(x^3 + P x + Q) = -4 P^3 - 27 Q^2."""
    P, Q = Fraction(P), Fraction(Q)
    return -4 * P ** 3 - 27 * Q ** 2


# ---------------------------------------------------------------------------
# irreducibility certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrreducibilityCertificate:
    kind: str  # "rational_root_only" | "mod_p" | "eisenstein" | "full_factorization"
    p: Optional[int] = None
    shift: Optional[int] = None

    def as_dict(self):
        d = {"kind": self.kind}
        if self.p is not None:
            d["p"] = self.p
        if self.shift is not None:
            d["shift"] = self.shift
        return d


@dataclass(frozen=True)
class IrreducibilityResult:
    irreducible: bool
    certificate: Optional[IrreducibilityCertificate] = None
    factors: Optional[tuple] = None  # ((UniPoly, mult), ...) when reducible


MODP_SWEEP_COUNT = 25
EISENSTEIN_SHIFTS = tuple(t for k in range(6) for t in ((k, -k) if k else (0,)))


def prove_irreducible(g: UniPoly, degree_cap=243, budget=None):
    """Certify irreducibility over Q or return the factorization.

    The strategy order: rational-root test (conclusive through degree 3),
    irreducibility mod p over a sweep of small good primes, the Eisenstein
    criterion after shifts x -> x + t for |t| <= 5, then full factorization.
    """
    if g.is_zero:
        raise ValueError("zero polynomial")
    if g.degree > degree_cap:
        raise Inconclusive(f"degree {g.degree} exceeds cap {degree_cap}")
    if g.degree == 0:
        raise ValueError("constant polynomial has no irreducibility certificate")

    roots = rational_roots(g, budget)
    if roots:
        if g.degree == 1:
            return IrreducibilityResult(
                True, IrreducibilityCertificate("rational_root_only"))
        _, facs = factor_polynomial(g, degree_cap, budget)
        return IrreducibilityResult(False, factors=tuple(facs))

    _, ints = g.primitive()

    tried = 0
    for p in sieve_primes(10 ** 4):
        if ints[-1] % p == 0:
            continue
        tried += 1
        if modp.is_irreducible_mod_p(ints, p):
            return IrreducibilityResult(
                True, IrreducibilityCertificate("mod_p", p=p))
        if tried >= MODP_SWEEP_COUNT:
            break

    if g.degree <= 3:
        # no rational roots: conclusive at this degree even when the sweep
        # found no inert prime
        return IrreducibilityResult(
            True, IrreducibilityCertificate("rational_root_only"))

    cert = _eisenstein_with_shifts(ints, budget)
    if cert is not None:
        return IrreducibilityResult(True, cert)

    _, facs = factor_polynomial(g, degree_cap, budget)
    if len(facs) == 1 and facs[0][1] == 1:
        return IrreducibilityResult(
            True, IrreducibilityCertificate("full_factorization"))
    return IrreducibilityResult(False, factors=tuple(facs))


def _eisenstein_with_shifts(ints, budget=None):
    base = UniPoly.from_int_coeffs(ints)
    for t in EISENSTEIN_SHIFTS:
        _, sh = base.shift(t).primitive()
        g = 0
        for c in sh[:-1]:
            g = math.gcd(g, abs(c))
        if g <= 1 or sh[0] == 0:
            continue
        for p in factor_integer(g, budget).distinct_primes():
            if sh[-1] % p != 0 and sh[0] % (p * p) != 0:
                return IrreducibilityCertificate("eisenstein", p=p, shift=t)
    return None


# ---------------------------------------------------------------------------
# eventual stability evidence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityEvidence:
    mode: str
    counts: tuple               # irreducible-factor counts per level 1..N
    factor_tables: tuple        # per level: ((poly string, mult), ...)
    beta_periodic: bool
    stabilized: bool
    note: str = ""


def eventual_stability_evidence(f, beta, N, mode="full", degree_cap=243):
    """Factor counts of f^n - beta (mode "full") or of the strict-level
    polynomials (mode "stunted") for n = 1..N; bounded counts are evidence of
    eventual stability, never proof.  A periodic beta settles the question
    negatively for the full tower and is flagged."""
    beta = Fraction(beta)
    periodic, _ = is_periodic(f, beta)
    counts = []
    tables = []
    if mode == "full":
        for n in range(1, N + 1):
            g = compose_poly(f, n, degree_cap) - beta
            _, facs = factor_polynomial(g, degree_cap)
            counts.append(sum(e for _, e in facs))
            tables.append(tuple((str(p), e) for p, e in facs))
    elif mode == "stunted":
        from .trees import stunted_tree
        shape = stunted_tree(f, beta, N, degree_cap)
        for n in range(1, N + 1):
            lfs = shape.factor_levels[n]
            counts.append(len(lfs))
            tables.append(tuple((str(lf.poly), 1) for lf in lfs))
    else:
        raise ValueError("mode must be 'full' or 'stunted'")
    stabilized = len(counts) >= 2 and counts[-1] == counts[-2]
    note = ""
    if periodic and mode == "full":
        note = ("beta is periodic, so the pair is not eventually stable; "
                "a factor splits off at every level")
    return StabilityEvidence(mode=mode, counts=tuple(counts),
                             factor_tables=tuple(tables),
                             beta_periodic=periodic, stabilized=stabilized,
                             note=note)


# ---------------------------------------------------------------------------
# level certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelCertificate:
    n: int
    prime_witness: PrimeWitness
    irreducibility: IrreducibilityCertificate
    group_order: int          # 6^(3^(n-1))
    group_order_exp: int      # the exponent k in 6^k

    def as_dict(self):
        return {
            "n": self.n,
            "prime": self.prime_witness.prime,
            "condition_R": self.prime_witness.report.as_dict(),
            "irreducibility": self.irreducibility.as_dict(),
            "group_order": f"6^{self.group_order_exp}",
            "group_order_decimal": str(self.group_order),
        }


@dataclass(frozen=True)
class LevelFailure:
    n: int
    reason: str  # "NoRPrime" | "NotIrreducible" | "Inconclusive"
    detail: str = ""

    def as_dict(self):
        return {"n": self.n, "certified": False, "reason": self.reason,
                "detail": self.detail}


def level_certificate(f: CubicMap, beta, n, degree_cap=243, budget=None):
    """Certificate that the level-n relative Galois group is all of
    (S_3)^(3^(n-1)): a Condition-R prime witness plus irreducibility of
    f^n - beta over Q.  Failures are distinguished."""
    beta = Fraction(beta)
    try:
        g = compose_poly(f, n, degree_cap) - beta
        irr = prove_irreducible(g, degree_cap, budget)
    except (Inconclusive, DegreeBudgetExceeded, TimeBudgetExceeded) as exc:
        return LevelFailure(n, "Inconclusive", detail=str(exc))
    if not irr.irreducible:
        return LevelFailure(
            n, "NotIrreducible",
            detail=f"{len(irr.factors)} irreducible factors")
    try:
        witnesses = find_condition_R_primes(f, beta, n, budget)
    except PreconditionError as exc:
        return LevelFailure(n, "NoRPrime", detail=str(exc))
    except TimeBudgetExceeded as exc:
        return LevelFailure(n, "Inconclusive", detail=str(exc))
    if not witnesses:
        return LevelFailure(
            n, "NoRPrime",
            detail="no prime satisfies Condition R at this level "
                   "(inconclusive: existence is only asymptotic)")
    exp = 3 ** (n - 1)
    return LevelCertificate(n=n, prime_witness=witnesses[0],
                            irreducibility=irr.certificate,
                            group_order=6 ** exp, group_order_exp=exp)


# ---------------------------------------------------------------------------
# the finite-index report
# ---------------------------------------------------------------------------

@dataclass
class FiniteIndexReport:
    map: CubicMap
    beta: Fraction
    depth: int
    obstructions: dict
    obstruction_names: list
    stability: StabilityEvidence
    levels: list                    # LevelCertificate | LevelFailure
    certified_through: int
    certified_group_order: Optional[int]
    aut_order: int
    conclusion: str

    def as_dict(self):
        from .serialize import jsonable
        levels = []
        for item in self.levels:
            d = item.as_dict()
            if isinstance(item, LevelCertificate):
                d["certified"] = True
            levels.append(d)
        k = self.certified_through
        return {
            "map": {"a": fmt_rational(self.map.a),
                    "b": fmt_rational(self.map.b),
                    "poly": str(self.map.poly())},
            "beta": fmt_rational(self.beta),
            "depth": self.depth,
            "obstructions": jsonable(self.obstructions),
            "obstruction_names": list(self.obstruction_names),
            "stability": jsonable(self.stability),
            "levels": levels,
            "certified_through": k,
            "certified_group_order": (f"6^{(3 ** k - 1) // 2}"
                                      if k > 0 else "1"),
            "certified_group_order_decimal": (str(self.certified_group_order)
                                              if self.certified_group_order
                                              else "1"),
            "aut_order_decimal": str(self.aut_order),
            "conclusion": self.conclusion,
        }


def finite_index_report(f: CubicMap, beta, depth, degree_cap=243,
                        budget=None, collision_bound=12):
    """Run the whole checklist: obstruction checks, stability evidence, and
    per-level certificates through `depth`.  States the strongest sound
    conclusion; never claims anything about the infinite tower."""
    beta = Fraction(beta)
    pcf = is_pcf(f)
    post, post_detail = is_postcritical(f, beta)
    coll = critical_collision(f, collision_bound)
    periodic, periodic_detail = is_periodic(f, beta)
    odd = is_odd(f)

    names = []
    if pcf.value:
        names.append("PCF")
    if post:
        names.append("postcritical basepoint")
    if f.a == 0:
        names.append("single finite critical point (a = 0)")
    elif coll.same_n_witness is not None:
        names.append("same-index critical-orbit collision")
    if periodic:
        names.append("periodic basepoint (not eventually stable)")

    obstructions = {
        "pcf": {"value": pcf.value,
                "orbit_a": pcf.status_plus, "orbit_minus_a": pcf.status_minus},
        "postcritical": {"value": post, "detail": post_detail},
        "a_zero": f.a == 0,
        "collision": coll,
        "beta_periodic": {"value": periodic, "detail": periodic_detail},
        "odd": odd,
    }

    try:
        stability = eventual_stability_evidence(
            f, beta, min(depth, 4) or 1, "full", degree_cap)
    except DegreeBudgetExceeded:
        stability = StabilityEvidence("full", (), (), periodic, False,
                                      note="degree budget exceeded")

    levels = []
    for n in range(1, depth + 1):
        levels.append(level_certificate(f, beta, n, degree_cap, budget))
    certified_through = 0
    for item in levels:
        if isinstance(item, LevelCertificate) and item.n == certified_through + 1:
            certified_through += 1
        else:
            break

    k = certified_through
    group_order = 6 ** ((3 ** k - 1) // 2) if k > 0 else None
    aut = complete_aut_order(3, depth)

    if names:
        conclusion = ("obstructed: " + "; ".join(names)
                      + (f"; levels 1..{k} still certified" if k else ""))
    elif k == depth:
        conclusion = (f"index 1 through level {depth} certified: the level-"
                      f"{depth} image has the full order |Aut(T_{depth})|; "
                      "no claim is made beyond the certified levels")
    else:
        first_fail = levels[k]
        conclusion = (f"levels 1..{k} certified; level {k + 1} not certified "
                      f"({first_fail.reason}); no claim beyond certified levels")
    if not names and k == depth and not stability.stabilized:
        conclusion += "; factor counts not yet stabilized in the window"

    return FiniteIndexReport(map=f, beta=beta, depth=depth,
                             obstructions=obstructions,
                             obstruction_names=names, stability=stability,
                             levels=levels, certified_through=certified_through,
                             certified_group_order=group_order, aut_order=aut,
                             conclusion=conclusion)


# ---------------------------------------------------------------------------
# Frobenius cycle types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleTypeDistribution:
    counts: dict     # sorted degree tuple -> count
    total: int
    skipped: int = 0

    def proportions(self):
        if self.total == 0:
            return {}
        return {k: v / self.total for k, v in self.counts.items()}

    def tv_distance(self, other):
        """Total-variation distance between the two proportion vectors."""
        keys = set(self.counts) | set(other.counts)
        p, q = self.proportions(), other.proportions()
        return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)

    def as_dict(self):
        return {
            "counts": {"+".join(map(str, k)): v
                       for k, v in sorted(self.counts.items())},
            "total": self.total,
            "skipped": self.skipped,
        }


def _reduce_coeffs_mod_p(fractions_list, p):
    """Fractions -> residues mod p, or None if any denominator vanishes."""
    out = []
    for c in fractions_list:
        den = c.denominator % p
        if den == 0:
            return None
        out.append(c.numerator % p * pow(den, p - 2, p) % p)
    return out


def frobenius_sample(f, beta, n, prime_lo, prime_hi):
    """Cycle types of Frobenius on the level-n preimages: for each good prime
    in [prime_lo, prime_hi] with squarefree reduction of f^n - beta, the
    sorted degree sequence of its factorization mod p (distinct-degree
    factorization).  Bad and non-squarefree primes are skipped and counted.
    """
    F = as_unipoly(f)
    d = F.degree
    if d ** n > 729:
        raise TooLarge("3^n (or d^n) must stay <= 729 for sampling")
    beta = Fraction(beta)
    coeffs = list(F.coeffs)
    counts = {}
    total = 0
    skipped = 0
    for p in primes_in_range(prime_lo, prime_hi):
        red = _reduce_coeffs_mod_p(coeffs, p)
        if red is None or red[-1] == 0 or beta.denominator % p == 0:
            skipped += 1
            continue
        arr = modp.compose_power(red, n, p)
        target = arr.copy()
        b = beta.numerator % p * pow(beta.denominator % p, p - 2, p) % p
        target[0] = (int(target[0]) - b) % p
        if not modp.is_squarefree(target, p):
            skipped += 1
            continue
        seq = modp.ddf_degree_sequence(target, p)
        counts[seq] = counts.get(seq, 0) + 1
        total += 1
    return CycleTypeDistribution(counts=counts, total=total, skipped=skipped)


def reference_cycle_distribution(d, n):
    """Exact distribution of leaf-orbit degree sequences over all of
    Aut(T_n), by exhaustive enumeration through the wreath recursion."""
    order = complete_aut_order(d, n)
    if order > 10 ** 4:
        raise TooLarge(f"|Aut(T_{n})| = {order} exceeds the enumeration cap")
    counts = {}
    for sigma in _aut_elements(d, n):
        seq = _cycle_type(sigma)
        counts[seq] = counts.get(seq, 0) + 1
    total = sum(counts.values())
    assert total == order
    return CycleTypeDistribution(counts=counts, total=total, skipped=0)


def _aut_elements(d, n):
    """All automorphisms of the complete d-ary depth-n tree as permutations
    of the d^n leaves (tuples)."""
    if n == 0:
        yield (0,)
        return
    block = d ** (n - 1)
    subs = list(_aut_elements(d, n - 1))
    for pi in permutations(range(d)):
        for gs in product(subs, repeat=d):
            leaf = [0] * (d * block)
            for i in range(d):
                g = gs[i]
                base_src = i * block
                base_dst = pi[i] * block
                for j in range(block):
                    leaf[base_src + j] = base_dst + g[j]
            yield tuple(leaf)


def _cycle_type(perm):
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            ln += 1
        out.append(ln)
    return tuple(sorted(out))
