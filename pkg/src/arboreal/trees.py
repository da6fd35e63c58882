"""Stunted preimage trees, multitrees, and automorphism-order bookkeeping.

Tree shapes are computed entirely from Q[x] data: distinct n-th preimages are
the roots of the squarefree part of f^n - beta, strict levels remove roots
already seen at earlier levels (gcd division), per-factor child counts come
from degree ratios, and Galois conjugacy makes subtrees within one
irreducible factor isomorphic.  No algebraic numbers are ever constructed.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DegreeBudgetExceeded, PreconditionError
from .maps import CubicMap, as_unipoly
from .polynomials import UniPoly, resultant
from .polyfactor import factor_polynomial, squarefree_part
from .rationals import fmt_rational


def complete_aut_order(d, n):
    """|Aut(T_n)| = (d!)^((d^n - 1)/(d - 1)) for the complete d-ary tree."""
    if d < 2 or n < 0:
        raise ValueError("need d >= 2, n >= 0")
    return math.factorial(d) ** ((d ** n - 1) // (d - 1))


def relative_aut_order(d, n):
    """|Aut(T_n/T_{n-1})| = (d!)^(d^(n-1)): automorphisms fixing level n-1."""
    if n < 1:
        return 1
    return math.factorial(d) ** (d ** (n - 1))


@dataclass
class Vertex:
    vid: int
    level: int
    parent: Optional[int]
    children: list = field(default_factory=list)
    mark: Optional[str] = None       # unique label; only rational vertices
    tag: tuple = ()                  # (level, factor index): conjugacy class
    value: Optional[Fraction] = None  # set for rational vertices


@dataclass
class LevelFactor:
    level: int
    poly: UniPoly
    children_per_vertex: int
    critical_hit: Optional[str]
    parent_factor: Optional[int]  # index within the previous level's factors


@dataclass
class TreeShape:
    beta: Fraction
    depth: int
    vertices: list
    root: int
    level_sizes: list
    factor_levels: list  # list per level of [LevelFactor, ...]
    strict_polys: list   # strict-level polynomials s_n

    def vertex(self, vid):
        return self.vertices[vid]

    def marked(self):
        return [v for v in self.vertices if v.mark is not None]


def _strict_level_polys(F, beta, depth, degree_cap):
    """s_0..s_depth: monic squarefree polynomials whose roots are the strict
    n-th preimages of beta."""
    if F.degree ** depth > degree_cap:
        raise DegreeBudgetExceeded(
            f"deg(f)^depth = {F.degree ** depth} exceeds cap {degree_cap}")
    x = UniPoly.x()
    polys = [UniPoly((-Fraction(beta), 1))]
    fn = x
    for n in range(1, depth + 1):
        fn = F.compose(fn)
        pn = squarefree_part(fn - Fraction(beta))
        for s in polys:
            g = pn.gcd(s)
            if g.degree > 0:
                pn = (pn // g).monic()
        polys.append(pn)
    return polys


def _critical_value_poly(F):
    """Squarefree polynomial over Q whose roots are the critical values of F:
    Res_x(F(x) - z, F'(x)) as a polynomial in z."""
    dF = F.derivative()
    # evaluate the resultant at interpolation points and rebuild: cheaper and
    # simpler is direct: treat z symbolically via linear algebra -- but the
    # degree is small, so interpolate through deg(dF)+1... use the closed
    # route instead: R(z) = lc(dF)^? * prod over roots w of dF of (F(w) - z);
    # we avoid algebraic roots by interpolation on deg(dF)+1 rational points.
    m = dF.degree
    if m <= 0:
        return UniPoly.one()
    pts = []
    z = 0
    while len(pts) < m + 1:
        pts.append(Fraction(z))
        z += 1
    vals = [resultant(F - UniPoly.constant(c), dF) for c in pts]
    R = _interpolate(pts, vals)
    if R.is_zero:
        return UniPoly.one()
    return squarefree_part(R)


def _interpolate(xs, ys):
    """Lagrange interpolation over Q."""
    out = UniPoly.zero()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        term = UniPoly.constant(yi)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * UniPoly((-xj, 1)) * Fraction(1, xi - xj)
        out = out + term
    return out


def _critical_hit_label(f, g, crit_poly):
    """Label when the factor g contains a critical value of the map."""
    if isinstance(f, CubicMap):
        va, vb = f.critical_values()
        hits = []
        if g(va) == 0:
            hits.append(f"f(a) = {fmt_rational(va)}")
        if g(vb) == 0 and vb != va:
            hits.append(f"f(-a) = {fmt_rational(vb)}")
        if hits:
            return "; ".join(hits)
        return None
    if crit_poly.degree > 0 and g.gcd(crit_poly).degree > 0:
        if g.degree == 1:
            return f"critical value {fmt_rational(-g[0])}"
        return "critical value (irrational)"
    return None


def stunted_tree(f, beta, depth, degree_cap=243):
    """The stunted tree T^s_depth(beta) with conjugacy-tagged vertices and the
    per-level factor table."""
    F = as_unipoly(f)
    beta = Fraction(beta)
    strict = _strict_level_polys(F, beta, depth, degree_cap)
    crit_poly = _critical_value_poly(F)

    # factor each strict level
    level_factors = []
    for n, s in enumerate(strict):
        if s.degree == 0:
            level_factors.append([])
            continue
        _, facs = factor_polynomial(s)
        entry = []
        for g, _mult in facs:
            entry.append(LevelFactor(level=n, poly=g, children_per_vertex=0,
                                     critical_hit=_critical_hit_label(f, g, crit_poly),
                                     parent_factor=None))
        level_factors.append(entry)

    # parent factors and per-vertex child counts (a vertex's parent is its
    # image under f, always one strict level up)
    for n in range(1, depth + 1):
        for lf in level_factors[n]:
            parent = None
            for idx, pf in enumerate(level_factors[n - 1]):
                if lf.poly.divides(pf.poly.compose(F)):
                    parent = idx
                    break
            assert parent is not None, "strict level lost its parent"
            lf.parent_factor = parent
        if not level_factors[n]:
            assert all(not level_factors[m] for m in range(n + 1, depth + 1)), \
                "empty strict level cannot regrow"
    for n in range(depth):
        for idx, pf in enumerate(level_factors[n]):
            total_children = 0
            for lf in level_factors[n + 1]:
                if lf.parent_factor == idx:
                    total_children += lf.poly.degree
            assert total_children % pf.poly.degree == 0, \
                "conjugacy forces uniform child counts"
            pf.children_per_vertex = total_children // pf.poly.degree

    # concrete vertices, deterministic order
    vertices = []

    def new_vertex(level, parent, tag, value):
        v = Vertex(vid=len(vertices), level=level, parent=parent, tag=tag,
                   value=value)
        vertices.append(v)
        if parent is not None:
            vertices[parent].children.append(v.vid)
        return v.vid

    per_factor_vertices = []  # per level: {factor idx: [vids]}
    rootval = beta
    root = new_vertex(0, None, (0, 0), rootval)
    per_factor_vertices.append({0: [root]})
    for n in range(1, depth + 1):
        table = {}
        for fidx, lf in enumerate(level_factors[n]):
            parents = per_factor_vertices[n - 1][lf.parent_factor]
            assert lf.poly.degree % len(parents) == 0
            k = lf.poly.degree // len(parents)
            vids = []
            value = -lf.poly[0] if lf.poly.degree == 1 else None
            for pv in parents:
                for _ in range(k):
                    vids.append(new_vertex(n, pv, (n, fidx), value))
            table[fidx] = vids
        per_factor_vertices.append(table)

    level_sizes = [max(0, s.degree) for s in strict]
    return TreeShape(beta=beta, depth=depth, vertices=vertices, root=root,
                     level_sizes=level_sizes, factor_levels=level_factors,
                     strict_polys=strict)


def rooted_aut_order(shape: TreeShape):
    """Order of the rooted-tree automorphism group fixing every marked vertex
    pointwise: bottom-up canonical hashing, marked vertices getting unique
    colors, multiplying m! over each multiset of m isomorphic child subtrees."""
    order = 1
    canon = {}
    by_level = {}
    for v in shape.vertices:
        by_level.setdefault(v.level, []).append(v)
    for level in sorted(by_level, reverse=True):
        for v in by_level[level]:
            kids = sorted(canon[c] for c in v.children)
            counts = {}
            for c in kids:
                counts[c] = counts.get(c, 0) + 1
            for m in counts.values():
                order *= math.factorial(m)
            mark_key = (1, v.mark) if v.mark is not None else (0, "")
            canon[v.vid] = (mark_key, tuple(kids))
    return order


def _anon_canon(shape: TreeShape, vid):
    """Canonical form with marks as anonymous pins (for the alternative
    multitree-permutation semantics)."""
    v = shape.vertex(vid)
    kids = tuple(sorted(_anon_canon(shape, c) for c in v.children))
    return (v.mark is not None, kids)


# ---------------------------------------------------------------------------
# grand orbits and multitrees
# ---------------------------------------------------------------------------

@dataclass
class GrandOrbitPartition:
    classes: list            # list of lists of Fractions (input order)
    representatives: list    # one per class
    conclusive: bool         # separation of all classes certified?
    notes: list


def _forward_values(f, x, bound, stop_height):
    """x, f(x), ..., until revisit or height passes stop_height, at least
    `bound` steps if the orbit survives."""
    from .heights import weil_height
    vals = [Fraction(x)]
    seen = {vals[0]}
    escaped = False
    k = 0
    while True:
        k += 1
        nxt = f(vals[-1])
        if nxt in seen:
            return vals, "preperiodic"
        vals.append(nxt)
        seen.add(nxt)
        if weil_height(nxt) > stop_height:
            escaped = True
        if escaped and k >= bound:
            return vals, "escaping"


def grand_orbit_partition(f, basepoints, bound=8):
    """Partition the basepoints into grand-orbit classes (y ~ z iff
    f^n(y) = f^m(z) for some n, m >= 0), by bounded search with height
    pruning.  Separation of two escaping orbits is certified by the
    canonical-height ratio test; otherwise the partition is flagged
    "separate up to bound"."""
    from .heights import transform_bound, weil_height
    pts = [Fraction(b) for b in basepoints]
    if len(set(pts)) != len(pts):
        raise PreconditionError("basepoints must be distinct")
    tb = transform_bound(f)
    orbits = {}
    kinds = {}
    stop = tb.escape_threshold + max(weil_height(b) for b in pts)
    for b in pts:
        orbits[b], kinds[b] = _forward_values(f, b, bound, stop)
    # escaping orbits must certifiably overtop every finite orbit value
    finite_tops = [weil_height(v) for b in pts if kinds[b] == "preperiodic"
                   for v in orbits[b]]
    stop2 = max([stop] + finite_tops)
    for b in pts:
        if kinds[b] == "escaping":
            while all(weil_height(v) <= stop2 for v in orbits[b][1:]):
                orbits[b].append(f(orbits[b][-1]))

    classes = [[pts[0]]]
    notes = []
    conclusive = True
    for b in pts[1:]:
        placed = False
        for cls in classes:
            sure_all = True
            for member in cls:
                meet, sure, note = _orbits_meet(f, member, b, orbits, kinds,
                                                bound)
                if meet:
                    cls.append(b)
                    placed = True
                    break
                if not sure:
                    sure_all = False
                    notes.append(note)
            if placed:
                break
            if not sure_all:
                conclusive = False
        if not placed:
            classes.append([b])

    reps = [_class_representative(f, cls, orbits, kinds, pts) for cls in classes]
    return GrandOrbitPartition(classes=classes, representatives=reps,
                               conclusive=conclusive, notes=notes)


def _orbits_meet(f, y, z, orbits, kinds, bound):
    """(meet?, certain?, note).  Meeting is exact; separation is certified for
    preperiodic pairs and via the canonical-height ratio for escaping pairs."""
    from .heights import canonical_height
    vy, vz = set(orbits[y]), set(orbits[z])
    if vy & vz:
        return True, True, ""
    ky, kz = kinds[y], kinds[z]
    if ky == "preperiodic" and kz == "preperiodic":
        return False, True, ""
    if ky != kz:
        # finite orbit vs certified escape: the escaping window was extended
        # past every finite-orbit height, so later escaping values are too
        # tall to meet the finite one
        return False, True, ""
    d = f.degree
    h1 = canonical_height(f, y, 1e-9)
    h2 = canonical_height(f, z, 1e-9)
    if h1.value > 0 and h2.value > 0:
        r = math.log(h1.value / h2.value) / math.log(d)
        slack = (h1.error_bound / h1.value + h2.error_bound / h2.value) \
            / math.log(d) + 1e-9
        if abs(r - round(r)) > slack:
            return False, True, ""
    return False, False, (
        f"{fmt_rational(y)} and {fmt_rational(z)}: separate up to bound "
        f"{bound} (both escaping, height ratio near a d-power)")


def _class_representative(f, cls, orbits, kinds, all_pts):
    """"Farthest forward": a periodic member if one exists, else a member
    whose forward orbit avoids the basepoint set; ties break by input order."""
    bset = set(all_pts)
    for b in cls:
        if kinds[b] == "preperiodic":
            vals = orbits[b]
            # periodic iff the orbit revisits b itself
            if f(vals[-1]) == b or b in vals[1:]:
                return b
    for b in cls:
        if not (set(orbits[b][1:]) & bset):
            return b
    return cls[0]


@dataclass
class MultitreeComponent:
    representative: Fraction
    shape: TreeShape
    marks: list          # (beta, level) pairs realized in this component
    aut_order: int       # |A_i|: automorphisms fixing all marks


@dataclass
class Multitree:
    basepoints: list
    partition: GrandOrbitPartition
    components: list
    aut_order_root_fixing: int   # prod |A_i|  (default semantics, |H| = 1)
    h_alt: int                   # permutations of isomorphic marked shapes
    aut_order_alt: int           # prod |A_i| * h_alt
    flags: dict


def build_multitree(f, basepoints, depth, bound=8, degree_cap=243):
    """Stunted trees at grand-orbit representatives with every basepoint
    marked.  The automorphism order is reported under the root-fixing
    semantics (|H| = 1) and under the alternative reading where components
    with isomorphic marked shapes may be permuted."""
    pts = [Fraction(b) for b in basepoints]
    part = grand_orbit_partition(f, pts, bound)
    flags = {}
    if not part.conclusive:
        flags["partition"] = "classes separate only up to bound"

    components = []
    for cls, rep in zip(part.classes, part.representatives):
        placed = []
        shape = stunted_tree(f, rep, depth, degree_cap)
        comp_marks = []
        for b in cls:
            lvl = _strict_level_of(f, b, rep, depth + bound + 8)
            if lvl is None:
                placed.append(b)
                continue
            if lvl > depth:
                flags.setdefault("marks_beyond_depth", []).append(
                    f"{fmt_rational(b)} sits at level {lvl} > depth {depth} "
                    f"in the component of {fmt_rational(rep)}")
                continue
            vid = _find_rational_vertex(shape, b, lvl)
            assert vid is not None, "strict preimage missing its vertex"
            shape.vertex(vid).mark = fmt_rational(b)
            comp_marks.append((b, lvl))
        components.append(MultitreeComponent(
            representative=rep, shape=shape, marks=comp_marks,
            aut_order=rooted_aut_order(shape)))
        for b in placed:
            # class member that is not an iterated preimage of the chosen
            # representative (merge outside the basepoint set): own component
            shape_b = stunted_tree(f, b, depth, degree_cap)
            shape_b.vertex(shape_b.root).mark = fmt_rational(b)
            components.append(MultitreeComponent(
                representative=b, shape=shape_b, marks=[(b, 0)],
                aut_order=rooted_aut_order(shape_b)))
            flags.setdefault("class_split", []).append(
                f"{fmt_rational(b)} merges with its class outside the "
                "basepoint set; rendered as its own component")

    total = 1
    for comp in components:
        total *= comp.aut_order
    shapes = {}
    for comp in components:
        key = _anon_canon(comp.shape, comp.shape.root)
        shapes[key] = shapes.get(key, 0) + 1
    h_alt = 1
    for m in shapes.values():
        h_alt *= math.factorial(m)
    if is_odd_map(f):
        pairs = plus_minus_pairs([c.shape for c in components])
        if pairs:
            flags["odd_symmetry"] = pairs
    return Multitree(basepoints=pts, partition=part, components=components,
                     aut_order_root_fixing=total, h_alt=h_alt,
                     aut_order_alt=total * h_alt, flags=flags)


def _mirror(g):
    """Monic polynomial whose roots are the negatives of g's roots."""
    return UniPoly([(-1) ** i * c for i, c in enumerate(g.coeffs)]).monic()


def is_odd_map(f):
    F = as_unipoly(f)
    return all(F[i] == 0 for i in range(0, F.degree + 1, 2))


def plus_minus_pairs(shapes):
    """Descriptions of gamma with both gamma and -gamma among the vertices of
    the given tree shapes (exact, via mirrored factors).  For an odd map such
    a pair obstructs stunted/multitree maximality."""
    factors = []
    for shape in shapes:
        for level in shape.factor_levels:
            for lf in level:
                factors.append(lf.poly)
    out = []
    seen = set()
    for i, g in enumerate(factors):
        for h in factors[i:]:
            if _mirror(h) == g:
                if g == h and g.degree == 1 and g[0] == 0:
                    desc = "0 (self-negative vertex)"
                elif g == h:
                    desc = f"roots of {g} (mirror-symmetric factor)"
                else:
                    desc = f"roots of {g} and of {h}"
                if desc not in seen:
                    seen.add(desc)
                    out.append(desc)
    return out


def _strict_level_of(f, b, rep, depth):
    """Minimal k >= 0 with f^k(b) = rep, or None within depth."""
    x = Fraction(b)
    for k in range(depth + 1):
        if x == rep:
            return k
        x = f(x)
    return None


def _find_rational_vertex(shape, value, level):
    for v in shape.vertices:
        if v.level == level and v.value == value:
            return v.vid
    return None


# ---------------------------------------------------------------------------
# index trajectories
# ---------------------------------------------------------------------------

def index_trajectory(f, beta, depth, mode="full", degree_cap=243):
    """Per-level comparison of the ambient automorphism order against the
    certified Galois level order (from the level certificates), in full-tree
    or stunted-tree mode."""
    from .galois import level_certificate, LevelCertificate
    F = as_unipoly(f)
    d = F.degree
    rows = [{"n": 0, "aut_relative": 1, "aut_cumulative": 1,
             "certified_relative": 1, "certified_cumulative": 1}]
    shape = stunted_tree(f, beta, depth, degree_cap) if mode == "stunted" else None
    notes = []
    if mode == "full":
        from .dynamics import is_periodic, is_postcritical
        if isinstance(f, CubicMap):
            post, _ = is_postcritical(f, beta)
        else:
            post = None
        peri, _ = is_periodic(f, beta)
        if peri or post:
            notes.append("beta is periodic or postcritical: the full tree "
                         "has repeated vertices and the full-index "
                         "comparison is obstructed")
    cum_aut = 1
    cum_cert = 1
    for n in range(1, depth + 1):
        if mode == "full":
            rel = relative_aut_order(d, n)
        else:
            rel = _stunted_relative_order(shape, n)
        cum_aut *= rel
        cert = None
        if isinstance(f, CubicMap):
            res = level_certificate(f, beta, n)
            if isinstance(res, LevelCertificate):
                cert = res.group_order
        if cert is not None and cum_cert is not None:
            cum_cert *= cert
        else:
            cum_cert = None
        rows.append({"n": n, "aut_relative": rel, "aut_cumulative": cum_aut,
                     "certified_relative": cert,
                     "certified_cumulative": cum_cert})
    return {"mode": mode, "rows": rows, "notes": notes}


def _stunted_relative_order(shape, n):
    """Automorphisms of T^s_n fixing T^s_{n-1} pointwise: independent
    permutations of isomorphic-subtree siblings, which at the bottom level
    means prod (children count)! over level n-1 vertices."""
    order = 1
    for v in shape.vertices:
        if v.level == n - 1:
            order *= math.factorial(len([c for c in v.children
                                         if shape.vertex(c).level == n]))
    return order
