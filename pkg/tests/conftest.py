"""Shared test oracles: independent brute-force routes the library code is
checked against.  These deliberately avoid the library's own algorithms."""

import math
import random
from fractions import Fraction
from itertools import permutations


def rng(seed_parts):
    return random.Random("|".join(str(p) for p in seed_parts))


def rand_rational(r, max_num=999, max_den=999, nonzero=False):
    while True:
        q = Fraction(r.randint(-max_num, max_num), r.randint(1, max_den))
        if not (nonzero and q == 0):
            return q


# ---------------------------------------------------------------------------
# trial-division factorization oracle
# ---------------------------------------------------------------------------

def trial_factor(n):
    """{prime: exponent} for |n| by pure trial division (oracle)."""
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def gcd_height_oracle(x, y):
    """Finite gcd-height by merged factorization of the numerators."""
    fx = trial_factor(Fraction(x).numerator)
    fy = trial_factor(Fraction(y).numerator)
    total = 0.0
    for p in set(fx) & set(fy):
        total += math.log(p) * min(fx[p], fy[p])
    return total


# ---------------------------------------------------------------------------
# rooted-tree automorphism enumeration oracle
# ---------------------------------------------------------------------------

def complete_tree(d, n):
    """(children, marks) for the complete d-ary tree of depth n; vertex 0 is
    the root, ids breadth-first."""
    children = {0: []}
    frontier = [0]
    nxt = 1
    for _ in range(n):
        new_frontier = []
        for v in frontier:
            for _ in range(d):
                children[v].append(nxt)
                children[nxt] = []
                new_frontier.append(nxt)
                nxt += 1
        frontier = new_frontier
    return children, set()


def shape_children(shape):
    """children dict + marks set from a library TreeShape."""
    children = {v.vid: list(v.children) for v in shape.vertices}
    marks = {v.vid for v in shape.vertices if v.mark is not None}
    return children, marks


def enumerate_automorphisms(children, marks, root=0):
    """All root-fixing automorphisms that fix every marked vertex pointwise,
    by exhaustive backtracking over child matchings (no isomorphism-class
    shortcuts).  Yields mapping dicts."""

    def submaps(v, w):
        if (v in marks) != (w in marks):
            return
        if v in marks and v != w:
            return
        kv, kw = children[v], children[w]
        if len(kv) != len(kw):
            return
        base = {v: w}
        if not kv:
            yield base
            return
        for perm in permutations(kw):
            stack = [base]
            for cv, cw in zip(kv, perm):
                new_stack = []
                for partial in stack:
                    for sub in submaps(cv, cw):
                        merged = dict(partial)
                        merged.update(sub)
                        new_stack.append(merged)
                stack = new_stack
                if not stack:
                    break
            yield from stack

    yield from submaps(root, root)


def count_automorphisms(children, marks, root=0):
    return sum(1 for _ in enumerate_automorphisms(children, marks, root))


# ---------------------------------------------------------------------------
# orbit oracles
# ---------------------------------------------------------------------------

def brute_orbit_classify(f, x, depth=50, cutoff=10 ** 6):
    """("preperiodic", tail, period) or ("escaping",): revisit search with a
    size cutoff past which monotone real escape makes revisits impossible."""
    seen = {Fraction(x): 0}
    vals = [Fraction(x)]
    for k in range(1, depth + 1):
        nxt = f(vals[-1])
        if nxt in seen:
            return ("preperiodic", seen[nxt], k - seen[nxt])
        if abs(nxt.numerator) > cutoff * nxt.denominator:
            return ("escaping",)
        seen[nxt] = k
        vals.append(nxt)
    raise AssertionError("oracle unresolved: raise depth or cutoff")


def brute_collision(f, N):
    """First f^m(a) = f^n(-a) with 1 <= m, n <= N by double loop, ordered by
    (m + n, m); None if absent in the box."""
    o1 = [Fraction(f.a)]
    o2 = [Fraction(-f.a)]
    for _ in range(N):
        o1.append(f(o1[-1]))
        o2.append(f(o2[-1]))
    best = None
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            if o1[m] == o2[n]:
                key = (m + n, m)
                if best is None or key < best[0]:
                    best = (key, (m, n))
    return None if best is None else best[1]
