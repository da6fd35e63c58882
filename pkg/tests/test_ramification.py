from fractions import Fraction

import pytest

from arboreal import gfpoly
from arboreal.errors import PreconditionError
from arboreal.maps import CubicMap
from arboreal.polynomials import discriminant
from arboreal.dynamics import compose_poly, iterate_point
from arboreal.ramification import (check_condition_R, check_condition_U,
                                   cross_condition_witnesses,
                                   find_condition_R_primes,
                                   good_separable_reduction)

from conftest import rng

F122 = CubicMap(2, 2)


def test_good_separable_reduction():
    assert good_separable_reduction(F122, 5)
    assert not good_separable_reduction(F122, 3)
    assert not good_separable_reduction(CubicMap(Fraction(1, 5), 1), 5)
    with pytest.raises(PreconditionError):
        good_separable_reduction(F122, 6)


def test_condition_R_example_with_hand_valuations():
    rep = check_condition_R(F122, 1, 5, 1)
    assert rep.satisfied
    expected = {  # recorded valuations must match the hand-derived ones
        "f^0(-a) - beta": ("-3", 0),
        "f^1(-a) - beta": ("17", 0),
        "f^0(a) - beta": ("1", 0),
        "f^1(a) - beta": ("-15", 1),
        "beta": ("1", 0),
    }
    seen = {}
    for c in rep.clauses:
        for name, value, v in c.valuations:
            seen[name] = (value, v)
    assert seen == expected


def test_condition_R_failure_modes():
    assert not check_condition_R(F122, 1, 3, 1).satisfied
    assert not check_condition_R(F122, 1, 3, 1).clause("a").passed
    rep0 = check_condition_R(F122, 0, 7, 1)
    assert not rep0.clause("e").passed  # v_p(0) = +inf != 0


def test_condition_U_examples():
    assert check_condition_U(F122, 1, 11, 1).satisfied
    rep = check_condition_U(F122, 1, 5, 1)
    assert not rep.satisfied and not rep.clause("b").passed
    assert not check_condition_U(F122, 1, 3, 1).clause("a").passed


def test_find_R_primes_levels_1_and_2():
    ws1 = find_condition_R_primes(F122, 1, 1)
    assert [w.prime for w in ws1] == [5]
    ws2 = find_condition_R_primes(F122, 1, 2)
    assert [w.prime for w in ws2] == [103]
    assert ws2[0].report.clause("d").valuations[0][2] == 1


def test_find_R_primes_zero_beta_always_empty():
    assert find_condition_R_primes(F122, 0, 1) == []
    assert find_condition_R_primes(F122, 0, 2) == []


def test_find_R_primes_postcritical_precondition():
    with pytest.raises(PreconditionError):
        find_condition_R_primes(F122, -14, 1)


def test_R_implies_U_shift():
    # fixed witnesses plus a random sweep
    cases = [(F122, Fraction(1))]
    r = rng(["rushift"])
    while len(cases) < 40:
        f = CubicMap(r.randint(1, 6), r.randint(-6, 6))
        beta = Fraction(r.randint(-8, 8))
        cases.append((f, beta))
    checked = 0
    for f, beta in cases:
        for n in (1, 2):
            try:
                ws = find_condition_R_primes(f, beta, n)
            except PreconditionError:
                continue
            for w in ws:
                checked += 1
                if n >= 2:
                    assert check_condition_U(f, beta, w.prime, n - 1).satisfied
                else:
                    rep0 = check_condition_U(f, beta, w.prime, 0)
                    assert rep0.clause("b").passed and rep0.clause("c").passed
    assert checked >= 10


def test_discriminant_identity():
    r = rng(["discid"])
    for _ in range(50):
        a = Fraction(r.randint(-50, 50), r.randint(1, 20))
        b = Fraction(r.randint(-50, 50), r.randint(1, 20))
        beta = Fraction(r.randint(-50, 50), r.randint(1, 20))
        f = CubicMap(a, b)
        lhs = discriminant(f.poly() - beta)
        fa, fb = f(a), f(-a)
        assert lhs == -27 * (fa - beta) * (fb - beta)


def test_condition_U_squarefree_reduction():
    # every U witness makes f^n - beta squarefree mod p (n <= 2)
    r = rng(["usqfree"])
    checked = 0
    for _ in range(30):
        f = CubicMap(r.randint(1, 5), r.randint(-5, 5))
        beta = Fraction(r.randint(-6, 6))
        for n in (1, 2):
            for p in (5, 7, 11, 13, 17):
                rep = check_condition_U(f, beta, p, n)
                if not rep.satisfied:
                    continue
                checked += 1
                g = compose_poly(f, n) - beta
                _, ints = g.primitive()
                fp = gfpoly.from_int_coeffs(ints, p)
                assert gfpoly.is_squarefree(fp, p)
    assert checked >= 20


def test_cross_witnesses_single():
    res = cross_condition_witnesses(F122, [1], 1)
    assert res[0].prime == 5 and res[0].found


def test_cross_witnesses_pair():
    res = cross_condition_witnesses(F122, [1, -1], 1)
    byalpha = {r.alpha: r for r in res}
    assert byalpha[Fraction(1)].prime == 5
    # the candidate 5 must additionally pass U at -1: valuations of
    # 3, -13, -1, 19, -1 at p = 5 are all 0
    urep = dict((a, rep) for a, rep in byalpha[Fraction(1)].u_reports)
    assert urep[Fraction(-1)].satisfied
    assert byalpha[Fraction(-1)].found


def test_cross_witnesses_orbit_related_rejected():
    with pytest.raises(PreconditionError):
        cross_condition_witnesses(F122, [1, iterate_point(F122, 1, 1)], 1)
