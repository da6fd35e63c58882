from fractions import Fraction

import pytest

from arboreal.errors import NeedsExtension, NotCubicError
from arboreal.maps import CubicMap, PolyMap, as_map
from arboreal.polynomials import UniPoly
from arboreal.dynamics import (compose_poly, critical_collision, is_odd,
                               is_pcf, is_periodic, is_postcritical,
                               iterate_point, normalize_cubic, orbit_status)

from conftest import brute_collision, brute_orbit_classify, rng

P = UniPoly.parse
F122 = CubicMap(2, 2)     # x^3 - 12x + 2
F30 = CubicMap(1, 0)      # x^3 - 3x
F31 = CubicMap(1, 1)      # x^3 - 3x + 1
F33 = CubicMap(1, 3)      # x^3 - 3x + 3


def test_normalize_examples():
    norm = normalize_cubic(1, 0, -12, 2)
    assert norm.map == CubicMap(2, 2)
    assert (norm.lam, norm.mu) == (1, 0)
    assert not norm.single_critical_point

    norm0 = normalize_cubic(1, 0, 0, 5)
    assert norm0.map == CubicMap(0, 5)
    assert norm0.single_critical_point

    with pytest.raises(NeedsExtension) as exc:
        normalize_cubic(1, 0, -1, 0)
    assert str(exc.value.minimal_poly) == "x^2 - 1/3"

    with pytest.raises(NotCubicError):
        normalize_cubic(0, 1, 0, 0)


def test_normalize_conjugation_transports_dynamics():
    # g with a quadratic term; sigma(x) = lam x + mu conjugates g to the
    # normal form, so sigma(g(x)) = f(sigma(x))
    c3, c2, c1, c0 = 1, 3, -9, 2
    norm = normalize_cubic(c3, c2, c1, c0)
    g = UniPoly((c0, c1, c2, c3))
    f = norm.map
    for x in (Fraction(0), Fraction(1), Fraction(-2, 3)):
        assert norm.lam * g(x) + norm.mu == f(norm.lam * x + norm.mu)


def test_iterate_examples():
    assert iterate_point(F122, 2, 1) == -14
    assert iterate_point(F122, 2, 2) == -2574
    assert iterate_point(F122, Fraction(5, 7), 0) == Fraction(5, 7)


def test_compose_examples():
    assert compose_poly(F30, 2) == P("x^9 - 9*x^7 + 27*x^5 - 30*x^3 + 9*x")
    assert compose_poly(PolyMap(P("x^2 - 2")), 2) == P("x^4 - 4*x^2 + 2")
    assert compose_poly(F122, 1) == F122.poly()


def test_gap_preservation():
    # normal form is preserved: zero coefficient at 3^n - 1 and
    # 3^(n-1) * (-3a^2) at 3^n - 2
    for f in (F122, F31, CubicMap(Fraction(1, 2), 3)):
        for n in (1, 2, 3, 4):
            g = compose_poly(f, n)
            assert g.lc == 1
            assert g[3 ** n - 1] == 0
            assert g[3 ** n - 2] == 3 ** (n - 1) * f.p_coeff


def test_compose_matches_iterate():
    r = rng(["compose-iterate"])
    for f in (F122, F31):
        for n in (1, 2, 3):
            g = compose_poly(f, n)
            for _ in range(34):
                x = Fraction(r.randint(-30, 30), r.randint(1, 9))
                assert g(x) == iterate_point(f, x, n)


def test_oddness():
    assert is_odd(F30) and not is_odd(F122) and not is_odd(F31)
    r = rng(["odd"])
    for _ in range(20):
        x = Fraction(r.randint(-20, 20), r.randint(1, 7))
        for n in (1, 2, 3):
            assert iterate_point(F30, -x, n) == -iterate_point(F30, x, n)


def test_orbit_status_examples():
    st = orbit_status(F30, 1)
    assert st.preperiodic and (st.tail_length, st.period) == (1, 1)
    st2 = orbit_status(F33, 1)
    assert st2.preperiodic and (st2.tail_length, st2.period) == (0, 1)
    st3 = orbit_status(F122, 2)
    assert st3.kind == "escaping" and st3.height_at_escape > 0


def test_orbit_status_agrees_with_brute_force():
    for a in range(-3, 4):
        for b in range(-3, 4):
            f = CubicMap(a, b)
            for x in range(-3, 4):
                want = brute_orbit_classify(f, x)
                got = orbit_status(f, x)
                if want[0] == "preperiodic":
                    assert got.preperiodic
                    assert (got.tail_length, got.period) == want[1:]
                else:
                    assert not got.preperiodic


def test_is_pcf_examples():
    res = is_pcf(F30)
    assert res.value
    assert res.status_plus.preperiodic and res.status_minus.preperiodic
    assert not is_pcf(F122).value
    assert not is_pcf(F33).value  # a fixed, -a escapes: -1 -> 5 -> 113 -> ...
    assert iterate_point(F33, -1, 2) == 113


def test_collision_examples():
    rep = critical_collision(F31, 6)
    assert rep.found and (rep.witness.m, rep.witness.n) == (2, 1)
    assert rep.witness.value == 3 and not rep.witness.same_n
    assert rep.same_n_witness is None
    assert rep.same_n_absence == "proven"

    rep2 = critical_collision(F122, 10)
    assert not rep2.found and rep2.general_absence == "proven"

    rep3 = critical_collision(F30, 3)
    assert not rep3.found and rep3.general_absence == "proven"


def test_collision_matches_brute_force_grid():
    for a in range(-3, 4):
        if a == 0:
            continue
        for b in range(-3, 4):
            f = CubicMap(a, b)
            want = brute_collision(f, 6)
            got = critical_collision(f, 6)
            if want is None:
                assert got.witness is None or got.witness.m + got.witness.n > 12
            else:
                assert (got.witness.m, got.witness.n) == want


def test_postcritical_examples():
    assert is_postcritical(F122, -14)[0]
    ans, detail = is_postcritical(F122, 1)
    assert not ans and detail["proof_plus"] in ("finite-orbit", "height-escape")
    assert is_postcritical(F30, 2)[0]  # 2 = f(-1)


def test_postcritical_orbit_values():
    for f in (F122, F31, F33):
        for k in range(1, 6):
            assert is_postcritical(f, iterate_point(f, f.a, k))[0]


def test_periodic_examples():
    ans, cyc = is_periodic(PolyMap(P("x^2 - 1")), 0)
    assert ans and cyc["period"] == 2
    ans2, cyc2 = is_periodic(PolyMap(P("x^2 - 2")), 2)
    assert ans2 and cyc2["period"] == 1
    assert not is_periodic(F122, 1)[0]


def test_as_map_recognizes_normal_form():
    m = as_map(P("x^3 - 12*x + 2"))
    assert isinstance(m, CubicMap) and m == CubicMap(2, 2)
    m2 = as_map(P("x^3 - x + 1"))
    assert isinstance(m2, PolyMap)


def test_compose_degree_budget():
    from arboreal.errors import DegreeBudgetExceeded
    with pytest.raises(DegreeBudgetExceeded):
        compose_poly(F122, 6)  # 3^6 = 729 > 243
    assert compose_poly(F122, 5).degree == 243
