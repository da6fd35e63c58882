import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arboreal.errors import UndefinedError
from arboreal.maps import CubicMap, PolyMap
from arboreal.polynomials import UniPoly
from arboreal.heights import (canonical_height, gcd_height, gcd_height_series,
                              prime_support_sum, transform_bound, weil_height)
from arboreal.dynamics import iterate_point, orbit_status

from conftest import gcd_height_oracle, rand_rational, rng

P = UniPoly.parse
F122 = CubicMap(2, 2)


def test_weil_examples():
    assert weil_height(Fraction(3, 2)) == math.log(3)
    assert weil_height(-14) == math.log(14)
    assert weil_height(0) == 0.0


@settings(max_examples=60, derandomize=True)
@given(st.fractions(min_value=-10 ** 4, max_value=10 ** 4),
       st.fractions(min_value=-10 ** 4, max_value=10 ** 4))
def test_weil_subadditive(x, y):
    assert weil_height(x * y) <= weil_height(x) + weil_height(y) + 1e-12


def test_transform_bound_sound_by_sampling():
    maps = [PolyMap(P("x^3")), F122, PolyMap(P("x^2 - 2")),
            CubicMap(Fraction(1, 2), Fraction(-7, 3)),
            PolyMap(P("2*x^3 - 1/5*x + 3"))]
    r = rng(["c0-sampling"])
    for m in maps:
        tb = transform_bound(m)
        assert tb.c0 >= 0 and tb.escape_threshold == tb.c0
        d = m.degree
        for _ in range(2000):
            x = rand_rational(r, 999, 999)
            lhs = abs(weil_height(m(x)) - d * weil_height(x))
            assert lhs <= tb.c0 + 1e-9, (str(m), str(x), lhs, tb.c0)


def test_transform_bound_adversarial_pell():
    # approximants to sqrt(12) maximize 3h(x) - h(f(x)) for x^3 - 12x + 2
    tb = transform_bound(F122)
    x = Fraction(7, 2)  # 7^2 - 12*2^2 = 1
    lhs = abs(weil_height(F122(x)) - 3 * weil_height(x))
    assert lhs <= tb.c0
    x2 = Fraction(97, 28)  # 97^2 - 12*28^2 = 1
    assert abs(weil_height(F122(x2)) - 3 * weil_height(x2)) <= tb.c0


def test_canonical_power_map():
    hv = canonical_height(PolyMap(P("x^3")), 2, 1e-9)
    assert abs(hv.value - math.log(2)) <= 1e-9
    assert not hv.preperiodic


def test_canonical_preperiodic_flag():
    hv = canonical_height(CubicMap(1, 3), 1, 1e-6)
    assert hv.value == 0.0 and hv.preperiodic


def test_canonical_functional_equation():
    hv2 = canonical_height(F122, 2, 1e-7)
    hv14 = canonical_height(F122, -14, 1e-7)
    assert hv2.value > 0
    assert abs(hv14.value - 3 * hv2.value) <= 1e-6


def test_canonical_rational_coefficient_map():
    f = CubicMap(Fraction(1, 2), Fraction(3, 5))
    r = rng(["badprime"])
    for _ in range(25):
        x = rand_rational(r, 50, 9)
        hx = canonical_height(f, x, 1e-7)
        if hx.preperiodic:
            continue
        hfx = canonical_height(f, f(x), 1e-7)
        tol = 1e-6 + 3 * hx.error_bound + hfx.error_bound
        assert abs(hfx.value - 3 * hx.value) <= tol


def test_canonical_zero_iff_preperiodic_grid():
    for a in range(-3, 4):
        for b in range(-3, 4):
            f = CubicMap(a, b)
            for x in range(-3, 4):
                hv = canonical_height(f, x, 1e-6)
                pre = orbit_status(f, x).preperiodic
                assert hv.preperiodic == pre
                if pre:
                    assert hv.value == 0.0
                else:
                    assert hv.value > 1e-6


def test_gcd_height_examples():
    assert abs(gcd_height(12, 18).finite_part - math.log(6)) < 1e-12
    assert abs(gcd_height(12, 12).finite_part - math.log(12)) < 1e-12
    assert gcd_height(-15, 17).finite_part == 0.0
    full = gcd_height(12, 18).full
    assert abs(full - (math.log(6) + math.log(12))) < 1e-12
    with pytest.raises(UndefinedError):
        gcd_height(0, 3)


def test_gcd_height_against_oracle():
    r = rng(["gcdheight"])
    for _ in range(100):
        x = r.randint(1, 10 ** 6) * r.choice([1, -1])
        y = r.randint(1, 10 ** 6) * r.choice([1, -1])
        assert abs(gcd_height(x, y).finite_part - gcd_height_oracle(x, y)) < 1e-9


def test_gcd_series_first_entry():
    s = gcd_height_series(F122, 1, 1, 1)
    e = s.entries[0]
    assert e.n == 1 and e.finite_part == 0.0 and e.ratio == 0.0
    assert "odd_map" not in s.flags


def test_gcd_series_odd_flag():
    s = gcd_height_series(CubicMap(1, 0), 1, -1, 1)
    assert "odd_map" in s.flags
    # f odd: f(-a) = -f(a); with c = 1, d = -1 the pair is (z - 1, -z + 1)
    z = iterate_point(CubicMap(1, 0), 1, 1)
    assert s.entries[0].finite_part == gcd_height(z - 1, -z + 1).finite_part


def test_gcd_series_collision_flag():
    s = gcd_height_series(CubicMap(1, 1), 2, 3, 1)
    assert "collision_regime" in s.flags


def test_gcd_series_undefined_entries():
    # c = f(a) makes the n = 1 entry undefined
    s = gcd_height_series(F122, -14, 1, 2)
    assert s.entries[0].undefined and not s.entries[1].undefined
    assert "c_in_orbit_of_a" in s.flags


def test_prime_support_examples():
    assert abs(prime_support_sum(F122, 2, 1, 2) - math.log(5)) < 1e-12
    assert prime_support_sum(F122, 2, 1, 1) == 0.0
    # x^3 - 3x + 1, gamma = 1, beta = 0: orbit -1, 3, 19; gcd(19, -1*3) = 1
    assert prime_support_sum(CubicMap(1, 1), 1, 0, 3) == 0.0


def test_prime_support_precondition():
    with pytest.raises(UndefinedError):
        prime_support_sum(F122, 2, -14, 3)  # beta = f(gamma)
