import pytest

from arboreal.errors import TimeBudgetExceeded
from arboreal.intfactor import (IntFactorization, factor_integer, is_prime,
                                primes_in_range, sieve_primes)
from arboreal.util import TimeBudget

from conftest import rng, trial_factor


def test_small_composite():
    fac = factor_integer(12)
    assert fac.sign == 1 and fac.factors == ((2, 2), (3, 1)) and fac.complete


def test_ramification_numerator():
    # appears as the level-2 numerator f^2(a) - beta in the witness search
    fac = factor_integer(-2575)
    assert fac.sign == -1
    assert fac.factors == ((5, 2), (103, 1))
    assert dict(fac.factors) == trial_factor(-2575)


def test_unit():
    fac = factor_integer(1)
    assert fac.sign == 1 and fac.factors == () and fac.value() == 1


def test_zero_rejected():
    with pytest.raises(ValueError):
        factor_integer(0)


def test_roundtrip_random():
    r = rng(["factor-roundtrip"])
    for _ in range(200):
        n = r.randint(2, 10 ** 12) * r.choice([1, -1])
        fac = factor_integer(n)
        assert fac.value() == n
        assert all(is_prime(p) for p, _ in fac.factors)
        assert dict(fac.factors) == trial_factor(n)
        ps = [p for p, _ in fac.factors]
        assert ps == sorted(ps)


def test_determinism():
    n = 2 ** 4 * 10 ** 15 + 7919 * 7927
    assert factor_integer(n) == factor_integer(n)


def test_large_semiprime():
    p, q = 1_000_003, 1_000_033
    fac = factor_integer(p * q)
    assert fac.factors == ((p, 1), (q, 1))


def test_budget_exceeded_carries_partial():
    budget = TimeBudget(0.0)
    import time
    time.sleep(0.01)
    # a number whose factorization must pass through the rho stage
    n = (10 ** 9 + 7) * (10 ** 9 + 9) * 2 ** 3
    with pytest.raises(TimeBudgetExceeded) as exc:
        factor_integer(n, budget)
    partial = exc.value.partial
    assert isinstance(partial, IntFactorization)
    assert not partial.complete
    assert partial.value() == n


def test_primality_edges():
    assert not is_prime(1)
    assert is_prime(2) and is_prime(3) and is_prime(2 ** 31 - 1)
    assert not is_prime(2 ** 32 + 1)
    # strong pseudoprime to several bases
    assert not is_prime(3215031751)


def test_sieve_and_range():
    assert sieve_primes(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primes_in_range(10, 20) == [11, 13, 17, 19]
    assert primes_in_range(20, 10) == []
