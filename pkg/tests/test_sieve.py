import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from qprime.sieve import (
    Arith,
    arith,
    divisors,
    factorint,
    is_prime_u64,
    prime_table,
    primes_upto,
    smallest_prime_factor_table,
    vaughan_check,
)


def test_primes_upto_matches_sympy():
    assert primes_upto(10**5).tolist() == oracles.primes_list(10**5)
    assert primes_upto(1).tolist() == []
    assert primes_upto(2).tolist() == [2]


def test_prime_table_segments_agree_with_one_block():
    lo, hi = 10**6 - 777, 10**6 + 5000
    small = prime_table(lo, hi, ("lambda", "mu", "tau", "phi"), segment_bytes=1000)
    whole = prime_table(lo, hi, ("lambda", "mu", "tau", "phi"))
    assert np.array_equal(small.prime_bits, whole.prime_bits)
    assert small.primes().tolist() == [p for p in range(lo, hi) if oracles.isprime(p)]


def test_prime_table_layers_against_brute():
    t = prime_table(0, 2000, ("lambda", "mu", "tau", "phi"))
    for n in range(1, 2000):
        assert t.lambda_vm[n] == pytest.approx(oracles.mangoldt(n), abs=1e-12)
        assert t.mu[n] == oracles.mobius(n)
        assert t.tau[n] == sum(1 for k in range(1, n + 1) if n % k == 0)
        assert t.phi[n] == oracles.euler_phi(n)


def test_prime_table_rejects_bad_ranges():
    with pytest.raises(ValueError):
        prime_table(5, 5)
    with pytest.raises(ValueError):
        prime_table(0, 10, ("sigma",))
    t = prime_table(0, 10, ())
    with pytest.raises(ValueError):
        t.Lambda(3)


def test_is_prime_u64_known_values():
    # strong pseudoprimes to small bases and the largest 64-bit prime
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not is_prime_u64(n)
    assert is_prime_u64(2**64 - 59)
    assert not is_prime_u64(2**64 - 1)
    assert is_prime_u64(2**61 - 1)


@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_is_prime_u64_property(n):
    assert is_prime_u64(n) == oracles.isprime(n)


@given(st.integers(min_value=1, max_value=10**15))
def test_factorint_reconstructs(n):
    f = factorint(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(oracles.isprime(p) for p in f)


@given(st.integers(min_value=1, max_value=10**6))
def test_divisors_and_arith(n):
    ds = divisors(n)
    assert ds == sorted(ds) and all(n % d == 0 for d in ds)
    assert arith(n, Arith.TAU) == len(ds)
    assert arith(n, Arith.MU) == oracles.mobius(n)
    assert arith(n, Arith.LAMBDA) == pytest.approx(oracles.mangoldt(n))
    # sum over d | n of phi(d) = n
    assert sum(arith(d, Arith.PHI) for d in ds) == n


def test_smallest_prime_factor_table():
    spf = smallest_prime_factor_table(5000)
    assert spf[0] == 0 and spf[1] == 1
    for n in range(2, 5001):
        assert spf[n] == min(oracles.sym_factorint(n))


@given(st.integers(min_value=1, max_value=10**5), st.integers(1, 400), st.integers(1, 400))
def test_vaughan_identity_property(n, Y, Z):
    expect = oracles.mangoldt(n) if n > Z else 0.0
    assert vaughan_check(n, Y, Z) == pytest.approx(expect, abs=1e-9)


def test_vaughan_rejects_large_n():
    with pytest.raises(ValueError):
        vaughan_check(10**7 + 1, 10, 10)
