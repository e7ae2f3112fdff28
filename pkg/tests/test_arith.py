"""Integer kernel tests: factoring, sieves, CRT, modular square roots.

Every expected value here is either computed by an independent brute-force
oracle written in this file, or is small enough to check by hand.
"""

from __future__ import annotations

import random
from collections import defaultdict

import pytest

from quadclass.arith import (
    crt_solve,
    factor_small,
    factorize,
    iroot,
    is_prime,
    is_squarefree,
    kronecker,
    mobius,
    mobius_sieve,
    primes_up_to,
    smallest_prime_factors,
    sqrt_mod,
    squarefree_sieve,
)
from quadclass.errors import BudgetError


def brute_factor(n: int) -> list[tuple[int, int]]:
    """Trial division all the way up; the oracle for everything else."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_factorize_small_range():
    for n in range(1, 2000):
        assert list(factorize(n).factors) == brute_factor(n), n


def test_factorize_random_words():
    rng = random.Random(12)
    for _ in range(300):
        n = rng.randrange(2, 10**9)
        fac = factorize(n)
        assert list(fac.factors) == brute_factor(n), n
        prod = 1
        for p, e in fac.factors:
            prod *= p**e
        assert prod == n


def test_factorize_edge_values():
    assert factorize(1).factors == ()
    assert factorize(127).factors == ((127, 1),)
    assert factorize(2**10).factors == ((2, 10),)


def test_factorize_semiprime_beyond_trial_division():
    p, q = 1_000_000_007, 998_244_353
    fac = factorize(p * q)
    assert fac.factors == ((q, 1), (p, 1))


def test_factorize_budget_refusal():
    with pytest.raises(BudgetError):
        factorize((1 << 140) + 1, bit_budget=128)


def test_factorization_helpers():
    fac = factorize(360)  # 2^3 * 3^2 * 5
    assert fac.primes() == (2, 3, 5)
    assert fac.omega() == 3
    assert not fac.is_squarefree()
    assert fac.mobius() == 0
    assert factorize(30).mobius() == -1
    assert factorize(6).mobius() == 1


def test_is_prime_against_trial_division():
    for n in range(0, 20000):
        assert is_prime(n) == (len(brute_factor(n)) == 1 and n > 1
                               and brute_factor(n)[0][1] == 1), n


def test_is_prime_spots():
    # Carmichael numbers and nearby primes
    for n in (561, 1105, 1729, 2465, 294409, 56052361):
        assert not is_prime(n), n
    for n in (2, 3, 5, 2**31 - 1, 1_000_000_007):
        assert is_prime(n), n


def test_primes_up_to_matches_filter():
    got = primes_up_to(1000)
    want = [n for n in range(2, 1001) if is_prime(n)]
    assert got == want
    assert primes_up_to(1) == []


def test_smallest_prime_factor_table():
    spf = smallest_prime_factors(5000)
    for n in range(2, 5001):
        assert spf[n] == brute_factor(n)[0][0], n


def test_factor_small_matches_brute():
    spf = smallest_prime_factors(10000)
    for n in range(1, 10001):
        assert factor_small(n, spf) == brute_factor(n), n


# the sieve consistency bound the module promises
SIEVE_LIMIT = 10**6


def test_mobius_squarefree_sieves_consistent_to_a_million():
    mu = mobius_sieve(SIEVE_LIMIT)
    sf = squarefree_sieve(SIEVE_LIMIT)
    assert len(mu) == len(sf) == SIEVE_LIMIT + 1
    for n in range(1, SIEVE_LIMIT + 1):
        assert (mu[n] != 0) == bool(sf[n]), n


def test_sieves_against_brute_sample():
    mu = mobius_sieve(SIEVE_LIMIT)
    sf = squarefree_sieve(SIEVE_LIMIT)
    rng = random.Random(99)
    sample = list(range(1, 300)) + [rng.randrange(1, SIEVE_LIMIT) for _ in range(400)]
    for n in sample:
        fac = brute_factor(n)
        square_free = all(e == 1 for _, e in fac)
        assert bool(sf[n]) == square_free, n
        assert mu[n] == (0 if not square_free else (-1) ** len(fac)), n
        assert is_squarefree(n) == square_free
        assert mobius(n) == mu[n]


def test_squarefree_known_values():
    assert not is_squarefree(30080)
    assert is_squarefree(1) and is_squarefree(2) and is_squarefree(30)
    assert not is_squarefree(4) and not is_squarefree(18)


def test_crt_solve_known_pair():
    assert crt_solve([(2, 18), (6, 25)]) == (56, 450)


def test_crt_solve_random_roundtrip():
    rng = random.Random(5)
    moduli_pool = [4, 9, 25, 49, 11, 13, 17, 19, 23, 27, 29, 31]
    for _ in range(200):
        k = rng.randint(1, 4)
        mods = rng.sample(moduli_pool, k)
        from math import gcd, prod
        if any(gcd(a, b) > 1 for i, a in enumerate(mods) for b in mods[i + 1:]):
            continue
        x = rng.randrange(prod(mods))
        pairs = [(x % m, m) for m in mods]
        got, modulus = crt_solve(pairs)
        assert modulus == prod(mods)
        assert got == x % modulus
        for r, m in pairs:
            assert got % m == r


def test_crt_solve_names_clashing_pair():
    with pytest.raises(ValueError) as err:
        crt_solve([(1, 4), (2, 6)])
    msg = str(err.value)
    assert "4" in msg and "6" in msg and "2" in msg


def test_sqrt_mod_brute_buckets_all_moduli_to_1000():
    """For every m <= 1000, compare against a table of squares mod m."""
    for m in range(1, 1001):
        buckets: dict[int, list[int]] = defaultdict(list)
        for x in range(m):
            buckets[x * x % m].append(x)
        factors = factorize(m).factors
        for a in range(m):
            assert sqrt_mod(a, m, factors) == buckets.get(a, []), (a, m)


def test_sqrt_mod_spots():
    assert sqrt_mod(2, 7) == [3, 4]
    assert sqrt_mod(3, 5) == []
    assert sqrt_mod(0, 1) == [0]
    assert sqrt_mod(4, 16) == [2, 6, 10, 14]


def test_sqrt_mod_rejects_wrong_factorization():
    with pytest.raises(ValueError):
        sqrt_mod(1, 12, ((2, 1), (3, 1)))


def test_sqrt_mod_large_prime_power():
    m = 7**6
    factors = ((7, 6),)
    rng = random.Random(3)
    for _ in range(50):
        x = rng.randrange(m)
        roots = sqrt_mod(x * x % m, m, factors)
        assert x in roots
        for r in roots:
            assert r * r % m == x * x % m


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def test_kronecker_matches_legendre_on_odd_primes():
    for p in primes_up_to(200)[1:]:
        for d in range(-30, 31):
            assert kronecker(d, p) == legendre(d, p), (d, p)


def test_kronecker_multiplicative_in_n():
    rng = random.Random(8)
    for _ in range(300):
        d = rng.randrange(-100, 100)
        m = rng.randrange(1, 60)
        n = rng.randrange(1, 60)
        assert kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n)


def test_kronecker_spots():
    assert kronecker(-23, 2) == 1
    assert kronecker(-23, 23) == 0
    for n in range(1, 50):
        assert kronecker(1, n) == 1


def test_iroot_random():
    rng = random.Random(21)
    for _ in range(500):
        k = rng.randint(2, 9)
        n = rng.randrange(0, 1 << rng.randint(1, 80))
        r = iroot(n, k)
        assert r**k <= n < (r + 1) ** k, (n, k)


def test_iroot_exact_powers():
    assert iroot(2**54, 3) == 2**18
    assert iroot(10**30, 5) == 10**6
    assert iroot(0, 4) == 0
    assert iroot(1, 7) == 1
