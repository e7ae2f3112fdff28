"""Exact integer kernel: primality, factoring, sieves, CRT, modular square roots.

Everything here is pure and deterministic for a given input.  Sieves are
built single-writer and then shared read-only, so results can be reused
freely across worker threads.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import count

from .errors import BudgetError

DEFAULT_FACTOR_BITS = 128

# Miller-Rabin with these witnesses is deterministic below this bound
# (Sorenson-Webster).  Larger inputs get extra input-seeded witnesses and the
# answer becomes probabilistic, with error probability well under 4**-20.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DET_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_ROUNDS = 20

_TRIAL_BOUND = 10_000
_trial_primes_cache: list[int] = []


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit via a byte sieve."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            start = i * i
            sieve[start::i] = bytearray(len(range(start, limit + 1, i)))
    return [i for i in range(2, limit + 1) if sieve[i]]


_spf_cache: list[int] = [0, 1]


def smallest_prime_factors(limit: int) -> list[int]:
    """Table spf[n] = least prime factor of n (spf[1] = 1), grown on demand."""
    global _spf_cache
    if limit < len(_spf_cache):
        return _spf_cache
    size = max(limit, 2 * (len(_spf_cache) - 1))
    spf = list(range(size + 1))
    for i in range(2, math.isqrt(size) + 1):
        if spf[i] == i:
            for j in range(i * i, size + 1, i):
                if spf[j] == j:
                    spf[j] = i
    _spf_cache = spf
    return spf


def factor_small(n: int, spf: list[int] | None = None) -> list[tuple[int, int]]:
    """Factor a small positive integer with the spf table."""
    if n < 1:
        raise ValueError("factor_small expects n >= 1")
    if spf is None or n >= len(spf):
        spf = smallest_prime_factors(max(n, 2))
    out: list[tuple[int, int]] = []
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def squarefree_sieve(limit: int) -> bytearray:
    """sf[n] = 1 iff n is square-free, for 0 <= n <= limit (sf[0] = 0)."""
    sf = bytearray([1]) * (limit + 1)
    if limit >= 0:
        sf[0] = 0
    for i in range(2, math.isqrt(limit) + 1):
        ii = i * i
        sf[ii::ii] = bytearray(len(range(ii, limit + 1, ii)))
    return sf


def mobius_sieve(limit: int) -> list[int]:
    """mu[n] for 0 <= n <= limit by a linear sieve (mu[0] = 0)."""
    mu = [0] * (limit + 1)
    if limit >= 1:
        mu[1] = 1
    primes: list[int] = []
    is_comp = bytearray(limit + 1)
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            is_comp[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def _miller_rabin_round(n: int, a: int, d: int, r: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test: deterministic below ~3.3e24, probabilistic beyond.

    Beyond the deterministic range the extra witnesses are drawn from an
    RNG seeded by n itself, so the verdict is still reproducible.
    """
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    witnesses: tuple[int, ...] = _MR_WITNESSES
    if n >= _MR_DET_LIMIT:
        rng = random.Random(n)
        witnesses = witnesses + tuple(
            rng.randrange(2, n - 1) for _ in range(_MR_EXTRA_ROUNDS)
        )
    return all(_miller_rabin_round(n, a, d, r) for a in witnesses)


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle variant).

    The polynomial offset c walks 1, 2, 3, ... so the search is deterministic.
    """
    if n % 2 == 0:
        return 2
    for c in count(1):
        y, r, q = 2, 1, 1
        g, x, ys = 1, 0, 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r <<= 1
        if g != n:
            return g
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer, exponents sorted by prime."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def mobius(self) -> int:
        if not self.is_squarefree():
            return 0
        return -1 if self.omega() % 2 else 1


def factorize(n: int, *, bit_budget: int = DEFAULT_FACTOR_BITS) -> Factorization:
    """Full factorization of n >= 1; deterministic output for a given n.

    Raises BudgetError when n has more than bit_budget bits; the budget stops
    open-ended Pollard runs on adversarial inputs rather than guaranteeing a
    runtime.
    """
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    if n.bit_length() > bit_budget:
        raise BudgetError(
            f"factoring budget: {n} has {n.bit_length()} bits > {bit_budget}"
        )
    if n == 1:
        return Factorization(1, ())
    global _trial_primes_cache
    if not _trial_primes_cache:
        _trial_primes_cache = primes_up_to(_TRIAL_BOUND)
    found: dict[int, int] = {}
    m = n
    for p in _trial_primes_cache:
        if p * p > m:
            break
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    factors = tuple(sorted(found.items()))
    check = 1
    for p, e in factors:
        check *= p**e
    if check != n:  # pragma: no cover - would be an implementation bug
        raise AssertionError(f"factorization of {n} does not multiply back")
    return Factorization(n, factors)


def is_squarefree(n: int, *, bit_budget: int = DEFAULT_FACTOR_BITS) -> bool:
    """True iff no prime square divides n (n >= 1)."""
    if n < 1:
        raise ValueError(f"is_squarefree expects n >= 1, got {n}")
    if n % 4 == 0 or n % 9 == 0 or n % 25 == 0 or n % 49 == 0:
        return False
    return factorize(n, bit_budget=bit_budget).is_squarefree()


def mobius(n: int, *, bit_budget: int = DEFAULT_FACTOR_BITS) -> int:
    """Mobius function; mobius(1) = 1."""
    if n < 1:
        raise ValueError(f"mobius expects n >= 1, got {n}")
    return factorize(n, bit_budget=bit_budget).mobius()


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def crt_solve(pairs: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x = r_i (mod m_i) with pairwise coprime moduli.

    Returns (x, M) with 0 <= x < M = prod m_i.  Non-coprime moduli are
    rejected with an error naming the offending pair.
    """
    for _, m in pairs:
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            g = math.gcd(pairs[i][1], pairs[j][1])
            if g != 1:
                raise ValueError(
                    f"moduli {pairs[i][1]} (position {i}) and {pairs[j][1]} "
                    f"(position {j}) share factor {g}"
                )
    x, m = 0, 1
    for r, mi in pairs:
        # x' = x (mod m), x' = r (mod mi)
        inv = pow(m % mi, -1, mi) if mi > 1 else 0
        x = x + m * ((r - x) * inv % mi)
        m *= mi
    return x % m, m


def _tonelli_shanks(a: int, p: int) -> int:
    """A square root of a modulo odd prime p; caller ensures a is a QR."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    if p % 8 == 5:
        x = pow(a, (p + 3) // 8, p)
        if x * x % p != a % p:
            x = x * pow(2, (p - 1) // 4, p) % p
        return x
    # general case: write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _lift_root_odd(r: int, a: int, p: int, e: int) -> int:
    """Hensel-lift r with r^2 = a (mod p) to a root modulo p^e, p odd."""
    pk = p
    while pk < p**e:
        pk_next = min(pk * pk, p**e)
        inv = pow(2 * r % pk_next, -1, pk_next)
        r = (r - (r * r - a) * inv) % pk_next
        pk = pk_next
    return r


def _sqrt_mod_2k(a: int, k: int) -> list[int]:
    """Solutions of x^2 = a (mod 2^k) for odd a, sorted."""
    if k == 1:
        return [1]
    if k == 2:
        return [1, 3] if a % 4 == 1 else []
    if a % 8 != 1:
        return []
    r = 1
    for j in range(3, k):
        if (r * r - a) % (1 << (j + 1)):
            r += 1 << (j - 1)
    m = 1 << k
    half = 1 << (k - 1)
    return sorted({r, m - r, (r + half) % m, (m - r + half) % m})


def _sqrt_mod_prime_power(a: int, p: int, e: int) -> list[int]:
    """All x in [0, p^e) with x^2 = a (mod p^e), sorted."""
    pe = p**e
    a %= pe
    if a == 0:
        step = p ** ((e + 1) // 2)
        return list(range(0, pe, step))
    v = 0
    aa = a
    while aa % p == 0:
        aa //= p
        v += 1
    if v:
        if v % 2:
            return []
        inner = _sqrt_mod_prime_power(aa, p, e - v)
        if not inner:
            return []
        scale = p ** (v // 2)
        period = p ** (e - v)
        out = set()
        for u in inner:
            for t in range(p ** (v // 2)):
                out.add(scale * (u + t * period) % pe)
        return sorted(out)
    if p == 2:
        return _sqrt_mod_2k(a, e)
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    r = _tonelli_shanks(a % p, p)
    r = _lift_root_odd(r, a, p, e)
    return sorted({r, pe - r})


def sqrt_mod(
    a: int, m: int, factors: tuple[tuple[int, int], ...] | None = None
) -> list[int]:
    """Sorted list of all x in [0, m) with x^2 = a (mod m).

    The factorization of m can be passed to skip refactoring in hot loops;
    when omitted it is computed here.
    """
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if m == 1:
        return [0]
    if factors is None:
        factors = factorize(m).factors
    else:
        check = 1
        for p, e in factors:
            check *= p**e
        if check != m:
            raise ValueError(f"supplied factorization {factors!r} is not of {m}")
    a %= m
    sols = [0]
    mod = 1
    for p, e in factors:
        pe = p**e
        part = _sqrt_mod_prime_power(a % pe, p, e)
        if not part:
            return []
        inv = pow(mod % pe, -1, pe) if pe > 1 else 0
        merged = []
        for s in sols:
            for r in part:
                merged.append(s + mod * ((r - s) * inv % pe))
        sols = merged
        mod *= pe
    return sorted(x % mod for x in sols)


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d | n) for positive n."""
    if n < 1:
        raise ValueError(f"kronecker expects positive n, got {n}")
    result = 1
    while n % 2 == 0:
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
        n //= 2
    # Jacobi symbol for odd n
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0 (exact integer Newton iteration)."""
    if n < 0 or k < 1:
        raise ValueError("iroot expects n >= 0 and k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y
