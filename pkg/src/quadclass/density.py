"""Local zero counts, Euler-product partials, and counting statistics.

The heuristic count of useful discriminants produced by the rank-2 family
is governed by how often the family polynomial takes square-free values.
This module supplies the exact local ingredients:

* zero counts of an integer polynomial over (Z/m)^k, by brute force or,
  for m = p^2, by Hensel-aware counting (each nonsingular zero mod p lifts
  to p^(k-1) zeros mod p^2; a singular zero lifts to all p^k points above
  it or to none);
* partial Euler products prod(1 - rho(p^2)/p^(2k)) over primes p, kept as
  exact fractions;
* empirical square-free value counts over integer boxes;
* census counts of small radicands whose class group absorbs a prescribed
  subgroup, with dyadic checkpoints for slope reading;
* first/second-moment tallies with their Cauchy-Schwarz support bounds.

No statement here is a proven tail bound; everything reported is either an
exact finite computation or labelled as a heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .arith import is_prime, is_squarefree, primes_up_to
from .classgroup import DEFAULT_ENUM_BOUND, embeds, sweep_structures
from .errors import BudgetError, UsageError
from .polynomials import IntPolynomial

DEFAULT_POINT_BUDGET = 5_000_000


def _zeros_brute(poly: IntPolynomial, m: int) -> int:
    monos = [
        ([(var, e) for var, e in enumerate(exps) if e], coeff)
        for exps, coeff in poly.monomials()
    ]
    exps_used = sorted({e for pairs, _ in monos for _, e in pairs})
    pow_table = {e: [pow(v, e, m) for v in range(m)] for e in exps_used}
    count = 0
    for point in product(range(m), repeat=poly.nvars):
        acc = 0
        for pairs, coeff in monos:
            term = coeff
            for var, e in pairs:
                term *= pow_table[e][point[var]]
            acc += term
        if acc % m == 0:
            count += 1
    return count


def _zeros_prime_square(poly: IntPolynomial, p: int) -> int:
    nvars = poly.nvars
    partials = [poly.partial(i) for i in range(nvars)]
    pp = p * p
    count = 0
    for x0 in product(range(p), repeat=nvars):
        if poly.evaluate_mod(x0, p) != 0:
            continue
        if any(q.evaluate_mod(x0, p) != 0 for q in partials):
            count += p ** (nvars - 1)
        elif poly.evaluate_mod(x0, pp) == 0:
            # a singular zero lifts to every point above it or to none,
            # and the residue of P mod p^2 is constant across those lifts
            count += p**nvars
    return count


def local_zeros(
    poly: IntPolynomial,
    m: int,
    *,
    method: str = "auto",
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> int:
    """Number of points of (Z/m)^k at which the polynomial vanishes mod m.

    method="brute" enumerates all m^k points (budgeted); method="hensel"
    requires m = p^2 and enumerates only the p^k base points; "auto" picks
    hensel whenever m is the square of a prime.
    """
    if m < 1:
        raise UsageError(f"modulus must be >= 1, got {m}")
    if poly.nvars < 1:
        raise UsageError("polynomial must have at least one variable")
    if m == 1:
        return 1
    root = math.isqrt(m)
    is_prime_square = root * root == m and is_prime(root)
    if method == "auto":
        method = "hensel" if is_prime_square else "brute"
    if method == "hensel":
        if not is_prime_square:
            raise UsageError(f"hensel counting needs m = p^2, got m = {m}")
        if root**poly.nvars > point_budget:
            raise BudgetError(
                f"hensel count would visit {root**poly.nvars} base points "
                f"(budget {point_budget})"
            )
        return _zeros_prime_square(poly, root)
    if method != "brute":
        raise UsageError(f"unknown method {method!r}")
    if m**poly.nvars > point_budget:
        raise BudgetError(
            f"brute count would visit {m**poly.nvars} points "
            f"(budget {point_budget})"
        )
    return _zeros_brute(poly, m)


@dataclass(frozen=True)
class PrimeLocalData:
    p: int
    zeros: int
    factor: Fraction


@dataclass(frozen=True)
class DensityReport:
    p_max: int
    nvars: int
    per_prime: tuple[PrimeLocalData, ...]
    partial_products: tuple[Fraction, ...]
    tail_note: str

    @property
    def final(self) -> Fraction:
        return self.partial_products[-1] if self.partial_products else Fraction(1)


def euler_product_partials(
    poly: IntPolynomial,
    p_max: int,
    *,
    method: str = "auto",
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> DensityReport:
    """Exact partial products of prod_p (1 - rho(p^2)/p^(2k)) for p <= p_max.

    Every factor and every partial product is an exact Fraction.  The tail
    beyond p_max is not estimated rigorously; the report says so.
    """
    if p_max < 2:
        raise UsageError(f"p_max must be >= 2, got {p_max}")
    nvars = poly.nvars
    per_prime = []
    partials = []
    acc = Fraction(1)
    for p in primes_up_to(p_max):
        zeros = local_zeros(poly, p * p, method=method, point_budget=point_budget)
        factor = 1 - Fraction(zeros, (p * p) ** nvars)
        acc *= factor
        per_prime.append(PrimeLocalData(p, zeros, factor))
        partials.append(acc)
    tail_note = (
        f"product truncated at p <= {p_max}; for a generic polynomial the "
        f"omitted factors are 1 - rho(p^2)/p^(2k) with rho(p^2) on the order "
        f"of p^(2k-2), so the infinite product converges, but no rigorous "
        f"tail bound is claimed here"
    )
    return DensityReport(p_max, nvars, tuple(per_prime), tuple(partials), tail_note)


def squarefree_value_count(
    poly: IntPolynomial,
    box: Sequence[Sequence[int]],
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> int:
    """How many points of the box give a nonzero square-free polynomial value."""
    if len(box) != poly.nvars:
        raise UsageError(
            f"box has {len(box)} ranges for {poly.nvars} variables"
        )
    total = math.prod(len(r) for r in box)
    if total > point_budget:
        raise BudgetError(f"box holds {total} points (budget {point_budget})")
    count = 0
    for point in product(*box):
        value = poly.evaluate(point)
        if value != 0 and is_squarefree(abs(value)):
            count += 1
    return count


@dataclass(frozen=True)
class CensusResult:
    x: int
    target: tuple[int, ...]
    count: int
    checkpoints: tuple[tuple[int, int], ...]


def census_embeddings(
    x: int,
    target: Sequence[int],
    *,
    checkpoint_floor: int = 16,
    progress_every: int = 0,
) -> CensusResult:
    """Count square-free d <= x whose class group contains the target.

    The target is a tuple of invariant factors; the empty tuple counts all
    square-free radicands.  Checkpoints at x/2^k (down to checkpoint_floor)
    support reading an empirical growth slope from the output.
    """
    if x < 1:
        raise UsageError(f"x must be >= 1, got {x}")
    target = tuple(int(f) for f in target)
    for f in target:
        if f < 2:
            raise UsageError(f"invariant factors must be >= 2, got {f}")
    thresholds = []
    bound = x
    while bound >= max(1, checkpoint_floor):
        thresholds.append(bound)
        if bound == 1:
            break
        bound //= 2
    thresholds.reverse()
    checkpoints = []
    count = 0
    idx = 0
    for row in sweep_structures(x, progress_every=progress_every):
        while idx < len(thresholds) and row.radicand > thresholds[idx]:
            checkpoints.append((thresholds[idx], count))
            idx += 1
        if embeds(target, row.invariant_factors):
            count += 1
    while idx < len(thresholds):
        checkpoints.append((thresholds[idx], count))
        idx += 1
    return CensusResult(x, target, count, tuple(checkpoints))


@dataclass(frozen=True)
class MomentBound:
    """First/second moment data with the Cauchy-Schwarz support bound.

    s1 = sum R(d), s2 = sum R(d)(R(d)-1); the number of represented d is
    at least s1^2/(s1+s2), exactly, whenever s1 > 0.
    """

    s1: int
    s2: int
    support: int
    lower_bound: Fraction


def representation_moments(
    counts: Mapping[int, int] | Iterable[int],
) -> MomentBound:
    values = counts.values() if isinstance(counts, Mapping) else counts
    s1 = 0
    s2 = 0
    support = 0
    for r in values:
        r = int(r)
        if r < 0:
            raise UsageError(f"representation counts must be >= 0, got {r}")
        s1 += r
        s2 += r * (r - 1)
        if r > 0:
            support += 1
    bound = Fraction(s1 * s1, s1 + s2) if s1 > 0 else Fraction(0)
    return MomentBound(s1, s2, support, bound)


@dataclass(frozen=True)
class ScanMoments:
    """Moment tallies over a multiset of produced discriminants.

    Only positive square-free values enter; r(D) is the multiplicity of D
    in the multiset.  s1 = sum r(D), s2 = sum r(D)^2, and the number of
    distinct square-free values is at least s1^2/s2.
    """

    s1: int
    s2: int
    support: int
    lower_bound: Fraction


def rank2_moments(discs: Iterable[int]) -> ScanMoments:
    tally: dict[int, int] = {}
    for d in discs:
        if d > 0:
            tally[d] = tally.get(d, 0) + 1
    s1 = 0
    s2 = 0
    support = 0
    for d, r in tally.items():
        if not is_squarefree(d):
            continue
        s1 += r
        s2 += r * r
        support += 1
    bound = Fraction(s1 * s1, s2) if s2 else Fraction(0)
    return ScanMoments(s1, s2, support, bound)


def empirical_slope(points: Sequence[tuple[int, int]]) -> float | None:
    """Least-squares slope of log(count) against log(bound).

    Purely descriptive: a quick read of how a census curve grows.  Returns
    None when fewer than two points have positive coordinates.
    """
    usable = [(x, y) for x, y in points if x > 0 and y > 0]
    if len(usable) < 2:
        return None
    lx = [math.log(x) for x, _ in usable]
    ly = [math.log(y) for _, y in usable]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    var = sum((v - mx) ** 2 for v in lx)
    if var == 0:
        return None
    cov = sum((u - mx) * (v - my) for u, v in zip(lx, ly))
    return cov / var
