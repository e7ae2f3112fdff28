"""Two constructive families of imaginary quadratic discriminants.

Rank-2 torsion family
    For odd g >= 3 and positive integers a, b, n, an explicit polynomial
    D = discriminant_rank2(a, b, n, g) comes with two witness pairs
    (x_i, y_i) satisfying x_i^2 - 4*y_i^g = -D.  When the instance is
    admissible (size bound, square-free D), the two witness forms generate
    a subgroup of CL(-D) isomorphic to (Z/g)^2 — checked here by closing
    the generated set and counting it.

Two-rank congruence family
    For a 2-rank target l and odd g1 >= 3, congruence classes for (n, m)
    modulo 18 and p_i^2 force every d = (m^g1 - n^2)/t^2 emitted by the
    search to be divisible by 3 and by each p_i exactly once, steering
    CL(-d) to contain (Z/2)^(l-1) x Z/(2*g1).  Solution triples are counted
    per d over dyadic windows; the moment statistics live in the density
    module.

Everything returns exact integers; window and box endpoints are computed
with integer k-th roots, never floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .arith import crt_solve, iroot, is_prime, is_squarefree
from .classgroup import (
    DEFAULT_ENUM_BOUND,
    ClassGroup,
    QuadForm,
    compose,
    embeds,
    group_structure,
    identity_form,
    reduce_form,
)
from .errors import BudgetError, ContractViolation, UsageError
from .polynomials import (
    IntPolynomial,
    upoly_degree,
    upoly_derivative,
    upoly_gcd,
)


def _require_odd_g(g: int, name: str = "g") -> None:
    if g < 3 or g % 2 == 0:
        raise UsageError(f"{name} must be an odd integer >= 3, got {g}")


# ---------------------------------------------------------------------------
# rank-2 torsion family


def power_sum(a: int, b: int, g: int) -> int:
    """sum of a^(g-1-i) * b^i for i in [0, g), i.e. (a^g - b^g)/(a - b)
    extended across a = b.  Symmetric in (a, b)."""
    if a < 0 or b < 0:
        raise UsageError("power_sum expects non-negative arguments")
    if g < 1:
        raise UsageError("power_sum expects g >= 1")
    if a == b:
        return g * a ** (g - 1)
    return (a**g - b**g) // (a - b)


def discriminant_rank2(a: int, b: int, n: int, g: int) -> int:
    """Candidate discriminant 2(a^g+b^g)n^g - (a-b)^2 n^(2g) - power_sum^2.

    May be negative or non-square-free; admissibility is a separate check.
    """
    _require_odd_g(g)
    if min(a, b, n) < 1:
        raise UsageError("a, b, n must be positive")
    s = power_sum(a, b, g)
    return 2 * (a**g + b**g) * n**g - (a - b) ** 2 * n ** (2 * g) - s * s


def rank2_witnesses(a: int, b: int, n: int, g: int) -> tuple[int, int, int, int]:
    """Witness tuple (x1, y1, x2, y2) with x_i^2 - 4 y_i^g = -D, exactly."""
    _require_odd_g(g)
    if min(a, b, n) < 1:
        raise UsageError("a, b, n must be positive")
    s = power_sum(a, b, g)
    half = (a - b) * n**g
    x1, y1 = s + half, a * n
    x2, y2 = s - half, b * n
    d = discriminant_rank2(a, b, n, g)
    if x1 * x1 - 4 * y1**g != -d or x2 * x2 - 4 * y2**g != -d:
        raise ContractViolation(
            f"witness identity failed at (a={a}, b={b}, n={n}, g={g})"
        )
    return x1, y1, x2, y2


@dataclass(frozen=True)
class Rank2Instance:
    """One (a, b, n) point of the rank-2 family with its derived data."""

    g: int
    a: int
    b: int
    n: int
    disc: int
    x1: int
    y1: int
    x2: int
    y2: int


def rank2_instance(a: int, b: int, n: int, g: int) -> Rank2Instance:
    d = discriminant_rank2(a, b, n, g)
    x1, y1, x2, y2 = rank2_witnesses(a, b, n, g)
    return Rank2Instance(g, a, b, n, d, x1, y1, x2, y2)


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reason: str


def admissible_rank2(inst: Rank2Instance) -> Admissibility:
    """First failed clause wins: a=b, ab=1, D<=0, size-bound, square-free."""
    g, a, b, n, d = inst.g, inst.a, inst.b, inst.n, inst.disc
    if a == b:
        return Admissibility(False, "a=b")
    if a * b <= 1:
        return Admissibility(False, "ab=1")
    if d <= 0:
        return Admissibility(False, "D<=0")
    bound = 4 * max(b * a ** (g - 2), a * b ** (g - 2)) * n ** (g - 1)
    if d < bound:
        return Admissibility(False, "size-bound")
    if not is_squarefree(d):
        return Admissibility(False, "not-squarefree")
    return Admissibility(True, "")


def rank2_forms(inst: Rank2Instance) -> tuple[QuadForm, QuadForm]:
    """The two witness classes as reduced forms of discriminant -D.

    Requires an admissible instance.  An admissible D is forced to be
    3 mod 4 (the witnesses have odd x_i), so -D is fundamental; violations
    here mean an upstream arithmetic bug, not bad input.
    """
    verdict = admissible_rank2(inst)
    if not verdict.ok:
        raise UsageError(f"instance is not admissible ({verdict.reason})")
    d = inst.disc
    if d % 4 != 3:
        raise ContractViolation(
            f"admissible D = {d} is not 3 mod 4; admissibility is broken"
        )
    forms = []
    for x, y in ((inst.x1, inst.y1), (inst.x2, inst.y2)):
        if math.gcd(x, y) != 1:
            raise ContractViolation(
                f"witness form ({y}, {x}, ...) is imprimitive; "
                f"gcd({x}, {y}) > 1 cannot happen for square-free D"
            )
        forms.append(reduce_form(QuadForm(y, x, y ** (inst.g - 1))))
    return forms[0], forms[1]


@dataclass(frozen=True)
class Rank2Verification:
    instance: Rank2Instance
    form1: QuadForm
    form2: QuadForm
    power_ok: bool
    subgroup_order: int
    verified: bool
    group: ClassGroup | None = None
    embedded: bool | None = None


def verify_rank2(
    inst: Rank2Instance,
    *,
    deep: bool = False,
    enum_bound: int = DEFAULT_ENUM_BOUND,
) -> Rank2Verification:
    """Check that the two witness classes generate a (Z/g)^2 subgroup.

    Closes {F1^i * F2^j : 0 <= i, j < g} and counts distinct classes; the
    count is g^2 exactly when the generated subgroup is (Z/g)^2 (both
    generators have order dividing g, and a 2-generated group of order g^2
    and exponent dividing g must be (Z/g)^2).  With deep=True the ambient
    class group is computed and the subgroup finding is cross-checked
    against the embedding criterion.
    """
    g = inst.g
    f1, f2 = rank2_forms(inst)
    one = identity_form(-inst.disc)
    powers1 = [one]
    powers2 = [one]
    for base, powers in ((f1, powers1), (f2, powers2)):
        cur = one
        for _ in range(g - 1):
            cur = compose(cur, base)
            powers.append(cur)
    power_ok = compose(powers1[-1], f1) == one and compose(powers2[-1], f2) == one
    closure = {compose(p, q) for p in powers1 for q in powers2}
    order = len(closure)
    verified = power_ok and order == g * g
    group = None
    embedded = None
    if deep:
        group = group_structure(-inst.disc, enum_bound=enum_bound)
        embedded = embeds((g, g), group.invariant_factors)
        if verified and not embedded:
            raise ContractViolation(
                f"subgroup of order {order} found but embedding test "
                f"rejects (g, g) in {group.invariant_factors}"
            )
    return Rank2Verification(
        inst, f1, f2, power_ok, order, verified, group, embedded
    )


@dataclass(frozen=True)
class Rank2ScanRow:
    g: int
    a: int
    b: int
    n: int
    disc: int
    admissible: bool
    reason: str
    verified: bool | None
    class_number: int | None
    invariant_factors: tuple[int, ...] | None
    error: str


def scan_rank2(
    g: int,
    a_range: Sequence[int],
    b_range: Sequence[int],
    n_range: Sequence[int],
    *,
    verify: bool = True,
    deep: bool = False,
    enum_bound: int = DEFAULT_ENUM_BOUND,
) -> Iterator[Rank2ScanRow]:
    """Walk the box in lexicographic (a, b, n) order and flag every tuple.

    Budget failures are recorded on the row rather than aborting the scan.
    """
    for a in a_range:
        for b in b_range:
            for n in n_range:
                inst = rank2_instance(a, b, n, g)
                base = dict(
                    g=g, a=a, b=b, n=n, disc=inst.disc,
                    verified=None, class_number=None,
                    invariant_factors=None, error="",
                )
                try:
                    verdict = admissible_rank2(inst)
                except BudgetError as exc:
                    yield Rank2ScanRow(
                        **{**base, "error": str(exc)},
                        admissible=False, reason="budget",
                    )
                    continue
                if not verdict.ok:
                    yield Rank2ScanRow(
                        **base, admissible=False, reason=verdict.reason
                    )
                    continue
                if not verify:
                    yield Rank2ScanRow(**base, admissible=True, reason="")
                    continue
                try:
                    res = verify_rank2(inst, deep=deep, enum_bound=enum_bound)
                except BudgetError as exc:
                    yield Rank2ScanRow(
                        **{**base, "error": str(exc)},
                        admissible=True, reason="",
                    )
                    continue
                base["verified"] = res.verified
                if res.group is not None:
                    base["class_number"] = res.group.order
                    base["invariant_factors"] = res.group.invariant_factors
                yield Rank2ScanRow(**base, admissible=True, reason="")


@dataclass(frozen=True)
class CountBox:
    """Integer points of the scaling box used for multiplicity counting."""

    x_range: range
    y_range: range
    z_range: range

    def volume(self) -> int:
        return len(self.x_range) * len(self.y_range) * len(self.z_range)


def _scaled_root_floor(p: int, q: int, x: int, u: int, v: int) -> tuple[int, bool]:
    """floor((p/q) * x^(u/v)) plus whether the value is exactly an integer."""
    num = p**v * x**u
    den = q**v
    fl = iroot(num // den, v)
    return fl, fl**v * den == num


def _open_interval(
    p_lo: int, q_lo: int, p_hi: int, q_hi: int, x: int, u: int, v: int
) -> range:
    """Integers strictly between (p_lo/q_lo)x^(u/v) and (p_hi/q_hi)x^(u/v)."""
    lo_floor, _ = _scaled_root_floor(p_lo, q_lo, x, u, v)
    lo = lo_floor + 1
    hi, exact = _scaled_root_floor(p_hi, q_hi, x, u, v)
    if exact:
        hi -= 1
    return range(lo, max(hi + 1, lo))


def rank2_count_box(x: int, g: int) -> CountBox:
    """The exact scaling box whose (x, y, z) points feed multiplicity counts.

    The x/y interval has relative width about 1/(2^(2g) g^g) and contains no
    integer until x is astronomically large; desk-scale scans use explicit
    user boxes instead.  Endpoints are exact: open bounds of the form
    (p/q) * x^(u/v) are resolved with integer k-th roots.
    """
    if x < 1:
        raise UsageError("x must be >= 1")
    if g < 5 or g % 2 == 0:
        raise UsageError(f"count box needs odd g >= 5, got {g}")
    xy = _open_interval(
        1,
        2**4 * g**2,
        2 ** (2 * g - 4) * g ** (g - 2) + 1,
        2 ** (2 * g) * g**g,
        x,
        1,
        2 * (g - 1),
    )
    z = _open_interval(1, 2, 1, 1, x, g - 2, 2 * g * (g - 1))
    return CountBox(xy, xy, z)


# ---------------------------------------------------------------------------
# two-rank congruence family


def tworank_target(l: int, g1: int) -> tuple[int, ...]:
    """Invariant factors of the target subgroup (Z/2)^(l-1) x Z/(2*g1)."""
    if l < 1:
        raise UsageError(f"l must be >= 1, got {l}")
    _require_odd_g(g1, "g1")
    return (2,) * (l - 1) + (2 * g1,)


@dataclass(frozen=True)
class CongruenceSpec:
    """CRT-merged residue classes steering the two-rank search.

    (n, m) must be (2, 1) mod 18 and (1 + a_i*p_i, 1 + b_i*p_i) mod p_i^2;
    the merge produces (n0, m0) modulo 18 * prod(p_i^2).
    """

    l: int
    g1: int
    primes: tuple[int, ...]
    offsets_a: tuple[int, ...]
    offsets_b: tuple[int, ...]
    n0: int
    m0: int
    modulus: int


def congruence_spec(
    l: int,
    g1: int,
    primes: Sequence[int],
    offsets_a: Sequence[int],
    offsets_b: Sequence[int],
) -> CongruenceSpec:
    if l < 1:
        raise UsageError(f"l must be >= 1, got {l}")
    _require_odd_g(g1, "g1")
    primes = tuple(int(p) for p in primes)
    offsets_a = tuple(int(a) for a in offsets_a)
    offsets_b = tuple(int(b) for b in offsets_b)
    if not len(primes) == len(offsets_a) == len(offsets_b) == l:
        raise UsageError(
            f"need exactly l = {l} primes and offset pairs, got "
            f"{len(primes)} primes, {len(offsets_a)}/{len(offsets_b)} offsets"
        )
    if len(set(primes)) != l:
        raise UsageError("primes must be distinct")
    for i, p in enumerate(primes):
        if p <= 3 or not is_prime(p):
            raise UsageError(f"prime #{i} = {p} must be a prime > 3")
        if (2 * offsets_a[i] - g1 * offsets_b[i]) % p == 0:
            raise UsageError(
                f"offset pair #{i} violates p | 2a - g1*b: "
                f"{p} divides 2*{offsets_a[i]} - {g1}*{offsets_b[i]}"
            )
    n_pairs = [(2, 18)]
    m_pairs = [(1, 18)]
    for p, a, b in zip(primes, offsets_a, offsets_b):
        pp = p * p
        n_pairs.append(((1 + a * p) % pp, pp))
        m_pairs.append(((1 + b * p) % pp, pp))
    n0, modulus = crt_solve(n_pairs)
    m0, modulus2 = crt_solve(m_pairs)
    if modulus != modulus2:
        raise ContractViolation("congruence merge produced unequal moduli")
    return CongruenceSpec(l, g1, primes, offsets_a, offsets_b, n0, m0, modulus)


class SolutionTriple(tuple):
    """(m, n, t, d) with m^g1 = n^2 + t^2*d."""

    __slots__ = ()

    def __new__(cls, m: int, n: int, t: int, d: int):
        return super().__new__(cls, (m, n, t, d))

    @property
    def m(self) -> int:
        return self[0]

    @property
    def n(self) -> int:
        return self[1]

    @property
    def t(self) -> int:
        return self[2]

    @property
    def d(self) -> int:
        return self[3]


def _members_ascending(lo: int, hi: int, residue: int, modulus: int) -> range:
    if lo > hi:
        return range(0)
    first = lo + (residue - lo) % modulus
    return range(first, hi + 1, modulus)


def _members_descending(lo: int, hi: int, residue: int, modulus: int) -> range:
    if lo > hi:
        return range(0)
    last = hi - (hi - residue) % modulus
    return range(last, lo - 1, -modulus)


def _check_emitted_divisibility(spec: CongruenceSpec, d: int) -> None:
    if d % 3 != 0 or d % 9 == 0:
        raise ContractViolation(f"emitted d = {d} lacks the exact factor 3")
    for p in spec.primes:
        if d % p != 0 or d % (p * p) == 0:
            raise ContractViolation(
                f"emitted d = {d} lacks the exact factor {p}"
            )


def _step_one_bounds(r: Sequence[int], name: str) -> tuple[int, int]:
    if isinstance(r, range):
        if r.step != 1:
            raise UsageError(f"{name} must have step 1")
        return r.start, r.stop - 1
    if not r:
        return 1, 0
    return min(r), max(r)


def search_tworank(
    spec: CongruenceSpec,
    m_range: Sequence[int],
    n_range: Sequence[int],
    t_range: Sequence[int],
    *,
    strict: bool = True,
    limit: int | None = None,
) -> Iterator[SolutionTriple]:
    """All solution triples in the given ranges, in deterministic order.

    Iterates m ascending over its residue class, t ascending, and n
    descending from sqrt(m^g1) so the smallest d per (m, t) appear first.
    In strict mode t must not divide m, which excludes t = 1 entirely;
    relaxed mode (strict=False) admits t = 1 for exemplar hunting — the
    resulting d are re-verified by the class-group engine regardless.
    """
    m_lo, m_hi = _step_one_bounds(m_range, "m_range")
    n_lo, n_hi = _step_one_bounds(n_range, "n_range")
    t_lo, t_hi = _step_one_bounds(t_range, "t_range")
    emitted = 0
    for m in _members_ascending(max(m_lo, 2), m_hi, spec.m0, spec.modulus):
        mg = m**spec.g1
        for t in range(max(t_lo, 1), t_hi + 1):
            if t == 1:
                if strict:
                    continue
            elif m % t == 0:
                continue
            tt = t * t
            if mg <= tt:
                break
            n_cap = math.isqrt(mg - tt)
            for n in _members_descending(
                max(n_lo, 1), min(n_hi, n_cap), spec.n0, spec.modulus
            ):
                num = mg - n * n
                d, rem = divmod(num, tt)
                if rem:
                    continue
                _check_emitted_divisibility(spec, d)
                yield SolutionTriple(m, n, t, d)
                emitted += 1
                if limit is not None and emitted >= limit:
                    return


@dataclass(frozen=True)
class TworankVerification:
    d: int
    delta: int
    class_number: int
    invariant_factors: tuple[int, ...]
    target: tuple[int, ...]
    embedded: bool
    divisibility_ok: bool | None
    verified: bool


def verify_tworank(
    d: int,
    l: int,
    g1: int,
    *,
    primes: Sequence[int] | None = None,
    enum_bound: int = DEFAULT_ENUM_BOUND,
) -> TworankVerification:
    """Does CL of the field with radicand d contain (Z/2)^(l-1) x Z/(2*g1)?

    Computes the full class-group structure and applies the embedding
    criterion.  When the generating primes are supplied, the divisibility
    pattern (3 | d, p exactly divides d) is checked as well.
    """
    if d < 1:
        raise UsageError(f"d must be positive, got {d}")
    if not is_squarefree(d):
        raise UsageError(f"d = {d} must be square-free")
    target = tworank_target(l, g1)
    delta = -d if d % 4 == 3 else -4 * d
    grp = group_structure(delta, enum_bound=enum_bound, check_fundamental=False)
    embedded = embeds(target, grp.invariant_factors)
    divisibility_ok = None
    if primes is not None:
        divisibility_ok = d % 3 == 0 and all(
            d % p == 0 and d % (p * p) != 0 for p in primes
        )
    verified = embedded and divisibility_ok is not False
    return TworankVerification(
        d, delta, grp.order, grp.invariant_factors, target,
        embedded, divisibility_ok, verified,
    )


# ---------------------------------------------------------------------------
# dyadic windows and representation counts


@dataclass(frozen=True)
class WindowParams:
    """Dyadic window (M, 2M] x (N, 2N] x (T, 2T] for triples below X."""

    x: int
    g1: int
    t: int
    m: int
    n: int


def windows(x: int, g1: int, t_choice: int | None = None) -> WindowParams:
    """Window sizes T, M = (T^2 x)^(1/g1)/2, N = T*sqrt(x)/2^(g1+1).

    The default T = x^((g1-2)/(4g1+4)); any T with 64*T <= sqrt(x) is
    accepted.  All endpoints are exact integer floors, so dyadic inputs
    reproduce the closed-form powers of two exactly.
    """
    if x < 1:
        raise UsageError(f"x must be >= 1, got {x}")
    _require_odd_g(g1, "g1")
    if t_choice is None:
        t = iroot(x ** (g1 - 2), 4 * g1 + 4)
    else:
        t = int(t_choice)
    if t < 1:
        raise UsageError(f"T must be >= 1, got {t}")
    if 4096 * t * t > x:
        raise UsageError(
            f"window violation: T = {t} exceeds sqrt(x)/64 for x = {x}"
        )
    m = iroot(t * t * x, g1) // 2
    n = math.isqrt(t * t * x) >> (g1 + 1)
    return WindowParams(x, g1, t, m, n)


def count_representations(
    d: int, spec: CongruenceSpec, w: WindowParams
) -> int:
    """Number of window triples (m, n, t) with m^g1 = n^2 + t^2*d.

    Non-square-free d count as zero by definition.  Windows are the
    half-open dyadic boxes of `WindowParams`; m, n must lie in the spec's
    residue classes and t must not divide m.
    """
    if d < 1:
        raise UsageError(f"d must be positive, got {d}")
    if spec.g1 != w.g1:
        raise UsageError("congruence spec and window disagree on g1")
    if not is_squarefree(d):
        return 0
    count = 0
    n_res = spec.n0 % spec.modulus
    for m in _members_ascending(w.m + 1, 2 * w.m, spec.m0, spec.modulus):
        mg = m**w.g1
        for t in range(w.t + 1, 2 * w.t + 1):
            rhs = mg - t * t * d
            if rhs <= 0:
                break
            if m % t == 0:
                continue
            n = math.isqrt(rhs)
            if n * n != rhs:
                continue
            if not w.n < n <= 2 * w.n:
                continue
            if n % spec.modulus == n_res:
                count += 1
    return count


def window_representation_counts(
    spec: CongruenceSpec,
    w: WindowParams,
    *,
    triple_budget: int = 10**6,
) -> dict[int, int]:
    """Multiplicity of every square-free d represented inside the window.

    Walks the full triple box once; refuses windows with more than
    `triple_budget` candidate triples.
    """
    if spec.g1 != w.g1:
        raise UsageError("congruence spec and window disagree on g1")
    m_members = _members_ascending(w.m + 1, 2 * w.m, spec.m0, spec.modulus)
    n_members = _members_ascending(w.n + 1, 2 * w.n, spec.n0, spec.modulus)
    candidates = len(m_members) * len(n_members) * w.t
    if candidates > triple_budget:
        raise BudgetError(
            f"window holds {candidates} candidate triples "
            f"(budget {triple_budget})"
        )
    counts: dict[int, int] = {}
    for m in m_members:
        mg = m**w.g1
        for n in n_members:
            num = mg - n * n
            if num <= 0:
                continue
            for t in range(w.t + 1, 2 * w.t + 1):
                if m % t == 0:
                    continue
                d, rem = divmod(num, t * t)
                if rem or d < 1:
                    continue
                if d > w.x:
                    raise ContractViolation(
                        f"window triple produced d = {d} > X = {w.x}"
                    )
                if is_squarefree(d):
                    counts[d] = counts.get(d, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# square-freeness witness for the family polynomial


def rank2_polynomial(g: int) -> IntPolynomial:
    """The trivariate family polynomial in (x, y, z); total degree 2g+2."""
    _require_odd_g(g)
    x = IntPolynomial.variable(0, 3)
    y = IntPolynomial.variable(1, 3)
    z = IntPolynomial.variable(2, 3)
    s = IntPolynomial.constant(0, 3)
    for i in range(g):
        s = s + x ** (g - 1 - i) * y**i
    return 2 * (x**g + y**g) * z**g - (x - y) ** 2 * z ** (2 * g) - s * s


@dataclass(frozen=True)
class WitnessTrial:
    lines: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    degree: int
    gcd_degree: int
    ok: bool


@dataclass(frozen=True)
class WitnessReport:
    g: int
    trials: int
    seed: int
    redraws: int
    results: tuple[WitnessTrial, ...]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.results)


def poly_squarefree_witness(g: int, trials: int, seed: int = 0) -> WitnessReport:
    """Numeric square-freeness witness for the family polynomial.

    Restricts the polynomial to random integer lines x_i = alpha_i*s +
    beta_i and checks gcd(u, u') is constant over the rationals.  A square
    factor of the trivariate polynomial would survive into almost every
    such restriction; constant gcds across many lines witness (but do not
    prove) square-freeness.  Degenerate draws (constant restriction) are
    redrawn and counted.
    """
    _require_odd_g(g)
    if trials < 1:
        raise UsageError("trials must be >= 1")
    poly = rank2_polynomial(g)
    rng = random.Random(seed)
    redraws = 0
    results = []
    for _ in range(trials):
        while True:
            lines = tuple(
                (rng.randint(-30, 30), rng.randint(-30, 30)) for _ in range(3)
            )
            u = poly.substitute_line(lines)
            if upoly_degree(u) >= 1:
                break
            redraws += 1
        gcd_deg = upoly_degree(upoly_gcd(u, upoly_derivative(u)))
        results.append(WitnessTrial(lines, upoly_degree(u), gcd_deg, gcd_deg == 0))
    return WitnessReport(g, trials, seed, redraws, tuple(results))
