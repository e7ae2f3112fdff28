"""Class-group engine tests.

The main oracle is a from-scratch triple scan over (a, b, c): slow, but it
shares no code with the enumeration under test.  Group structure claims are
checked against torsion counts computed by brute-force powering, and the
composition law is tested against the abelian-group axioms directly.
"""

from __future__ import annotations

import random
from math import gcd, isqrt, prod

import pytest

from quadclass.arith import factorize, squarefree_sieve
from quadclass.classgroup import (
    ClassGroup,
    Discriminant,
    QuadForm,
    class_number,
    compose,
    element_order,
    embeds,
    enumerate_reduced_forms,
    form_pow,
    fundamental_discriminant,
    group_structure,
    identity_form,
    inverse_form,
    is_fundamental_discriminant,
    reduce_form,
    reduced_form_tables,
    sweep_structures,
    two_rank_genus,
)
from quadclass.errors import BudgetError, UsageError


def brute_reduced_forms(delta: int) -> list[QuadForm]:
    """Every primitive reduced form of discriminant delta, by full scan."""
    assert delta < 0
    out = []
    a_max = isqrt(-delta // 3)
    for a in range(1, a_max + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or a == -b):
                continue  # boundary forms are stored with b >= 0
            if gcd(gcd(a, b), c) == 1:
                out.append(QuadForm(a, b, c))
    return sorted(out)


FUNDAMENTAL_SAMPLE = [-3, -4, -7, -8, -11, -15, -20, -23, -24, -47, -71,
                      -84, -163, -231, -419, -420, -888, -1155]


def test_enumerate_matches_brute_on_sample():
    for delta in FUNDAMENTAL_SAMPLE:
        assert enumerate_reduced_forms(delta) == brute_reduced_forms(delta), delta


def test_enumerate_matches_brute_random_fundamental():
    rng = random.Random(17)
    checked = 0
    while checked < 60:
        delta = -rng.randrange(3, 40000)
        if not is_fundamental_discriminant(delta):
            continue
        assert enumerate_reduced_forms(delta) == brute_reduced_forms(delta), delta
        checked += 1


def test_class_number_spots():
    # classical values: h(-23)=3, h(-47)=5, h(-71)=7, h(-163)=1
    assert class_number(-23) == 3
    assert class_number(-47) == 5
    assert class_number(-71) == 7
    assert class_number(-163) == 1
    assert class_number(-4) == 1
    assert class_number(-84) == 4


def test_fundamental_discriminant_cases():
    assert fundamental_discriminant(3) == Discriminant(3, -3)
    assert fundamental_discriminant(1) == Discriminant(1, -4)
    assert fundamental_discriminant(5) == Discriminant(5, -20)
    assert fundamental_discriminant(6) == Discriminant(6, -24)
    with pytest.raises(UsageError):
        fundamental_discriminant(12)
    with pytest.raises(UsageError):
        fundamental_discriminant(0)


def test_is_fundamental_discriminant_table():
    sf = squarefree_sieve(8000)
    want = set()
    for d in range(1, 8001):
        if sf[d]:
            want.add(-d if d % 4 == 3 else -4 * d)
    for delta in range(-8000, 1):
        assert is_fundamental_discriminant(delta) == (delta in want), delta


def random_sl2(rng: random.Random) -> tuple[int, int, int, int]:
    """A word in the standard generators S, T of SL2(Z)."""
    p, q, r, s = 1, 0, 0, 1
    for _ in range(rng.randint(1, 12)):
        if rng.random() < 0.5:
            p, q, r, s = q, -p, s, -r          # right-multiply by S
        else:
            k = rng.randint(-3, 3)
            p, q, r, s = p, q + k * p, r, s + k * r  # by T^k
    return p, q, r, s


def transform(f: QuadForm, m: tuple[int, int, int, int]) -> QuadForm:
    p, q, r, s = m
    a, b, c = f
    return QuadForm(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def test_reduce_form_recovers_class_representative():
    rng = random.Random(4)
    for delta in FUNDAMENTAL_SAMPLE:
        for f in enumerate_reduced_forms(delta):
            for _ in range(8):
                g = transform(f, random_sl2(rng))
                assert g.discriminant() == delta
                assert reduce_form(g) == f, (f, g)


def test_reduce_form_spots():
    assert reduce_form(QuadForm(3, 5, 4)) == QuadForm(2, 1, 3)
    assert reduce_form(QuadForm(1, 1, 1)) == QuadForm(1, 1, 1)


def test_reduced_form_predicates():
    f = QuadForm(2, 1, 3)
    assert f.is_reduced() and f.is_primitive()
    assert f.discriminant() == -23
    assert not QuadForm(3, 5, 4).is_reduced()
    assert not QuadForm(2, 2, 2).is_primitive()


AXIOM_LIMIT = 10**4


def test_composition_axioms_to_ten_thousand():
    """Identity and inverses exhaustively; comm/assoc sampled when h is big."""
    rng = random.Random(11)
    for delta in range(-AXIOM_LIMIT, 0):
        if not is_fundamental_discriminant(delta):
            continue
        forms = enumerate_reduced_forms(delta)
        one = identity_form(delta)
        assert one in forms
        for f in forms:
            assert compose(f, one) == f
            assert compose(one, f) == f
            assert compose(f, inverse_form(f)) == one
        h = len(forms)
        if h <= 12:
            pairs = [(f, g) for f in forms for g in forms]
            triples = [(f, g, k) for f in forms for g in forms for k in forms]
        else:
            pairs = [(rng.choice(forms), rng.choice(forms)) for _ in range(60)]
            triples = [tuple(rng.choice(forms) for _ in range(3))
                       for _ in range(40)]
        for f, g in pairs:
            assert compose(f, g) == compose(g, f)
        for f, g, k in triples:
            assert compose(compose(f, g), k) == compose(f, compose(g, k))


def test_compose_closes_on_reduced_forms():
    for delta in (-23, -47, -84, -231, -1155):
        forms = set(enumerate_reduced_forms(delta))
        for f in forms:
            for g in forms:
                assert compose(f, g) in forms


def test_form_pow_and_element_order():
    for delta in (-23, -47, -71, -84, -419):
        forms = enumerate_reduced_forms(delta)
        one = identity_form(delta)
        for f in forms:
            # brute order by repeated composition
            cur, n = f, 1
            while cur != one:
                cur = compose(cur, f)
                n += 1
            assert element_order(f) == n
            assert form_pow(f, n) == one
            assert form_pow(f, 0) == one
            assert form_pow(f, -1) == inverse_form(f)
            k = 5
            assert form_pow(f, k) == form_pow(f, k % n) if n else True


def test_element_order_budget():
    f = enumerate_reduced_forms(-47)[1]
    with pytest.raises(BudgetError):
        element_order(f, cap=2)


def torsion_count(forms: list[QuadForm], m: int) -> int:
    one = identity_form(forms[0].discriminant())
    return sum(1 for f in forms if form_pow(f, m) == one)


def test_group_structure_torsion_counts():
    """N(m) = prod gcd(m, d_i) must hold for every claimed structure."""
    rng = random.Random(23)
    checked = 0
    while checked < 80:
        delta = -rng.randrange(3, 30000)
        if not is_fundamental_discriminant(delta):
            continue
        forms = enumerate_reduced_forms(delta)
        grp = group_structure(delta, forms)
        inv = grp.invariant_factors
        assert grp.order == len(forms)
        assert prod(inv) == grp.order if inv else grp.order == 1
        # divisibility chain d_1 | d_2 | ... and all factors > 1
        for i in range(len(inv) - 1):
            assert inv[i + 1] % inv[i] == 0
        assert all(d > 1 for d in inv)
        exponent = inv[-1] if inv else 1
        for m in [2, 3, 4, 5, 6, 8, 9, 12, exponent]:
            want = prod(gcd(m, d) for d in inv) if inv else 1
            assert torsion_count(forms, m) == want, (delta, m)
        checked += 1


def test_group_structure_spots():
    assert group_structure(-23).invariant_factors == (3,)
    assert group_structure(-84).invariant_factors == (2, 2)
    assert group_structure(-163).invariant_factors == ()
    # the next three are pinned by brute torsion counts / element orders:
    # -3299 has h=27 with N(3)=9 and exponent 9; -4027 has h=9, exponent 3;
    # -3896 has h=36, N(2)=2, exponent 12.
    assert group_structure(-3299).invariant_factors == (3, 9)
    assert group_structure(-4027).invariant_factors == (3, 3)
    assert group_structure(-3896).invariant_factors == (3, 12)
    # 2-rank 3 case
    g = group_structure(-1155)
    assert g.two_rank == 3
    assert g.order == 8


def test_class_group_properties():
    g = ClassGroup(Discriminant(84, -336), 8, (2, 2, 2))
    assert g.two_rank == 3
    assert g.exponent == 2
    trivial = ClassGroup(Discriminant(163, -163), 1, ())
    assert trivial.two_rank == 0
    assert trivial.exponent == 1


TABLE_LIMIT = 30000


def test_reduced_form_tables_match_enumeration():
    h_tab, amb_tab = reduced_form_tables(TABLE_LIMIT)
    assert len(h_tab) == TABLE_LIMIT + 1
    rng = random.Random(7)
    discs = {n for n in range(3, 400) if (-n) % 4 in (0, 1)}
    discs |= {rng.randrange(3, TABLE_LIMIT) for _ in range(300)}
    one_count = 0
    for n in sorted(discs):
        if (-n) % 4 not in (0, 1):
            assert h_tab[n] == 0 and amb_tab[n] == 0
            continue
        forms = enumerate_reduced_forms(-n, check_fundamental=False)
        assert h_tab[n] == len(forms), n
        amb = sum(1 for f in forms if inverse_form(f) == f)
        assert amb_tab[n] == amb, n
        one_count += 1
    assert one_count > 250


def test_sweep_structures_match_group_structure():
    rows = list(sweep_structures(3000))
    sf = squarefree_sieve(3000)
    assert [r.radicand for r in rows] == [d for d in range(1, 3001) if sf[d]]
    for row in rows:
        assert row.delta == (-row.radicand if row.radicand % 4 == 3
                             else -4 * row.radicand)
        grp = group_structure(row.delta)
        assert row.order == grp.order, row
        assert row.invariant_factors == grp.invariant_factors, row


def test_sweep_structures_two_rank_matches_genus_theory():
    for row in sweep_structures(2000):
        got = sum(1 for d in row.invariant_factors if d % 2 == 0)
        assert got == two_rank_genus(row.delta), row


def test_two_rank_genus_spots():
    assert two_rank_genus(-84) == 2      # |delta| = 2^2*3*7
    assert two_rank_genus(-1155) == 3    # 3*5*7*11
    assert two_rank_genus(-23) == 0
    assert two_rank_genus(-4) == 0


def test_embeds_cases():
    assert embeds((2, 2), (2, 2, 4))
    assert embeds((2, 6), (2, 12))
    assert not embeds((2, 2), (16,))
    assert not embeds((5, 5), (25,))
    # torsion counts alone would pass this one; the exponent rules it out
    assert not embeds((8,), (4, 12))
    assert embeds((5, 5), (5, 35))
    assert embeds((), (7,))
    assert embeds((3, 3), (3, 3))
    assert not embeds((9,), (3, 3))
    with pytest.raises(UsageError):
        embeds((1, 2), (4,))


def brute_embeds(H: tuple[int, ...], G: tuple[int, ...]) -> bool:
    """Literal search for an injective homomorphism, for tiny groups.

    Candidate image of each H generator is any G element killed by the
    generator's order; the map is injective iff its image has |H| points.
    Exponential, so callers must keep |G| and |H| small.
    """
    from itertools import product as iproduct

    if not H:
        return True
    elems_G = list(iproduct(*[range(d) for d in G])) if G else [()]
    elems_H = list(iproduct(*[range(d) for d in H]))
    cands = [
        [y for y in elems_G if all(m * yi % d == 0 for yi, d in zip(y, G))]
        for m in H
    ]
    for imgs in iproduct(*cands):
        image = {
            tuple(
                sum(xi * img[k] for xi, img in zip(x, imgs)) % G[k]
                for k in range(len(G))
            )
            for x in elems_H
        }
        if len(image) == len(elems_H):
            return True
    return False


def test_embeds_matches_homomorphism_search_on_small_groups():
    rng = random.Random(31)
    pool = [2, 2, 3, 4, 4, 6, 8, 9, 12]
    checked = 0
    while checked < 80:
        H = tuple(sorted(rng.sample(pool, rng.randint(0, 2))))
        G = tuple(sorted(rng.sample(pool, rng.randint(0, 2))))
        if any(x % y for x, y in zip(G[1:], G)) or any(
                x % y for x, y in zip(H[1:], H)):
            continue  # embeds() wants invariant-factor chains
        assert embeds(H, G) == brute_embeds(H, G), (H, G)
        checked += 1


def test_enumeration_budget_error():
    with pytest.raises(BudgetError):
        enumerate_reduced_forms(-10**13 - 3, enum_bound=10**12)
    with pytest.raises(BudgetError):
        group_structure(-127, enum_bound=100)


def test_enumeration_rejects_non_fundamental():
    with pytest.raises(UsageError):
        enumerate_reduced_forms(-12)
    # but the check can be disabled for form-class work
    forms = enumerate_reduced_forms(-12, check_fundamental=False)
    assert forms == [QuadForm(1, 0, 3)]

    with pytest.raises(UsageError):
        enumerate_reduced_forms(5)
