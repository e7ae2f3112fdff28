"""Exact polynomial arithmetic tests.

Random multivariate polynomials are compared against direct evaluation at
integer points; line restriction, partial derivatives, and the univariate
derivative are tied together by the chain rule, which none of them can fake
individually.
"""

from __future__ import annotations

import random
from math import gcd

from quadclass.polynomials import (
    IntPolynomial,
    upoly_add,
    upoly_degree,
    upoly_derivative,
    upoly_gcd,
    upoly_mul,
    upoly_primitive,
    upoly_trim,
)


def random_poly(rng: random.Random, nvars: int, terms: int,
                max_exp: int = 4) -> IntPolynomial:
    coeffs = {}
    for _ in range(terms):
        mono = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        coeffs[mono] = coeffs.get(mono, 0) + rng.randint(-9, 9)
    return IntPolynomial(coeffs, nvars)


def eval_list(u: list[int], s: int) -> int:
    return sum(c * s**i for i, c in enumerate(u))


def test_constant_and_variable():
    c = IntPolynomial.constant(7, 3)
    assert c.evaluate((10, 20, 30)) == 7
    y = IntPolynomial.variable(1, 3)
    assert y.evaluate((10, 20, 30)) == 20
    assert (c + y).evaluate((1, 2, 3)) == 9


def test_ring_operations_against_evaluation():
    rng = random.Random(2)
    pts = [(0, 0), (1, 1), (2, -3), (-5, 7), (11, 13)]
    for _ in range(80):
        p = random_poly(rng, 2, 5)
        q = random_poly(rng, 2, 5)
        for pt in pts:
            pv, qv = p.evaluate(pt), q.evaluate(pt)
            assert (p + q).evaluate(pt) == pv + qv
            assert (p - q).evaluate(pt) == pv - qv
            assert (p * q).evaluate(pt) == pv * qv
            assert (3 * p).evaluate(pt) == 3 * pv
            assert (p + 4).evaluate(pt) == pv + 4
            assert (2 - p).evaluate(pt) == 2 - pv
            assert (-p).evaluate(pt) == -pv
            assert (p**3).evaluate(pt) == pv**3


def test_evaluate_mod_matches_exact():
    rng = random.Random(3)
    for _ in range(60):
        p = random_poly(rng, 3, 6)
        pt = tuple(rng.randint(-20, 20) for _ in range(3))
        for m in (2, 3, 4, 9, 25, 49, 97):
            assert p.evaluate_mod(pt, m) == p.evaluate(pt) % m


def test_total_degree_and_monomials():
    p = IntPolynomial({(2, 1): 3, (0, 4): -1, (0, 0): 5}, 2)
    assert p.total_degree() == 4
    assert list(p.monomials()) == [((0, 0), 5), ((0, 4), -1), ((2, 1), 3)]
    zero = IntPolynomial({}, 2)
    assert zero.is_zero() and zero.total_degree() == -1
    # cancelling coefficients must vanish from the support
    q = IntPolynomial({(1, 0): 2}, 2) + IntPolynomial({(1, 0): -2}, 2)
    assert q.is_zero()


def test_partial_by_finite_formula():
    """d/dx of each monomial is checked via p(x+1) - p(x) expansion free:
    compare partial against a hand-built derivative of the same dict."""
    rng = random.Random(5)
    for _ in range(40):
        p = random_poly(rng, 2, 6)
        for idx in range(2):
            dp = p.partial(idx)
            want = {}
            for mono, c in p.coeffs.items():
                if mono[idx] == 0:
                    continue
                key = list(mono)
                key[idx] -= 1
                key = tuple(key)
                want[key] = want.get(key, 0) + c * mono[idx]
            want = {k: v for k, v in want.items() if v}
            assert dict(dp.coeffs) == want


def test_partial_leibniz_rule():
    rng = random.Random(6)
    for _ in range(30):
        p = random_poly(rng, 3, 4)
        q = random_poly(rng, 3, 4)
        for idx in range(3):
            lhs = (p * q).partial(idx)
            rhs = p.partial(idx) * q + p * q.partial(idx)
            assert lhs == rhs


def test_substitute_line_matches_evaluation():
    rng = random.Random(7)
    for _ in range(50):
        nvars = rng.randint(1, 3)
        p = random_poly(rng, nvars, 5)
        lines = [(rng.randint(-4, 4), rng.randint(-4, 4))
                 for _ in range(nvars)]
        u = p.substitute_line(lines)
        for s in (-3, -1, 0, 1, 2, 5):
            pt = tuple(a * s + b for a, b in lines)
            assert eval_list(u, s) == p.evaluate(pt), (p, lines, s)


def test_substitute_line_chain_rule():
    """d/ds p(line(s)) = sum_i alpha_i * (d_i p)(line(s))."""
    rng = random.Random(8)
    for _ in range(30):
        p = random_poly(rng, 3, 5)
        lines = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(3)]
        lhs = upoly_derivative(p.substitute_line(lines))
        rhs = [0]
        for i, (alpha, _) in enumerate(lines):
            term = p.partial(i).substitute_line(lines)
            rhs = upoly_add(rhs, [alpha * c for c in term])
        assert upoly_trim(lhs) == upoly_trim(rhs)


def test_upoly_basics():
    assert upoly_trim([1, 2, 0, 0]) == [1, 2]
    assert upoly_trim([0]) == []
    assert upoly_degree([]) == -1
    assert upoly_degree([5]) == 0
    assert upoly_degree([0, 0, 7]) == 2
    assert upoly_trim(upoly_add([1, 2], [3, -2])) == [4]  # add defers trimming
    assert upoly_mul([1, 1], [1, -1]) == [1, 0, -1]      # (1+s)(1-s)
    assert upoly_mul([], [1, 2]) == []
    assert upoly_derivative([5, 3, 2, 4]) == [3, 4, 12]
    assert upoly_primitive([6, -9, 12]) == [2, -3, 4]
    assert upoly_primitive([-4, -8]) == [1, 2]           # leading made positive
    assert upoly_primitive([]) == []


def test_upoly_mul_matches_evaluation():
    rng = random.Random(9)
    for _ in range(60):
        u = [rng.randint(-9, 9) for _ in range(rng.randint(0, 6))]
        v = [rng.randint(-9, 9) for _ in range(rng.randint(0, 6))]
        w = upoly_mul(u, v)
        for s in (-2, 0, 1, 3):
            assert eval_list(w, s) == eval_list(u, s) * eval_list(v, s)


def test_upoly_gcd_planted_factor():
    rng = random.Random(10)
    hits = 0
    for _ in range(60):
        w = [rng.randint(-5, 5) for _ in range(rng.randint(1, 3))] + [1]
        u = upoly_mul(w, [rng.randint(-5, 5) for _ in range(3)] + [1])
        v = upoly_mul(w, [rng.randint(-5, 5) for _ in range(2)] + [1])
        g = upoly_gcd(u, v)
        assert upoly_degree(g) >= upoly_degree(upoly_trim(w))
        # the planted factor divides the gcd at sample points
        for s in (2, 3, 5, 7):
            ws, gs = eval_list(upoly_trim(w), s), eval_list(g, s)
            if ws != 0:
                hits += 1
                assert gs % gcd(ws, gs) == 0
        # and the gcd divides both inputs numerically at many points
        for s in (11, 13, 17):
            gs = eval_list(g, s)
            if gs not in (0, 1, -1):
                assert eval_list(u, s) % gs == 0
                assert eval_list(v, s) % gs == 0
    assert hits > 100


def test_upoly_gcd_coprime_is_constant():
    # x^2+1 and x^2-2 share no factor over Q
    assert upoly_degree(upoly_gcd([1, 0, 1], [-2, 0, 1])) == 0


def test_upoly_gcd_square_detection():
    # classic control: (s^2-1)^2 has gcd with its derivative of degree 2
    sq = [1, 0, -2, 0, 1]
    g = upoly_gcd(sq, upoly_derivative(sq))
    assert upoly_degree(g) == 2
    # squarefree control: s^2-1 gives a constant gcd
    g2 = upoly_gcd([-1, 0, 1], upoly_derivative([-1, 0, 1]))
    assert upoly_degree(g2) == 0


def test_upoly_gcd_edges():
    assert upoly_gcd([], [1, 2]) == upoly_primitive([1, 2])
    assert upoly_gcd([0, 0], []) == []
    assert upoly_degree(upoly_gcd([4], [6])) == 0
