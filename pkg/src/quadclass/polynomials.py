"""Small exact polynomial toolkit: multivariate integer polynomials stored
as sparse exponent->coefficient maps, plus univariate helpers (dense,
low-degree-first lists) for derivative and gcd work over the rationals.

Nothing here is asymptotically clever; degrees stay tiny (<= 2g+2) and all
arithmetic must be exact, so plain dict/list algorithms are the right tool.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Sequence


class IntPolynomial:
    """Multivariate polynomial with integer coefficients.

    Coefficients are keyed by exponent tuples of fixed length `nvars`;
    zero coefficients are never stored.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, coeffs: dict[tuple[int, ...], int], nvars: int):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean: dict[tuple[int, ...], int] = {}
        for mono, c in coeffs.items():
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono!r} for {nvars} variables")
            if c:
                clean[tuple(mono)] = c
        self.nvars = nvars
        self.coeffs = clean

    @classmethod
    def constant(cls, c: int, nvars: int) -> "IntPolynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "IntPolynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls({mono: 1}, nvars)

    def _coerce(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return IntPolynomial.constant(int(other), self.nvars)

    def __add__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            out[mono] = out.get(mono, 0) + c
        return IntPolynomial(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(
            {m: -c for m, c in self.coeffs.items()}, self.nvars
        )

    def __sub__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        other = self._coerce(other)
        out: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                key = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                out[key] = out.get(key, 0) + c1 * c2
        return IntPolynomial(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise ValueError("negative power")
        result = IntPolynomial.constant(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntPolynomial)
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"IntPolynomial({self.coeffs!r}, nvars={self.nvars})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        """Largest monomial degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(sum(m) for m in self.coeffs)

    def monomials(self) -> Iterator[tuple[tuple[int, ...], int]]:
        yield from sorted(self.coeffs.items())

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise ValueError("point arity mismatch")
        total = 0
        for mono, c in self.coeffs.items():
            term = c
            for x, e in zip(point, mono):
                if e:
                    term *= x**e
            total += term
        return total

    def evaluate_mod(self, point: Sequence[int], m: int) -> int:
        if len(point) != self.nvars:
            raise ValueError("point arity mismatch")
        total = 0
        for mono, c in self.coeffs.items():
            term = c % m
            for x, e in zip(point, mono):
                if e:
                    term = term * pow(x, e, m) % m
            total += term
        return total % m

    def partial(self, index: int) -> "IntPolynomial":
        """Partial derivative with respect to variable `index`."""
        out: dict[tuple[int, ...], int] = {}
        for mono, c in self.coeffs.items():
            e = mono[index]
            if e == 0:
                continue
            key = tuple(
                v - 1 if i == index else v for i, v in enumerate(mono)
            )
            out[key] = out.get(key, 0) + c * e
        return IntPolynomial(out, self.nvars)

    def substitute_line(
        self, lines: Sequence[tuple[int, int]]
    ) -> list[int]:
        """Restrict to the affine line x_i = alpha_i*s + beta_i.

        Returns the univariate polynomial in s as a dense low-first
        coefficient list.
        """
        if len(lines) != self.nvars:
            raise ValueError("need one (alpha, beta) pair per variable")
        max_exp = [0] * self.nvars
        for mono in self.coeffs:
            for i, e in enumerate(mono):
                max_exp[i] = max(max_exp[i], e)
        # powers[i][e] = coefficients of (alpha_i*s + beta_i)^e
        powers: list[list[list[int]]] = []
        for (alpha, beta), top in zip(lines, max_exp):
            var_pows = [[1]]
            for e in range(1, top + 1):
                var_pows.append(
                    [
                        math.comb(e, k) * alpha**k * beta ** (e - k)
                        for k in range(e + 1)
                    ]
                )
            powers.append(var_pows)
        acc = [0]
        for mono, c in sorted(self.coeffs.items()):
            term = [c]
            for i, e in enumerate(mono):
                term = upoly_mul(term, powers[i][e])
            acc = upoly_add(acc, term)
        return upoly_trim(acc)


# ---------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, lowest degree first)


def upoly_trim(u: Sequence[int]) -> list[int]:
    out = list(u)
    while out and out[-1] == 0:
        out.pop()
    return out


def upoly_degree(u: Sequence[int]) -> int:
    t = upoly_trim(u)
    return len(t) - 1


def upoly_add(u: Sequence[int], v: Sequence[int]) -> list[int]:
    n = max(len(u), len(v))
    return [
        (u[i] if i < len(u) else 0) + (v[i] if i < len(v) else 0)
        for i in range(n)
    ]


def upoly_mul(u: Sequence[int], v: Sequence[int]) -> list[int]:
    if not u or not v:
        return []
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a == 0:
            continue
        for j, b in enumerate(v):
            out[i + j] += a * b
    return out


def upoly_derivative(u: Sequence[int]) -> list[int]:
    return upoly_trim([i * c for i, c in enumerate(u)][1:])


def upoly_primitive(u: Sequence[int]) -> list[int]:
    """Divide out the integer content; sign normalized to positive leading."""
    t = upoly_trim(u)
    if not t:
        return []
    g = 0
    for c in t:
        g = math.gcd(g, c)
    if t[-1] < 0:
        g = -g
    return [c // g for c in t]


def upoly_pseudo_rem(u: Sequence[int], v: Sequence[int]) -> list[int]:
    """Remainder of u by v after scaling by powers of v's leading coefficient.

    The result differs from the true rational remainder by a nonzero constant
    only, which is all the primitive-PRS gcd below needs.
    """
    u = upoly_trim(u)
    v = upoly_trim(v)
    if not v:
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    dv = len(v) - 1
    lc = v[-1]
    while len(u) - 1 >= dv:
        if u[-1] == 0:
            u.pop()
            continue
        shift = len(u) - 1 - dv
        top = u[-1]
        u = [lc * c for c in u]
        for i, vc in enumerate(v):
            u[shift + i] -= top * vc
        u = upoly_trim(u)
    return u


def upoly_gcd(u: Sequence[int], v: Sequence[int]) -> list[int]:
    """gcd over the rationals, returned as a primitive integer polynomial.

    Primitive polynomial remainder sequence: pseudo-remainders with content
    stripped each round, so coefficients stay manageable at these degrees.
    """
    a = upoly_primitive(u)
    b = upoly_primitive(v)
    while b:
        r = upoly_pseudo_rem(a, b)
        a, b = b, upoly_primitive(r)
    return upoly_primitive(a)
