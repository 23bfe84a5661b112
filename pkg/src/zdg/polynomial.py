"""Univariate polynomials with arbitrary-precision integer coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


def _strip(coeffs: Sequence) -> tuple:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


class IntPolynomial:
    """Polynomial stored as ascending-degree integer coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer coefficient {c}")
                c = c.numerator
            cs.append(int(c))
        self.coeffs = _strip(cs)

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def from_json(cls, text: str) -> IntPolynomial:
        return cls(int(s) for s in json.loads(text))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> IntPolynomial:
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> IntPolynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> IntPolynomial:
        return _coerce(other) - self

    def __mul__(self, other) -> IntPolynomial:
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        if k < 0:
            raise ValueError("negative exponent")
        result = IntPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, value):
        acc = 0 * value
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose(self, inner: IntPolynomial) -> IntPolynomial:
        """Return self(inner(x))."""
        acc = IntPolynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def compose_negate(self) -> IntPolynomial:
        """Return p(-x)."""
        return IntPolynomial(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def primitive(self) -> IntPolynomial:
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def zero_root_multiplicity(self) -> int:
        return zero_root_multiplicity(self)

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(value) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int):
        return IntPolynomial.constant(value)
    raise TypeError(f"cannot combine IntPolynomial with {type(value).__name__}")


X = IntPolynomial.x()


def poly_mul(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p * q


def poly_add(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p + q


def poly_compose_negate(p: IntPolynomial) -> IntPolynomial:
    return p.compose_negate()


def divmod_rational(q: IntPolynomial, p: IntPolynomial) -> tuple[list[Fraction], list[Fraction]]:
    """Long division q = p*h + r over the rationals; returns (h, r) ascending."""
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = [Fraction(c) for c in q.coeffs]
    dp = p.degree
    lead = Fraction(p.leading)
    if len(rem) - 1 < dp:
        return [], list(_strip(rem))
    quot = [Fraction(0)] * (len(rem) - dp)
    for k in range(len(rem) - 1, dp - 1, -1):
        c = rem[k] / lead
        if c == 0:
            continue
        quot[k - dp] = c
        for i, pc in enumerate(p.coeffs):
            rem[k - dp + i] -= c * pc
    return list(_strip(quot)), list(_strip(rem[:dp]))


def divides(p: IntPolynomial, q: IntPolynomial) -> bool:
    """True iff q = p*h for some polynomial h with rational coefficients."""
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if q.is_zero():
        return True
    # x is coprime to the rest of p, so powers of x can be split off first
    a, b = zero_root_multiplicity(p), zero_root_multiplicity(q)
    if a > b:
        return False
    _, rem = divmod_rational(IntPolynomial(q.coeffs[b:]), IntPolynomial(p.coeffs[a:]))
    return not rem


def exact_quotient(q: IntPolynomial, p: IntPolynomial) -> IntPolynomial:
    """The integer polynomial q / p; raises ValueError if it is not one."""
    quot, rem = divmod_rational(q, p)
    if rem or any(c.denominator != 1 for c in quot):
        raise ValueError(f"{p} does not divide {q} over the integers")
    return IntPolynomial(quot)


def zero_root_multiplicity(p: IntPolynomial) -> int:
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite zero-root multiplicity")
    for k, c in enumerate(p.coeffs):
        if c != 0:
            return k
    raise AssertionError("unreachable")


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Q (leading coefficient positive)."""
    a, b = p.primitive(), q.primitive()
    while not b.is_zero():
        _, rem = divmod_rational(a, b)
        if not rem:
            a, b = b, IntPolynomial()
            break
        den = reduce(lambda u, v: u * v // gcd(u, v), (c.denominator for c in rem), 1)
        r = IntPolynomial(c * den for c in rem).primitive()
        a, b = b, r
    return a.primitive()


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Split p into pairwise coprime squarefree factors: p ~ prod f_i^i.

    Returns [(f_i, i)] for the non-constant f_i, each primitive. Constants
    are dropped, so the product matches p only up to a scalar.
    """
    if p.degree < 1:
        return []
    out = []
    c = poly_gcd(p, p.derivative())
    w = exact_primitive_quotient(p, c)
    i = 1
    while w.degree >= 1:
        y = poly_gcd(w, c)
        f = exact_primitive_quotient(w, y)
        if f.degree >= 1:
            out.append((f, i))
        w = y
        c = exact_primitive_quotient(c, y)
        i += 1
    return out


def exact_primitive_quotient(q: IntPolynomial, p: IntPolynomial) -> IntPolynomial:
    """(q / p) scaled to a primitive integer polynomial; p must divide q over Q."""
    quot, rem = divmod_rational(q, p)
    if rem:
        raise ValueError("inexact division")
    den = reduce(lambda u, v: u * v // gcd(u, v), (c.denominator for c in quot), 1)
    return IntPolynomial(c * den for c in quot).primitive()
