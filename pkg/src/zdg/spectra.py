"""Numeric spectra with multiplicities, and closed-form spectra for Z_p^3, Z_p^4.

Floating point lives here and nowhere else. For rings that are products of
integer-modulo rings the spectrum is assembled from exact data: the nonzero
eigenvalues are the roots of the exact characteristic polynomial of the
weighted compressed matrix (split into squarefree factors first, so every
multiplicity is exact) and the zero multiplicity is the exact nullity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .construct import compressed_graph, weighted_quotient_matrix, zero_divisor_graph
from .linalg import charpoly, nullity
from .polynomial import X, IntPolynomial, squarefree_decomposition
from .rings import FiniteRing, is_prime

GROUPING_TOL = 1e-6
VALUE_RTOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """(eigenvalue, multiplicity) pairs sorted by descending value."""

    entries: tuple[tuple[float, int], ...]

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.entries]

    def multiplicity(self, value: float, tol: float = GROUPING_TOL) -> int:
        return sum(m for v, m in self.entries if abs(v - value) <= tol)

    @property
    def zero_multiplicity(self) -> int:
        return self.multiplicity(0.0)

    @property
    def nonzero(self) -> Spectrum:
        return Spectrum(tuple((v, m) for v, m in self.entries if abs(v) > GROUPING_TOL))

    def trace(self) -> float:
        return sum(v * m for v, m in self.entries)

    def power_sum(self, k: int) -> float:
        return sum(v**k * m for v, m in self.entries)

    def expanded(self) -> list[float]:
        return [v for v, m in self.entries for _ in range(m)]

    def matches(self, other: Spectrum, tol: float = VALUE_RTOL) -> bool:
        """Same multiplicities and values agreeing within tol * max(1, |value|)."""
        if len(self.entries) != len(other.entries):
            return False
        for (v1, m1), (v2, m2) in zip(self.entries, other.entries):
            if m1 != m2 or abs(v1 - v2) > tol * max(1.0, abs(v1)):
                return False
        return True

    def to_json_obj(self) -> list[dict]:
        return [{"value": format_value(v), "multiplicity": m} for v, m in self.entries]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def __str__(self) -> str:
        return "{" + ", ".join(f"{format_value(v)}^[{m}]" for v, m in self.entries) + "}"


def format_value(v: float) -> str:
    """12 significant digits, with negative zero folded into zero."""
    s = f"{v:.12g}"
    return "0" if s in ("-0", "0", "-0.0") or abs(v) < 1e-12 else s


def group_values(values, tol: float = GROUPING_TOL) -> Spectrum:
    """Cluster sorted values whose neighbours lie within tol; cluster value is the mean."""
    vals = sorted((float(v) for v in values), reverse=True)
    groups: list[list[float]] = []
    for v in vals:
        if groups and abs(groups[-1][-1] - v) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return Spectrum(tuple((math.fsum(g) / len(g), len(g)) for g in groups))


def _merge(entries, tol: float) -> Spectrum:
    expanded = []
    for v, m in entries:
        expanded.extend([v] * m)
    return group_values(expanded, tol)


def eigenvalues_symmetric(m, tol: float = GROUPING_TOL) -> Spectrum:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    if a.shape[0] == 0:
        return Spectrum(())
    vals = np.linalg.eigvalsh(a.astype(np.float64))
    return group_values(vals, tol)


def polynomial_roots(p: IntPolynomial, tol: float = GROUPING_TOL) -> Spectrum:
    """Real roots of an exact polynomial with exact multiplicities.

    Raises ValueError if a root has a non-negligible imaginary part.
    """
    entries = []
    zero_mult = p.zero_root_multiplicity()
    if zero_mult:
        entries.append((0.0, zero_mult))
    stripped = IntPolynomial(p.coeffs[zero_mult:])
    for factor, mult in squarefree_decomposition(stripped):
        for r in _simple_roots(factor):
            entries.append((r, mult))
    return _merge(entries, tol)


def _simple_roots(f: IntPolynomial) -> list[float]:
    if f.degree == 1:
        return [-f.coeffs[0] / f.coeffs[1]]
    if f.degree == 2:
        c, b, a = f.coeffs
        disc = b * b - 4 * a * c
        if disc < 0:
            raise ValueError(f"{f} has complex roots")
        with mpmath.workdps(40):
            s = mpmath.sqrt(disc)
            return [float((-b + s) / (2 * a)), float((-b - s) / (2 * a))]
    coeffs = list(reversed(f.coeffs))
    dps = 30 + f.degree
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(coeffs, maxsteps=200 + 20 * f.degree, extraprec=10 * f.degree)
        out = []
        for r in roots:
            scale = max(1, abs(r))
            if abs(mpmath.im(r)) > 1e-8 * scale:
                raise ValueError(f"{f} has a complex root {r}")
            out.append(float(mpmath.re(r)))
    return out


def spectrum_of_ring(ring: FiniteRing, tol: float = GROUPING_TOL) -> Spectrum:
    """Spectrum of the zero-divisor graph.

    Rings built from integer-modulo factors use exact data (compressed-matrix
    characteristic polynomial plus exact nullity); other rings fall back to a
    symmetric eigensolver on the full adjacency matrix.
    """
    g = zero_divisor_graph(ring)
    if g.order == 0:
        raise ValueError(f"{ring.name or 'ring'} has no zero-divisors; its graph is empty")
    if not ring.modular:
        return eigenvalues_symmetric(g.adjacency, tol)
    chi = charpoly(weighted_quotient_matrix(compressed_graph(ring)))
    eta = nullity(g)
    nonzero_part = IntPolynomial(chi.coeffs[chi.zero_root_multiplicity():])
    entries = list(polynomial_roots(nonzero_part, tol).entries)
    if eta:
        entries.append((0.0, eta))
    spec = _merge(entries, tol)
    if spec.dimension != g.order:
        raise ArithmeticError("compressed spectrum does not account for every vertex")
    return spec


# ---------------------------------------------------------------------------
# Closed forms for products of Z_p
# ---------------------------------------------------------------------------


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def closed_form_p3(p: int, tol: float = GROUPING_TOL) -> Spectrum:
    """Spectrum of Gamma(Z_p x Z_p x Z_p) from the closed-form eigenvalues."""
    _require_prime(p)
    s1 = math.sqrt(4 * p - 3)
    s2 = math.sqrt(p - 2 * p**2 + p**3)
    entries = [
        ((1 - p + (p - 1) * s1) / 2, 2),
        ((1 - p - (p - 1) * s1) / 2, 2),
        (p - 1 + s2, 1),
        (p - 1 - s2, 1),
    ]
    eta = 3 * (p + 1) * (p - 2)
    if eta:
        entries.append((0.0, eta))
    return _merge(entries, tol)


def nullity_p4_literal(p: int) -> int:
    """Uncorrected zero multiplicity for Z_p^4: p^4 - (p-1)^4 - 2^4 - 1."""
    return p**4 - (p - 1) ** 4 - 2**4 - 1


def nullity_p4_corrected(p: int) -> int:
    """Zero multiplicity for Z_p^4 from the general nullity formula."""
    return p**4 - (p - 1) ** 4 - 2**4 + 1


def lambda2_p4_literal(p: int) -> float:
    return float(-(p**2) + p - 1)


def lambda2_p4_from_factor(p: int) -> float:
    """Root of the linear factor (1 - 2p + p^2 + x)."""
    return float(-((p - 1) ** 2))


def closed_form_p4(p: int, variant: str = "factored", tol: float = GROUPING_TOL) -> Spectrum:
    """Spectrum of Gamma(Z_p^4).

    ``factored`` takes every nonzero eigenvalue from the factored
    characteristic polynomial and the zero multiplicity from the general
    nullity formula; ``literal`` uses the eigenvalue list and nullity exactly
    in their uncorrected form (the result can have a negative "multiplicity" at p = 2, in
    which case the zero entry is omitted).
    """
    _require_prime(p)
    q = (p - 1) ** 2
    s34 = (p - 1) * math.sqrt(4 * p - 3)
    s56 = math.sqrt(3) * math.sqrt(4 * p**3 - 9 * p**2 + 6 * p - 1)
    lam3 = (-2 * p**2 + 3 * p - 1 + s34) / 2
    lam4 = (-2 * p**2 + 3 * p - 1 - s34) / 2
    lam5 = (2 * p**2 - p - 1 + s56) / 2
    lam6 = (2 * p**2 - p - 1 - s56) / 2
    if variant == "factored":
        lam2, eta = lambda2_p4_from_factor(p), nullity_p4_corrected(p)
    elif variant == "literal":
        lam2, eta = lambda2_p4_literal(p), nullity_p4_literal(p)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    entries = [(float(q), 5), (lam2, 1), (lam3, 3), (lam4, 3), (lam5, 1), (lam6, 1)]
    if eta > 0:
        entries.append((0.0, eta))
    return _merge(entries, tol)


def charpoly_formula_p3(p: int) -> IntPolynomial:
    """Displayed characteristic polynomial of the compressed matrix of Z_p^3."""
    _require_prime(p)
    c = -1 + 3 * p - 3 * p**2 + p**3
    f1 = IntPolynomial((c, 1 - p, -1))
    f2 = IntPolynomial((c, 2 * (p - 1), -1))
    return -(f1**2) * f2


def charpoly_formula_p4(p: int) -> IntPolynomial:
    """Displayed factored characteristic polynomial for Z_p^4."""
    _require_prime(p)
    q = 1 - 2 * p + p**2
    r = 1 - 4 * p + 6 * p**2 - 4 * p**3 + p**4
    f1 = IntPolynomial((q, -1))
    f2 = IntPolynomial((q, 1))
    f3 = IntPolynomial((r, 1 + p - 2 * p**2, 1))
    f4 = IntPolynomial((r, 1 - 3 * p + 2 * p**2, 1))
    return -(f1**5) * f2 * f3 * f4**3


def charpoly_formula_ppq(p: int, q: int) -> IntPolynomial:
    """Displayed sextic for Z_p x Z_p x Z_q."""
    _require_prime(p)
    _require_prime(q)
    if p == q:
        raise ValueError("p and q must be distinct primes")
    k = p * (3 * q - 2) - q
    return IntPolynomial(
        (
            -((p - 1) ** 6) * (q - 1) ** 3,
            0,
            (p - 1) ** 3 * (q - 1) * k,
            -2 * (p - 1) ** 2 * (q - 1),
            -(p - 1) * k,
            0,
            1,
        )
    )


def charpoly_formula_p2p(p: int) -> IntPolynomial:
    """Displayed quartic for Z_{p^2} x Z_p."""
    _require_prime(p)
    return (p - 1) ** 5 * p + (p - 1) ** 3 * p * X - 2 * (p - 1) ** 2 * p * X**2 - (p - 1) * X**3 + X**4
