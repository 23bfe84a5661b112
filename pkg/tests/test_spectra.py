import json
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from zdg.construct import compressed_graph, weighted_quotient_matrix, zero_divisor_graph
from zdg.linalg import charpoly
from zdg.polynomial import X, IntPolynomial
from zdg.rings import build_ring, fixture_ex34, modular_ring
from zdg.spectra import (
    charpoly_formula_p2p,
    charpoly_formula_p3,
    charpoly_formula_p4,
    charpoly_formula_ppq,
    closed_form_p3,
    closed_form_p4,
    eigenvalues_symmetric,
    format_value,
    group_values,
    lambda2_p4_from_factor,
    lambda2_p4_literal,
    nullity_p4_corrected,
    nullity_p4_literal,
    polynomial_roots,
    spectrum_of_ring,
)

x = sympy.Symbol("x")


def numpy_spectrum(ring):
    a = zero_divisor_graph(ring).adjacency.astype(float)
    return group_values(np.linalg.eigvalsh(a))


def sympy_quotient_charpoly(ring) -> IntPolynomial:
    q = weighted_quotient_matrix(compressed_graph(ring))
    p = sympy.Matrix(q.tolist()).charpoly(x)
    return IntPolynomial(tuple(int(c) for c in reversed(p.all_coeffs())))


def test_group_values_and_accessors():
    s = group_values([2.0, -1.0, 2.0 + 1e-9, 0.0, 1e-12, -1.0])
    assert [m for _, m in s.entries] == [2, 2, 2]
    assert s.dimension == 6
    assert s.multiplicity(2.0) == 2
    assert s.zero_multiplicity == 2
    assert s.nonzero.dimension == 4
    assert math.isclose(s.trace(), 2.0, abs_tol=1e-8)
    assert math.isclose(s.power_sum(2), 10.0, abs_tol=1e-7)
    assert len(s.expanded()) == 6


def test_spectrum_str_and_json():
    s = group_values([2, 2, 0, -1])
    assert str(s) == "{2^[2], 0^[1], -1^[1]}"
    obj = json.loads(s.to_json())
    assert obj == [{"value": "2", "multiplicity": 2}, {"value": "0", "multiplicity": 1}, {"value": "-1", "multiplicity": 1}]
    assert format_value(1 / 3) == "0.333333333333"
    assert format_value(-1e-15) == "0"


def test_matches_uses_relative_tolerance():
    a = group_values([1000.0, 1.0])
    b = group_values([1000.0 * (1 + 1e-11), 1.0])
    c = group_values([1000.1, 1.0])
    assert a.matches(b)
    assert not a.matches(c)
    assert not a.matches(group_values([1000.0, 1.0, 1.0]))


def test_eigenvalues_symmetric_rejects_bad_input():
    with pytest.raises(ValueError):
        eigenvalues_symmetric(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        eigenvalues_symmetric(np.array([[0, 1], [0, 0]]))


def test_polynomial_roots():
    s = polynomial_roots((X - 2) ** 2 * (X + 1) * X**3 * (X**2 - 3))
    assert s.multiplicity(2.0) == 2
    assert s.zero_multiplicity == 3
    assert s.multiplicity(math.sqrt(3)) == 1 and s.multiplicity(-math.sqrt(3)) == 1
    big = polynomial_roots((X - 5) * (X + 3) * (X - 7) * (X - 11))
    assert big.dimension == 4 and big.multiplicity(11.0) == 1
    with pytest.raises(ValueError):
        polynomial_roots(X**2 + 1)


def test_spectrum_z3_cubed_frozen():
    s = spectrum_of_ring(build_ring("Z3xZ3xZ3"))
    assert s.dimension == 18
    assert s.zero_multiplicity == 12
    assert s.multiplicity(2.0) == 2 and s.multiplicity(-4.0) == 2
    assert s.multiplicity(2 + 2 * math.sqrt(3)) == 1
    assert s.multiplicity(2 - 2 * math.sqrt(3)) == 1


def test_spectrum_of_fixture_ring_frozen():
    s = spectrum_of_ring(fixture_ex34())
    assert s.dimension == 26 and s.zero_multiplicity == 21
    assert s.multiplicity(6.0) == 1 and s.multiplicity(-6.0) == 2
    vals = [v for v, _ in s.entries]
    assert math.isclose(vals[0], 11.2111025509, rel_tol=1e-9)
    assert math.isclose(vals[-2], -3.2111025509, rel_tol=1e-9)


@pytest.mark.parametrize("spec", ["Z8", "Z12", "Z30", "Z64", "Z2xZ4", "Z3xZ3xZ3", "Z5xZ5", "Z2xZ2xZ3"])
def test_exact_route_matches_dense_eigensolver(spec):
    r = build_ring(spec)
    assert spectrum_of_ring(r).matches(numpy_spectrum(r), tol=1e-7)


def test_spectrum_of_field_raises():
    with pytest.raises(ValueError):
        spectrum_of_ring(modular_ring(7))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_closed_form_p3(p):
    r = build_ring(f"Z{p}xZ{p}xZ{p}")
    assert closed_form_p3(p).matches(numpy_spectrum(r), tol=1e-7)


@pytest.mark.parametrize("p", [2, 3])
def test_closed_form_p4_factored(p):
    r = build_ring("x".join([f"Z{p}"] * 4))
    assert closed_form_p4(p).matches(numpy_spectrum(r), tol=1e-7)
    assert not closed_form_p4(p, "literal").matches(numpy_spectrum(r), tol=1e-7)


def test_p4_literal_values_frozen():
    assert [nullity_p4_literal(p) for p in (2, 3, 5)] == [-2, 48, 352]
    assert [nullity_p4_corrected(p) for p in (2, 3, 5)] == [0, 50, 354]
    assert lambda2_p4_literal(3) == -7.0 and lambda2_p4_from_factor(3) == -4.0
    with pytest.raises(ValueError):
        closed_form_p4(3, "other")


def test_charpoly_formula_values_frozen():
    assert charpoly_formula_ppq(2, 3) == X**6 - 11 * X**4 - 4 * X**3 + 22 * X**2 - 8
    assert charpoly_formula_p3(2) == -((-(X**2) - X + 1) ** 2) * (-(X**2) + 2 * X + 1)
    with pytest.raises(ValueError):
        charpoly_formula_ppq(3, 3)
    with pytest.raises(ValueError):
        charpoly_formula_p3(4)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_charpoly_formulas_against_sympy(p):
    # formulas are stated up to sign; compare monic forms
    def monic(f):
        return f if f.coeffs[-1] > 0 else -f

    assert monic(charpoly_formula_p3(p)) == sympy_quotient_charpoly(build_ring("x".join([f"Z{p}"] * 3)))
    assert monic(charpoly_formula_p2p(p)) == sympy_quotient_charpoly(build_ring(f"Z{p * p}xZ{p}"))
    if p < 5:
        assert monic(charpoly_formula_p4(p)) == sympy_quotient_charpoly(build_ring("x".join([f"Z{p}"] * 4)))
    for q in (2, 3, 5, 7):
        if q != p:
            assert charpoly_formula_ppq(p, q) == sympy_quotient_charpoly(build_ring(f"Z{p}xZ{p}xZ{q}"))


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 90))
def test_spectrum_invariants(n):
    r = modular_ring(n)
    g = zero_divisor_graph(r)
    if g.order == 0:
        return
    s = spectrum_of_ring(r)
    a = g.adjacency.astype(np.int64)
    assert s.dimension == g.order
    # trace of A^k counts closed walks
    assert math.isclose(s.trace(), g.loop_count, abs_tol=1e-6)
    assert math.isclose(s.power_sum(2), int((a @ a).trace()), rel_tol=1e-9, abs_tol=1e-6)
    # eigenvalues of the quotient matrix are eigenvalues of A
    q = polynomial_roots(charpoly(weighted_quotient_matrix(compressed_graph(r))))
    for v, _ in q.nonzero.entries:
        assert s.multiplicity(v, tol=1e-6) >= 1
