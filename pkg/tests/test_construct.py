import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zdg.construct import (
    DecoratedGraph,
    compressed_graph,
    decorate,
    extended_class_order,
    extended_compressed_matrix,
    extended_graph,
    gamma_product,
    kronecker_class_order,
    kronecker_extended_matrix,
    weighted_quotient_matrix,
    well_defined_on_classes,
    zero_divisor_graph,
)
from zdg.graphs import graph_from_edges, is_same_labeled_graph, key_relabel
from zdg.linalg import charpoly
from zdg.polynomial import X, divides
from zdg.rings import build_ring, euler_phi, ex34_index, fixture_ex34, modular_product, modular_ring

small_moduli = st.lists(st.integers(2, 10), min_size=1, max_size=2).filter(lambda m: math.prod(m) <= 60)


def brute_gamma(n):
    zd = [a for a in range(1, n) if any(a * b % n == 0 for b in range(1, n))]
    return zd, [[int(a * b % n == 0) for b in zd] for a in zd]


def test_gamma_z8():
    g = zero_divisor_graph(modular_ring(8))
    assert g.labels == ("2", "4", "6")
    assert g.adjacency.tolist() == [[0, 1, 0], [1, 1, 1], [0, 1, 0]]
    assert charpoly(g.adjacency) == X**3 - X**2 - 2 * X


@pytest.mark.parametrize("n", [4, 6, 9, 12, 16, 25, 30, 36])
def test_gamma_matches_brute_force(n):
    zd, adj = brute_gamma(n)
    g = zero_divisor_graph(modular_ring(n))
    assert [int(s) for s in g.labels] == zd
    assert g.adjacency.tolist() == adj


def test_gamma_of_field_is_empty():
    assert zero_divisor_graph(modular_ring(7)).order == 0


def test_gamma_z2xz2():
    g = zero_divisor_graph(build_ring("Z2xZ2"))
    assert g.labels == ("(0, 1)", "(1, 0)")
    assert g.adjacency.tolist() == [[0, 1], [1, 0]]


def test_extended_graph_of_z4():
    e = extended_graph(modular_ring(4))
    # 0 is looped and joined to everything, 2 is looped, units only touch 0
    assert e.labels == ("0", "1", "2", "3")
    assert e.adjacency.tolist() == [[1, 1, 1, 1], [1, 0, 0, 0], [1, 0, 1, 0], [1, 0, 0, 0]]


@settings(max_examples=30, deadline=None)
@given(small_moduli)
def test_extended_graph_is_zero_product_relation(moduli):
    r = modular_product(moduli)
    e = extended_graph(r)
    assert np.array_equal(e.adjacency, r.zero_product_mask.astype(np.uint8))
    assert e.order == r.size


@settings(max_examples=30, deadline=None)
@given(small_moduli, small_moduli)
def test_gamma_product_gives_product_ring(m1, m2):
    r1, r2 = modular_product(m1), modular_product(m2)
    prod = gamma_product(decorate(r1), decorate(r2))
    target = zero_divisor_graph(modular_product(m1 + m2))
    assert prod.graph.order == target.order
    assert is_same_labeled_graph(prod.graph, target, key_relabel(prod.graph, target))
    # key order is the product ring's element order
    assert prod.graph.keys == target.keys


def test_gamma_product_of_plain_graphs():
    # Z2 x Z2 from bare graphs: Gamma(Z2) is empty with one unit
    empty = graph_from_edges(0, [])
    d = DecoratedGraph(empty, 1)
    p = gamma_product(d, d)
    assert p.graph.order == 2
    assert p.graph.adjacency.tolist() == [[0, 1], [1, 0]]
    with pytest.raises(ValueError):
        DecoratedGraph(empty, 0)


@pytest.mark.parametrize("p,t", [(2, 3), (2, 4), (3, 3), (5, 2)])
def test_compressed_graph_of_prime_power(p, t):
    c = compressed_graph(modular_ring(p**t))
    assert c.order == t - 1
    assert c.sizes == tuple(euler_phi(p ** (t - k)) for k in range(1, t))
    # [p^i] ~ [p^j] iff i + j >= t
    expected = [[int(i + j >= t) for j in range(1, t)] for i in range(1, t)]
    assert c.adjacency.tolist() == expected


def test_compressed_graph_of_fixture_ring():
    r = fixture_ex34()
    c = compressed_graph(r)
    assert c.labels == ("[X^2]", "[Y]", "[X]", "[X+Y]", "[X+2Y]")
    assert c.sizes == (2, 6, 6, 6, 6)
    edges = {(c.labels[i], c.labels[j]) for i, j in c.as_graph().edges()}
    assert ("[Y]", "[X]") in edges
    assert ("[X+Y]", "[X+2Y]") in edges
    assert ("[X^2]", "[X^2]") in edges
    assert len(edges) == 7
    assert r.class_of[ex34_index(0, 2, 0, 0)] == r.class_of[ex34_index(0, 1, 0, 1)]


def test_compressed_dot_has_sizes():
    text = compressed_graph(modular_ring(8)).to_dot("G_E(Z8)")
    assert '"[2]" [size="2"];' in text and '"[4]" [size="1"];' in text


def test_weighted_quotient_z8():
    q = weighted_quotient_matrix(compressed_graph(modular_ring(8)))
    assert q.tolist() == [[0, 1], [2, 1]]


def test_weighted_quotient_z4xz2_in_fixed_class_order():
    r = build_ring("Z4xZ2")
    c = compressed_graph(r)
    order = [c.labels.index(s) for s in ("[(1, 0)]", "[(2, 1)]", "[(2, 0)]", "[(0, 1)]")]
    q = weighted_quotient_matrix(c)[np.ix_(order, order)]
    assert q.tolist() == [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 1, 1], [2, 0, 1, 0]]


@settings(max_examples=30, deadline=None)
@given(small_moduli)
def test_classes_well_defined_and_quotient_divides(moduli):
    r = modular_product(moduli)
    assert well_defined_on_classes(r)
    g = zero_divisor_graph(r)
    if g.order == 0:
        return
    chi_q = charpoly(weighted_quotient_matrix(compressed_graph(r)))
    assert divides(chi_q, charpoly(g.adjacency))


def test_extended_compressed_matrix_z8():
    m = extended_compressed_matrix(modular_ring(8))
    # order [1], [2], [4], [0]
    assert m.tolist() == [[0, 0, 0, 1], [0, 0, 1, 1], [0, 2, 1, 1], [4, 2, 1, 1]]
    assert [c.representative for c in extended_class_order(modular_ring(8))] == [1, 2, 4, 0]


@pytest.mark.parametrize("specs", [("Z4", "Z2"), ("Z8", "Z9"), ("Z2", "Z2", "Z3"), ("Z4", "fixture:ex34")])
def test_kronecker_route_equals_direct(specs):
    factors = [build_ring(s) for s in specs]
    prod = build_ring("x".join(specs))
    direct = extended_compressed_matrix(prod, kronecker_class_order(prod))
    assert np.array_equal(kronecker_extended_matrix(factors).astype(np.int64), direct)
