import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zdg.rings import (
    Fixture,
    Locality,
    Modular,
    RingAxiomError,
    RingSpecError,
    TableRing,
    annihilator,
    build_ring,
    euler_phi,
    factorize,
    ex34_index,
    fixture_ex34,
    is_local,
    load_table_ring,
    local_factors,
    modular_product,
    modular_ring,
    parse_ring_spec,
    prime_power_data,
    ring_from_tables,
    ring_to_table,
    save_table_ring,
    units,
    validate_ring,
    zero_divisors,
)


def brute_units(n):
    return {a for a in range(n) if any(a * b % n == 1 for b in range(n))}


def brute_zero_divisors(n):
    return {a for a in range(1, n) if any(a * b % n == 0 for b in range(1, n))}


# -- parsing ----------------------------------------------------------------


def test_parse_examples():
    assert parse_ring_spec("Z8xZ4").factors == (Modular(8), Modular(4))
    assert parse_ring_spec("Z7").factors == (Modular(7),)
    assert parse_ring_spec(" z8 X Z(2^3) ").factors == (Modular(8), Modular(8))
    assert parse_ring_spec("fixture:ex34xZ2").factors == (Fixture("ex34"), Modular(2))
    assert parse_ring_spec("table:rings/a.json x Z3").factors == (TableRing("rings/a.json"), Modular(3))
    assert str(parse_ring_spec("Z(3^2)xZ2")) == "Z9xZ2"


@pytest.mark.parametrize("bad", ["Z1", "Z0", "", "Q5", "Z8x", "Z8Z4", "fixture:nope", "Z(2^0)"])
def test_parse_errors(bad):
    with pytest.raises(RingSpecError):
        parse_ring_spec(bad)


def test_local_factor_split():
    d = parse_ring_spec("Z12xZ8")
    assert local_factors(d) == [Modular(4), Modular(3), Modular(8)]
    assert prime_power_data(d) == [(2, 2), (3, 1), (2, 3)]
    with pytest.raises(ValueError):
        prime_power_data(parse_ring_spec("fixture:ex34"))


# -- building ---------------------------------------------------------------


def test_build_sizes_and_locality():
    assert build_ring("Z8").size == 8
    assert build_ring("Z8").locality is Locality.LOCAL
    assert build_ring("Z12").locality is Locality.NONLOCAL
    r = build_ring("Z8xZ4")
    assert r.size == 32 and r.locality is Locality.NONLOCAL
    assert build_ring("fixture:ex34").size == 81


def test_mul_examples():
    z8 = modular_ring(8)
    assert z8.mul(2, 4) == 0
    r = build_ring("Z8xZ4")
    assert r.mul(r.index((2, 2)), r.index((4, 2))) == r.index((0, 0))
    ex = fixture_ex34()
    assert ex.mul(ex34_index(0, 1, 0, 0), ex34_index(0, 0, 1, 0)) == ex.zero


def test_product_order_is_row_major():
    r = build_ring("Z3xZ2")
    assert r.keys == ((0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1))
    assert r.labels[3] == "(1, 1)"


@pytest.mark.parametrize("n", [2, 7, 8, 9, 12, 30, 64, 97, 100])
def test_units_and_zero_divisors_of_zn(n):
    r = modular_ring(n)
    assert set(units(r)) == brute_units(n)
    assert set(zero_divisors(r)) == brute_zero_divisors(n)
    assert len(units(r)) == euler_phi(n)


def test_unit_examples():
    assert units(modular_ring(8)) == (1, 3, 5, 7)
    assert len(units(modular_ring(7))) == 6
    assert len(units(fixture_ex34())) == 54
    assert zero_divisors(modular_ring(8)) == (2, 4, 6)
    assert len(zero_divisors(build_ring("Z8xZ4"))) == 23
    assert len(zero_divisors(fixture_ex34())) == 26


def test_annihilator_examples():
    z8 = modular_ring(8)
    assert annihilator(z8, 4) == (0, 2, 4, 6)
    assert annihilator(z8, 2) == (0, 4)
    assert annihilator(z8, 0) == tuple(range(8))
    ex = fixture_ex34()
    ann = annihilator(ex, ex34_index(0, 1, 0, 0))
    assert sorted(ann) == sorted(ex34_index(0, 0, c, d) for c in range(3) for d in range(3))


def test_euler_phi():
    assert (euler_phi(8), euler_phi(9), euler_phi(1)) == (4, 6, 1)
    for n in range(1, 200):
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_ann_classes_z8():
    r = modular_ring(8)
    zd = r.zero_divisor_classes
    assert [c.members for c in zd] == [(2, 6), (4,)]
    assert r.ann_classes[r.class_of[0]].members == (0,)
    assert set(r.ann_classes[r.class_of[1]].members) == set(units(r))


@pytest.mark.parametrize("p,t", [(2, 2), (2, 5), (3, 3), (5, 2), (7, 3)])
def test_prime_power_classes(p, t):
    r = modular_ring(p**t)
    zd = r.zero_divisor_classes
    assert len(zd) == t - 1
    by_rep = {c.representative: c.size for c in zd}
    assert by_rep == {p**k: euler_phi(p ** (t - k)) for k in range(1, t)}


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 12), min_size=1, max_size=3).filter(lambda m: math.prod(m) <= 400))
def test_partition_invariants(moduli):
    r = modular_product(moduli)
    classes = r.ann_classes
    members = sorted(m for c in classes for m in c.members)
    assert members == list(range(r.size))
    for c in classes:
        for m in c.members:
            assert np.array_equal(r.zero_product_mask[m], r.zero_product_mask[c.representative])
    assert sum(c.size for c in r.zero_divisor_classes) == len(r.zero_divisors)
    everything = {r.zero} | set(r.units) | set(r.zero_divisors)
    assert len(everything) == r.size == 1 + len(r.units) + len(r.zero_divisors)
    assert len(r.units) == math.prod(euler_phi(n) for n in moduli)
    # units of the product are tuples of units
    unit_sets = [set(units(modular_ring(n))) for n in moduli]
    for u in r.units:
        assert all(k in s for k, s in zip(r.keys[u], unit_sets))


# -- fixture ----------------------------------------------------------------


def test_fixture_structure_constants():
    ex = fixture_ex34()
    X_, XX = ex34_index(0, 1, 0, 0), ex34_index(0, 0, 0, 1)
    assert ex.mul(X_, X_) == XX
    assert ex.mul(XX, XX) == ex.zero
    assert ex.mul(ex34_index(0, 1, 1, 0), ex34_index(0, 1, -1, 0)) == ex.zero
    assert ex.mul(ex34_index(0, 0, 1, 0), ex34_index(0, 0, 1, 0)) == XX
    assert ex.one == ex34_index(1, 0, 0, 0)
    assert ex.labels[ex34_index(1, 1, 2, 1)] == "1+X+2Y+X^2"


def test_fixture_passes_axioms_and_is_local():
    ex = fixture_ex34()
    validate_ring(ex)
    assert is_local(ex) is True


def test_fixture_class_sizes():
    sizes = sorted(c.size for c in fixture_ex34().zero_divisor_classes)
    assert sizes == [2, 6, 6, 6, 6]


# -- locality ---------------------------------------------------------------


def test_is_local_examples():
    assert is_local(modular_ring(9)) is True
    assert is_local(build_ring("Z2xZ2")) is False
    table = ring_to_table(fixture_ex34())
    del table["add"]
    no_add = ring_from_tables(table["labels"], table["mul"], table["zero"], table["one"], validate=False)
    assert is_local(no_add) is None


def test_locality_by_addition_closure_matches_prime_power():
    for n in range(2, 60):
        t = ring_to_table(modular_ring(n, with_addition=True))
        r = ring_from_tables(t["labels"], t["mul"], t["zero"], t["one"], t["add"], validate=False)
        assert r.locality is Locality.UNKNOWN
        assert is_local(r) == (len(factorize(n)) == 1)


# -- tables -----------------------------------------------------------------


def test_table_roundtrip(tmp_path):
    ex = fixture_ex34()
    path = tmp_path / "ex34.json"
    save_table_ring(ex, path)
    loaded = load_table_ring(path)
    assert loaded.size == 81
    assert np.array_equal(loaded.mul_table, ex.mul_table)
    assert is_local(loaded) is True


def test_table_z2xz2_matches_product(tmp_path):
    from zdg.construct import zero_divisor_graph
    from zdg.linalg import charpoly

    prod = build_ring("Z2xZ2", with_addition=True)
    path = tmp_path / "v4.json"
    path.write_text(json.dumps(ring_to_table(prod)))
    r = build_ring(f"table:{path}")
    assert charpoly(zero_divisor_graph(r).adjacency) == charpoly(zero_divisor_graph(prod).adjacency)


def test_table_noncommutative_rejected(tmp_path):
    t = ring_to_table(modular_ring(4))
    t["mul"][1][2] = 3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(t))
    with pytest.raises(RingAxiomError, match=r"\(1, 2\)|\(2, 1\)"):
        load_table_ring(path)


def test_table_nonassociative_names_triple():
    # commutative with identity and absorbing zero, but (a*a)*b != a*(a*b)
    labels = ["0", "1", "a", "b"]
    mul = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 0], [0, 3, 0, 3]]
    with pytest.raises(RingAxiomError, match="associative at"):
        ring_from_tables(labels, mul, 0, 1)


def test_table_malformed(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"size": 2, "labels": ["0", "1"]}')
    with pytest.raises(RingAxiomError, match="lacks fields"):
        load_table_ring(path)
    path.write_text("not json")
    with pytest.raises(RingAxiomError):
        load_table_ring(path)


def test_random_validation_above_exhaustive_limit():
    r = modular_ring(600, with_addition=True)
    validate_ring(r)
    broken = r.mul_table.copy()
    # sampling cannot see a single bad entry, so corrupt a whole row
    x = np.arange(2, 600)
    broken[5, x] = broken[x, 5] = (5 * x + 1) % 600
    bad = ring_from_tables([str(i) for i in range(600)], broken, 0, 1, validate=False)
    with pytest.raises(RingAxiomError, match="associative"):
        validate_ring(bad)
