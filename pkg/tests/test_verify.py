import json
import math

import numpy as np
import pytest
import sympy

from zdg.construct import extended_graph
from zdg.graphs import graph_from_edges, looped_vertex
from zdg.linalg import charpoly
from zdg.polynomial import X
from zdg.rings import modular_ring
from zdg.verify import (
    ERRATA,
    FAIL,
    PASS,
    SKIPPED,
    RingFacts,
    SuiteOptions,
    VerificationReport,
    aggregate,
    block_matrix,
    check_cor33,
    check_crt_cospectral,
    check_ex43,
    check_ex44,
    check_ex45_p2p,
    check_ex45_ppq,
    check_gamma_product,
    check_lemma51,
    check_lemma52,
    check_lemma53,
    check_quotient_divides,
    check_thm31,
    check_thm32,
    check_thm35,
    check_thm41,
    check_thm42,
    check_thm42_data,
    check_thm54,
    crt_pairs,
    default_corpus,
    eta_formula,
    exit_code,
    gamma_pairs,
    lemma51_instances,
    lemma52_instances,
    lemma53_instances,
    prime_power_corpus,
    run_suite,
    thm54_corpus,
    worst,
)


def test_counting_checks_on_z8xz4():
    f = RingFacts("Z8xZ4")
    r31 = check_thm31(f)
    assert (r31.formula, r31.computed, r31.verdict) == (23, 23, PASS)
    r32 = check_thm32(f)
    assert (r32.formula, r32.computed, r32.verdict) == (10, 10, PASS)
    r35 = check_thm35(f)
    assert (r35.formula, r35.computed, r35.verdict, r35.details) == (13, 13, PASS, "bound attained")


def test_counting_checks_on_fixture():
    f = RingFacts("fixture:ex34")
    assert check_thm31(f).computed == 26
    assert check_thm32(f).computed == 5
    r = check_cor33(f)
    assert r.verdict == PASS and r.computed == {"local": True}
    assert r.formula["classes_plus_two"] == 7 and r.formula["prime"]


def test_locality_criterion_non_converse_and_errata():
    r = check_cor33("Z2xZ2")
    assert r.verdict == PASS
    assert r.formula == {"classes_plus_two": 4, "prime": False, "prime_power": True}
    assert "not local" in r.details
    e = check_cor33("Z32")
    assert e.verdict == ERRATA and e.formula["classes_plus_two"] == 6


def test_prime_power_checks():
    r = check_thm41("Z8xZ4")
    assert r.verdict == PASS and r.computed == {"rank_adjacency": 10, "rank_quotient": 10, "compressed_vertices": 10}
    r = check_thm42("Z12")
    assert r.formula == {"nonzero": 4, "nullity": 3} == r.computed
    assert check_thm42_data([2, 3], [3, 1]).verdict == PASS
    with pytest.raises(ValueError):
        check_thm41("fixture:ex34")
    with pytest.raises(ValueError):
        check_thm42_data([4], [1])


def test_eta_formula_values():
    # Z_8: 3 vertices, rank 2; Z_2 x Z_2 x Z_2: 6 vertices, rank 6
    assert eta_formula([(2, 3)]) == 1
    assert eta_formula([(2, 1)] * 3) == 0
    assert eta_formula([(3, 1)] * 4) == 50


def test_quotient_divides():
    r = check_quotient_divides("Z8xZ4")
    assert r.verdict == PASS and "x^13" in r.details
    assert check_quotient_divides("fixture:ex34").verdict == PASS


def test_extended_charpoly_sign_witness_z4():
    r = check_thm54("Z4")
    assert r.verdict == ERRATA
    assert r.computed == X**4 - 2 * X**3 - 2 * X**2 + 2 * X
    assert r.formula["s=#V"] == r.computed != r.formula["s=#U"]
    adj = extended_graph(modular_ring(4)).adjacency
    assert sympy.Matrix(adj.tolist()).charpoly(sympy.Symbol("x")).all_coeffs() == [1, -2, -2, 2, 0]


def test_extended_charpoly_parity_rule():
    # #U(Z9) = 6, #V = 2: same parity, literal statement holds
    assert check_thm54("Z9").verdict == PASS
    assert check_thm54("Z7").verdict == SKIPPED


def test_point_identification_identity_examples():
    k2 = graph_from_edges(2, [(0, 1)])
    assert check_lemma51(k2, k2, 1, 0).verdict == PASS
    assert check_lemma51(looped_vertex(), looped_vertex(), 0, 0).verdict == SKIPPED
    one_loop = check_lemma51(looped_vertex(), k2, 0, 0)
    assert one_loop.verdict == PASS


def test_complete_product_identity_examples():
    k1 = graph_from_edges(1, [])
    star = graph_from_edges(5, [])
    r = check_lemma52(k1, star)
    assert r.verdict == PASS and r.computed == X**6 - 5 * X**4
    assert check_lemma52(looped_vertex(), k1).verdict == SKIPPED


def test_block_matrix_identity():
    m = block_matrix([[1]], [[0, 1], [1, 0]], [2], [1, 1], [3], [1, 0])
    assert m.tolist() == [[1, 2, 0], [3, 0, 1], [3, 1, 0]]
    assert check_lemma53([[1]], [[0, 1], [1, 0]], [2], [1, 1], [3], [1, 0]).verdict == PASS
    with pytest.raises(ValueError):
        block_matrix([[1]], [[0]], [1, 2], [1], [1], [1])


def test_random_instances_are_reproducible_and_bounded():
    a = list(lemma51_instances(20))
    b = list(lemma51_instances(20))
    assert all(np.array_equal(x[0].adjacency, y[0].adjacency) for x, y in zip(a, b))
    assert all(g.order <= 7 and h.order <= 7 for g, h, _, _ in lemma51_instances())
    assert all(g.loop_count == 0 and h.loop_count == 0 for g, h in lemma52_instances())
    sizes = [(A.shape[0], B.shape[0]) for A, B, *_ in lemma53_instances()]
    assert len(sizes) == 200 and all(m + n <= 7 for m, n in sizes)


def test_gamma_and_crt_checks():
    r = check_gamma_product("Z8", "Z4")
    assert r.verdict == PASS and r.details.startswith("23 vertices")
    assert check_gamma_product("fixture:ex34", "Z2").verdict == PASS
    assert check_crt_cospectral(4, 9).verdict == PASS
    with pytest.raises(ValueError):
        check_crt_cospectral(4, 6)


def test_worked_examples():
    assert all(check_ex43(p).verdict == PASS for p in (2, 3, 5))
    r = check_ex44(3)
    assert r.verdict == ERRATA
    assert r.details == "charpoly: pass, nullity: errata, lambda2: errata"
    assert r.computed["nullity"] == 50
    assert check_ex44(2).computed["nullity"] == 0
    assert all(check_ex45_p2p(p).verdict == PASS for p in (2, 3, 5))
    assert check_ex45_p2p(2).computed == X**4 - X**3 - 4 * X**2 + 2 * X + 2
    assert all(check_ex45_ppq(p, q).verdict == PASS for p, q in ((2, 3), (3, 2), (3, 5)))


def test_corpus_sizes():
    corpus = default_corpus()
    names = {str(d) for d in corpus}
    assert {"Z200", "Z8xZ4", "Z10xZ10xZ10", "fixture:ex34"} <= names
    # one-factor products reach the size cap too
    assert "Z1000" in names and "Z1001" not in names
    assert all(math.prod(f.n for f in d.factors) <= 1000 for d in corpus if d.is_modular)
    pp = prime_power_corpus()
    assert "Z1024xZ2" not in {str(d) for d in pp}
    assert {"Z2xZ2xZ2xZ2xZ2xZ2xZ2xZ2xZ2xZ2", "Z1999"} <= {str(d) for d in pp}
    assert len(thm54_corpus()) == 99 - 25 + 1
    assert len(crt_pairs()) == 496
    assert ("Z8", "Z4") in gamma_pairs()


def test_report_json_is_stable():
    r = VerificationReport("crt", "Z6 vs Z2xZ3", X**2 - 1, X**2 - 1, PASS)
    obj = json.loads(r.to_json())
    assert list(obj) == sorted(obj)
    assert obj["formula"] == "x^2 - 1"


def test_worst_aggregate_and_exit_codes():
    assert worst([PASS, ERRATA, SKIPPED]) == ERRATA
    assert worst([]) == SKIPPED
    reps = [
        VerificationReport("thm5.4", "Z4", None, None, ERRATA, "x"),
        VerificationReport("thm5.4", "Z9", None, None, PASS),
        VerificationReport("thm5.4", "Z7", None, None, SKIPPED),
    ]
    (agg,) = aggregate(reps)
    assert agg.verdict == ERRATA
    assert agg.computed == {PASS: 1, ERRATA: 1, FAIL: 0, SKIPPED: 1}
    assert "Z4" in agg.details
    assert exit_code(reps) == 0
    assert exit_code(reps, strict=True) == 1
    assert exit_code([VerificationReport("a", "b", None, None, FAIL)]) == 1


def test_run_suite_options():
    reps = run_suite("thm54", SuiteOptions(ring="Z8"))
    assert [(r.claim, r.subject) for r in reps] == [("thm5.4", "Z8")]
    single = run_suite("all", SuiteOptions(ring="fixture:ex34"))
    assert "thm4.1" not in {r.claim for r in single}
    assert {"thm3.1", "quotient", "thm5.4"} <= {r.claim for r in single}
    with pytest.raises(ValueError):
        run_suite("crt", SuiteOptions(ring="Z8"))
    with pytest.raises(ValueError):
        run_suite("nope")
    small = run_suite("thm31", SuiteOptions(max_size=30))
    assert all(r.verdict == PASS for r in small)
    assert len(small) == len(default_corpus(30))
