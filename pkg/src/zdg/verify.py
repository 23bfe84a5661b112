"""Checkers that compare closed-form counts and identities with exact computation.

Every checker returns a ``VerificationReport``. Formula values are evaluated
from the factor data alone; computed values come from the full ring or
graph. Verdicts:

``pass``     formula and computation agree
``fail``     they disagree
``errata``   the claim as literally stated fails, a documented corrected
             form passes (both are recorded in the report)
``skipped``  a precondition does not hold; ``details`` says which
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .construct import (
    compressed_graph,
    decorate,
    extended_graph,
    gamma_product,
    weighted_quotient_matrix,
    zero_divisor_graph,
)
from .graphs import (
    LoopGraph,
    complement,
    complete_product,
    delete_vertices,
    generalized_complement,
    graph_from_edges,
    key_relabel,
    point_identification,
)
from .linalg import charpoly, rank
from .polynomial import X, IntPolynomial, divides
from .rings import (
    AXIOM_CHECK_SEED,
    FiniteRing,
    Fixture,
    Modular,
    RingDescriptor,
    _is_prime_power,
    build_ring,
    is_local,
    is_prime,
    local_factors,
    modular_ring,
    parse_ring_spec,
    prime_power_data,
    product_ring,
)
from .spectra import (
    VALUE_RTOL,
    charpoly_formula_p2p,
    charpoly_formula_p4,
    charpoly_formula_p3,
    charpoly_formula_ppq,
    closed_form_p3,
    lambda2_p4_from_factor,
    lambda2_p4_literal,
    nullity_p4_corrected,
    nullity_p4_literal,
    spectrum_of_ring,
)

PASS, FAIL, ERRATA, SKIPPED = "pass", "fail", "errata", "skipped"
_SEVERITY = {SKIPPED: 0, PASS: 1, ERRATA: 2, FAIL: 3}

RANDOM_INSTANCES = 200
VERIFY_SEED = AXIOM_CHECK_SEED


@dataclass
class VerificationReport:
    claim: str
    subject: str
    formula: object
    computed: object
    verdict: str
    details: str = ""

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "subject": self.subject,
            "formula": _jsonable(self.formula),
            "computed": _jsonable(self.computed),
            "verdict": self.verdict,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def _jsonable(v):
    if isinstance(v, IntPolynomial):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def worst(verdicts: Iterable[str]) -> str:
    vs = list(verdicts)
    if not vs:
        return SKIPPED
    return max(vs, key=_SEVERITY.__getitem__)


def _errata_verdict(literal_ok: bool, corrected_ok: bool) -> str:
    if literal_ok:
        return PASS
    return ERRATA if corrected_ok else FAIL


# ---------------------------------------------------------------------------
# Per-ring facts, computed once and shared between checkers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _local_ring(spec: str) -> FiniteRing:
    return build_ring(spec, with_addition=True)


class RingFacts:
    """Lazily computed exact data about one ring, keyed by its descriptor."""

    def __init__(self, spec: RingDescriptor | str, ring: FiniteRing | None = None):
        self.descriptor = parse_ring_spec(spec) if isinstance(spec, str) else spec
        self.subject = str(self.descriptor)
        self._ring = ring

    @cached_property
    def ring(self) -> FiniteRing:
        return self._ring if self._ring is not None else build_ring(self.descriptor)

    @cached_property
    def gamma(self) -> LoopGraph:
        return zero_divisor_graph(self.ring)

    @cached_property
    def vertex_count(self) -> int:
        return len(self.ring.zero_divisors)

    @cached_property
    def class_count(self) -> int:
        return len(self.ring.zero_divisor_classes)

    @cached_property
    def quotient(self) -> np.ndarray:
        return weighted_quotient_matrix(compressed_graph(self.ring))

    @cached_property
    def quotient_charpoly(self) -> IntPolynomial:
        return charpoly(self.quotient)

    @cached_property
    def gamma_charpoly(self) -> IntPolynomial:
        return charpoly(self.gamma.adjacency)

    @cached_property
    def gamma_rank(self) -> int:
        return rank(self.gamma.adjacency)

    @cached_property
    def nullity(self) -> int:
        return self.vertex_count - self.gamma_rank

    @cached_property
    def local_rings(self) -> list[FiniteRing] | None:
        """Local factor rings, or None if some factor is not known to be local."""
        out = []
        for f in local_factors(self.descriptor):
            r = _local_ring(str(f))
            if is_local(r) is not True:
                return None
            out.append(r)
        return out


def _facts(x) -> RingFacts:
    return x if isinstance(x, RingFacts) else RingFacts(x)


def _needs_local(claim: str, facts: RingFacts) -> VerificationReport | None:
    if facts.local_rings is None:
        return VerificationReport(claim, facts.subject, None, None, SKIPPED, "a factor is not known to be local")
    return None


def _local_counts(facts: RingFacts):
    rings = facts.local_rings
    sizes = [r.size for r in rings]
    unit_counts = [len(r.units) for r in rings]
    class_counts = [len(r.zero_divisor_classes) for r in rings]
    return sizes, unit_counts, class_counts


# ---------------------------------------------------------------------------
# Counting claims
# ---------------------------------------------------------------------------


def check_thm31(spec) -> VerificationReport:
    """Vertex count: prod #R_i - prod #U(R_i) - 1 over local factors."""
    facts = _facts(spec)
    skip = _needs_local("thm3.1", facts)
    if skip:
        return skip
    sizes, unit_counts, _ = _local_counts(facts)
    formula = math.prod(sizes) - math.prod(unit_counts) - 1
    computed = facts.vertex_count
    return VerificationReport("thm3.1", facts.subject, formula, computed, _verdict(formula == computed))


def check_thm32(spec) -> VerificationReport:
    """Compressed vertex count: prod (#V(G_E(R_i)) + 2) - 2."""
    facts = _facts(spec)
    skip = _needs_local("thm3.2", facts)
    if skip:
        return skip
    _, _, class_counts = _local_counts(facts)
    formula = math.prod(k + 2 for k in class_counts) - 2
    computed = facts.class_count
    return VerificationReport("thm3.2", facts.subject, formula, computed, _verdict(formula == computed))


def check_cor33(spec) -> VerificationReport:
    """#V(G_E)+2 prime forces locality; locality forces #V(G_E)+2 to be a prime power.

    The second implication is evaluated as stated and, when it fails, against
    the corrected form "local implies #R is a prime power".
    """
    facts = _facts(spec)
    k = facts.class_count + 2
    local = is_local(facts.ring)
    notes = []
    first_ok = True
    if is_prime(k):
        first_ok = local is not False
        notes.append(f"{k} is prime, ring {'is local' if local else 'locality ' + str(local)}")
    literal_ok = corrected_ok = True
    if local is True:
        literal_ok = _is_prime_power(k)
        corrected_ok = _is_prime_power(facts.ring.size)
        if not literal_ok:
            notes.append(f"local but {k} is not a prime power; #R = {facts.ring.size}")
    elif local is False and _is_prime_power(k):
        notes.append(f"{k} is a prime power but the ring is not local (converse not asserted)")
    verdict = FAIL if not first_ok else _errata_verdict(literal_ok, corrected_ok)
    formula = {"classes_plus_two": k, "prime": is_prime(k), "prime_power": _is_prime_power(k)}
    return VerificationReport("cor3.3", facts.subject, formula, {"local": local}, verdict, "; ".join(notes))


def check_thm35(spec) -> VerificationReport:
    """Nullity lower bound prod #R_i - prod #U(R_i) - prod (#V(G_E(R_i)) + 2) + 1."""
    facts = _facts(spec)
    skip = _needs_local("thm3.5", facts)
    if skip:
        return skip
    sizes, unit_counts, class_counts = _local_counts(facts)
    bound = math.prod(sizes) - math.prod(unit_counts) - math.prod(k + 2 for k in class_counts) + 1
    eta = facts.nullity
    details = "bound attained" if eta == bound else ""
    return VerificationReport("thm3.5", facts.subject, bound, eta, _verdict(eta >= bound), details)


def _require_modular(facts: RingFacts) -> None:
    if not facts.descriptor.is_modular:
        raise ValueError(f"{facts.subject}: every factor must be Z_n")


def check_thm41(spec) -> VerificationReport:
    """rank A(Gamma) = rank of the weighted quotient = #V(G_E)."""
    facts = _facts(spec)
    _require_modular(facts)
    values = {
        "rank_adjacency": facts.gamma_rank,
        "rank_quotient": rank(facts.quotient) if facts.class_count else 0,
        "compressed_vertices": facts.class_count,
    }
    ok = len(set(values.values())) == 1
    return VerificationReport("thm4.1", facts.subject, facts.class_count, values, _verdict(ok))


def eta_formula(pt: Sequence[tuple[int, int]]) -> int:
    """Nullity of Gamma(Z_{p1^t1} x ... x Z_{pr^tr}) from the prime data."""
    lead = math.prod(p ** (t - 1) for p, t in pt)
    return lead * (math.prod(p for p, _ in pt) - math.prod(p - 1 for p, _ in pt)) - math.prod(t + 1 for _, t in pt) + 1


def nonzero_count_formula(pt: Sequence[tuple[int, int]]) -> int:
    return math.prod(t + 1 for _, t in pt) - 2


def check_thm42(spec) -> VerificationReport:
    """Number of nonzero eigenvalues and the nullity from exponents and primes."""
    facts = _facts(spec)
    _require_modular(facts)
    pt = prime_power_data(facts.descriptor)
    formula = {"nonzero": nonzero_count_formula(pt), "nullity": eta_formula(pt)}
    computed = {"nonzero": facts.gamma_rank, "nullity": facts.nullity}
    return VerificationReport("thm4.2", facts.subject, formula, computed, _verdict(formula == computed))


def check_thm42_data(primes: Sequence[int], exponents: Sequence[int]) -> VerificationReport:
    if len(primes) != len(exponents) or not primes:
        raise ValueError("need one exponent per prime")
    for p, t in zip(primes, exponents):
        if not is_prime(p) or t < 1:
            raise ValueError(f"bad prime power {p}^{t}")
    return check_thm42(RingDescriptor(tuple(Modular(p**t) for p, t in zip(primes, exponents))))


def check_quotient_divides(spec) -> VerificationReport:
    """chi of the weighted quotient divides chi(A(Gamma)); for Z_n products chi(A) = x^eta chi(quotient)."""
    facts = _facts(spec)
    big, small = facts.gamma_charpoly, facts.quotient_charpoly
    ok = divides(small, big)
    full = facts.class_count == 0 or rank(facts.quotient) == facts.class_count
    details = f"quotient full rank: {full}"
    if facts.descriptor.is_modular:
        exact = big == IntPolynomial.monomial(facts.nullity) * small
        ok = ok and exact
        details += f"; chi(A) = x^{facts.nullity} * chi(quotient): {exact}"
    return VerificationReport("quotient", facts.subject, small, big, _verdict(ok), details)


# ---------------------------------------------------------------------------
# Graph operation identities
# ---------------------------------------------------------------------------


def _chi(g: LoopGraph) -> IntPolynomial:
    return charpoly(g.adjacency)


def check_lemma51(g: LoopGraph, h: LoopGraph, v: int, w: int, subject: str = "") -> VerificationReport:
    """Point identification: chi_g chi_{h-w} + chi_{g-v} chi_h - x chi_{g-v} chi_{h-w}."""
    subject = subject or f"G({g.order})@{v} . H({h.order})@{w}"
    if g.has_loop(v) and h.has_loop(w):
        return VerificationReport("lemma5.1", subject, None, None, SKIPPED, "both identified vertices carry loops")
    gv, hw = delete_vertices(g, [v]), delete_vertices(h, [w])
    formula = _chi(g) * _chi(hw) + _chi(gv) * _chi(h) - X * _chi(gv) * _chi(hw)
    computed = _chi(point_identification(g, h, v, w))
    return VerificationReport("lemma5.1", subject, formula, computed, _verdict(formula == computed))


def check_lemma52(g: LoopGraph, h: LoopGraph, subject: str = "") -> VerificationReport:
    """Complete product through ordinary complements evaluated at -x-1."""
    subject = subject or f"G({g.order}) nabla H({h.order})"
    if g.loop_count or h.loop_count:
        return VerificationReport("lemma5.2", subject, None, None, SKIPPED, "inputs must be loop-free")
    n1, n2 = g.order, h.order
    shift = -X - 1
    cg = _chi(complement(g)).compose(shift)
    ch = _chi(complement(h)).compose(shift)
    formula = (-1) ** n2 * _chi(g) * ch + (-1) ** n1 * _chi(h) * cg - (-1) ** (n1 + n2) * cg * ch
    computed = _chi(complete_product(g, h))
    return VerificationReport("lemma5.2", subject, formula, computed, _verdict(formula == computed))


def block_matrix(A, B, a, b, c, d) -> np.ndarray:
    """[[A, a d^T], [b c^T, B]] after dimension checks."""
    A, B = np.asarray(A, dtype=object), np.asarray(B, dtype=object)
    a, b, c, d = (np.asarray(v, dtype=object).reshape(-1) for v in (a, b, c, d))
    m, n = A.shape[0], B.shape[0]
    if A.shape != (m, m) or B.shape != (n, n):
        raise ValueError("A and B must be square")
    if len(a) != m or len(c) != m or len(b) != n or len(d) != n:
        raise ValueError(f"vectors a, c need length {m} and b, d length {n}")
    top = np.concatenate([A, np.outer(a, d)], axis=1)
    bottom = np.concatenate([np.outer(b, c), B], axis=1)
    return np.concatenate([top, bottom], axis=0)


def check_lemma53(A, B, a, b, c, d, subject: str = "") -> VerificationReport:
    """chi_M via chi of A, B and the rank-one perturbations ac^T - A, bd^T - B."""
    M = block_matrix(A, B, a, b, c, d)
    A, B = np.asarray(A, dtype=object), np.asarray(B, dtype=object)
    a, b, c, d = (np.asarray(v, dtype=object).reshape(-1) for v in (a, b, c, d))
    m, n = A.shape[0], B.shape[0]
    subject = subject or f"m={m}, n={n}"
    At = np.outer(a, c) - A
    Bt = np.outer(b, d) - B
    cA, cB = charpoly(A), charpoly(B)
    cAt, cBt = charpoly(At).compose_negate(), charpoly(Bt).compose_negate()
    formula = (-1) ** m * cAt * cB + (-1) ** n * cA * cBt - (-1) ** (m + n) * cAt * cBt
    computed = charpoly(M)
    return VerificationReport("lemma5.3", subject, formula, computed, _verdict(formula == computed))


def thm54_rhs(gamma: LoopGraph, unit_count: int, sign_exponent: int) -> IntPolynomial:
    """x^(n-1) ((-1)^(s+1) chi_{J-A}(-x) x + chi_Gamma(x) (x^2 - n))."""
    n = unit_count
    gc = _chi(generalized_complement(gamma)).compose_negate()
    return X ** (n - 1) * ((-1) ** (sign_exponent + 1) * gc * X + _chi(gamma) * (X**2 - n))


def check_thm54(spec) -> VerificationReport:
    """Extended-graph charpoly against the closed form, for both sign exponents.

    ``s = #U(R)`` is the literal statement; ``s = #V(Gamma(R))`` is what the
    block-matrix identity actually produces for the Gamma side.
    """
    facts = _facts(spec)
    ring = facts.ring
    if facts.vertex_count == 0:
        return VerificationReport("thm5.4", facts.subject, None, None, SKIPPED, "no zero-divisors")
    n = len(ring.units)
    direct = _chi(extended_graph(ring))
    literal = thm54_rhs(facts.gamma, n, n)
    corrected = thm54_rhs(facts.gamma, n, facts.vertex_count)
    lit_ok, cor_ok = literal == direct, corrected == direct
    details = f"#U = {n}, #V = {facts.vertex_count}; s=#U {'matches' if lit_ok else 'differs'}, s=#V {'matches' if cor_ok else 'differs'}"
    formula = {"s=#U": literal, "s=#V": corrected}
    return VerificationReport("thm5.4", facts.subject, formula, direct, _errata_verdict(lit_ok, cor_ok), details)


def check_gamma_product(r1, r2) -> VerificationReport:
    """Product graph of the factors' decorated graphs equals Gamma of the product ring."""
    d1 = parse_ring_spec(r1) if isinstance(r1, str) else r1
    d2 = parse_ring_spec(r2) if isinstance(r2, str) else r2
    a, b = build_ring(d1), build_ring(d2)
    subject = f"({d1}) x ({d2})"
    prod = gamma_product(decorate(a), decorate(b)).graph
    direct = zero_divisor_graph(product_ring([a, b]))
    if prod.order != direct.order:
        return VerificationReport("gamma-product", subject, prod.order, direct.order, FAIL, "vertex counts differ")
    same_order = prod.keys == direct.keys
    if same_order:
        ok = bool(np.array_equal(prod.adjacency, direct.adjacency))
    else:
        perm = key_relabel(prod, direct)
        ok = bool(np.array_equal(prod.adjacency, direct.adjacency[np.ix_(perm, perm)]))
    details = f"{prod.order} vertices" + ("" if same_order else ", matched by key")
    return VerificationReport("gamma-product", subject, prod.edge_count, direct.edge_count, _verdict(ok), details)


def check_crt_cospectral(m: int, n: int) -> VerificationReport:
    """chi(Gamma(Z_mn)) = chi(Gamma(Z_m x Z_n)) for coprime m, n."""
    if m < 2 or n < 2 or math.gcd(m, n) != 1:
        raise ValueError(f"need coprime m, n >= 2, got {m}, {n}")
    left = _chi(zero_divisor_graph(modular_ring(m * n)))
    right = _chi(zero_divisor_graph(product_ring([modular_ring(m), modular_ring(n)])))
    return VerificationReport("crt", f"Z{m * n} vs Z{m}xZ{n}", left, right, _verdict(left == right))


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------


def check_ex43(p: int, tol: float = VALUE_RTOL) -> VerificationReport:
    """Spectrum of Gamma(Z_p^3) against the closed-form eigenvalues."""
    facts = RingFacts(RingDescriptor((Modular(p),) * 3))
    computed = spectrum_of_ring(facts.ring)
    formula = closed_form_p3(p)
    spec_ok = computed.matches(formula, tol)
    poly_ok = facts.quotient_charpoly == charpoly_formula_p3(p)
    details = f"spectrum {'matches' if spec_ok else 'differs'}; quotient charpoly {'matches' if poly_ok else 'differs'}"
    return VerificationReport("ex4.3", facts.subject, str(formula), str(computed), _verdict(spec_ok and poly_ok), details)


def check_ex44(p: int) -> VerificationReport:
    """Z_p^4: factored charpoly, nullity and the second eigenvalue."""
    facts = RingFacts(RingDescriptor((Modular(p),) * 4))
    chi = facts.quotient_charpoly
    poly_ok = chi == charpoly_formula_p4(p)
    eta = facts.nullity
    lit_eta, cor_eta = nullity_p4_literal(p), nullity_p4_corrected(p)
    lit_l2, cor_l2 = int(lambda2_p4_literal(p)), int(lambda2_p4_from_factor(p))
    items = {
        "charpoly": _verdict(poly_ok),
        "nullity": _errata_verdict(lit_eta == eta, cor_eta == eta),
        "lambda2": _errata_verdict(chi(lit_l2) == 0, chi(cor_l2) == 0),
    }
    formula = {
        "nullity_literal": lit_eta,
        "nullity_corrected": cor_eta,
        "lambda2_literal": lit_l2,
        "lambda2_corrected": cor_l2,
    }
    computed = {"nullity": eta, "lambda2_is_root": {str(lit_l2): chi(lit_l2) == 0, str(cor_l2): chi(cor_l2) == 0}}
    details = ", ".join(f"{k}: {v}" for k, v in items.items())
    return VerificationReport("ex4.4", facts.subject, formula, computed, worst(items.values()), details)


def check_ex45_p2p(p: int) -> VerificationReport:
    facts = RingFacts(RingDescriptor((Modular(p * p), Modular(p))))
    formula = charpoly_formula_p2p(p)
    computed = facts.quotient_charpoly
    return VerificationReport("ex4.5", facts.subject, formula, computed, _verdict(formula == computed))


def check_ex45_ppq(p: int, q: int) -> VerificationReport:
    facts = RingFacts(RingDescriptor((Modular(p), Modular(p), Modular(q))))
    formula = charpoly_formula_ppq(p, q)
    computed = facts.quotient_charpoly
    return VerificationReport("ex4.5", facts.subject, formula, computed, _verdict(formula == computed))


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_simple_graph(rng: np.random.Generator, n: int, density: float | None = None) -> LoopGraph:
    density = rng.uniform(0.2, 0.8) if density is None else density
    upper = np.triu(rng.random((n, n)) < density, k=1)
    return LoopGraph(tuple(str(i) for i in range(n)), (upper | upper.T).astype(np.uint8))


def _with_random_loops(rng: np.random.Generator, g: LoopGraph) -> LoopGraph:
    a = g.adjacency.copy()
    np.fill_diagonal(a, rng.random(g.order) < 0.4)
    return LoopGraph(g.labels, a)


def lemma51_instances(count: int = RANDOM_INSTANCES, seed: int = VERIFY_SEED, max_order: int = 7):
    """Pairs of graphs of at most max_order vertices; every third instance puts loops on one side."""
    rng = np.random.default_rng([seed, 51])
    for i in range(count):
        g = random_simple_graph(rng, int(rng.integers(1, max_order + 1)))
        h = random_simple_graph(rng, int(rng.integers(1, max_order + 1)))
        if i % 3 == 2:
            g = _with_random_loops(rng, g)
        yield g, h, int(rng.integers(g.order)), int(rng.integers(h.order))


def lemma52_instances(count: int = RANDOM_INSTANCES, seed: int = VERIFY_SEED, max_order: int = 6):
    rng = np.random.default_rng([seed, 52])
    for _ in range(count):
        yield (
            random_simple_graph(rng, int(rng.integers(1, max_order + 1))),
            random_simple_graph(rng, int(rng.integers(1, max_order + 1))),
        )


def lemma53_instances(count: int = RANDOM_INSTANCES, seed: int = VERIFY_SEED, max_block: int = 5, max_total: int = 7):
    rng = np.random.default_rng([seed, 53])
    produced = 0
    while produced < count:
        m = int(rng.integers(1, max_block + 1))
        n = int(rng.integers(1, max_block + 1))
        if m + n > max_total:
            continue
        ints = lambda *shape: rng.integers(-3, 4, size=shape)
        yield ints(m, m), ints(n, n), ints(m), ints(n), ints(m), ints(n)
        produced += 1


def _named_examples_51():
    k2 = graph_from_edges(2, [(0, 1)])
    yield k2, k2, 1, 0, "K2 . K2 (path P3)"
    r = modular_ring(4)
    from .construct import looped_zero_graph, unit_graph, zero_graph

    left = complete_product(zero_divisor_graph(r), zero_graph(r))
    right = complete_product(looped_zero_graph(r), unit_graph(r))
    yield left, right, left.order - 1, 0, "(Gamma(Z4) nabla Z) . (U(Z4) nabla Z_L)"


def _named_examples_52():
    k1 = graph_from_edges(1, [])
    yield k1, k1, "K1 nabla K1"
    yield k1, graph_from_edges(5, []), "K1 nabla 5 isolated (star)"


def _named_examples_53():
    n = 4
    yield [[1]], np.zeros((n, n), dtype=int), [1], [1] * n, [1], [1] * n, "A=(1), B=0_4"
    g8 = zero_divisor_graph(modular_ring(8)).adjacency.astype(int)
    k = g8.shape[0]
    yield [[0]], g8, [1], [1] * k, [1], [1] * k, "A=(0), B=A(Gamma(Z8))"


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------

DEFAULT_MAX_SIZE = 1000
PRIME_POWER_MAX_SIZE = 2000
SINGLE_MODULUS_MAX = 200
THM54_MODULUS_MAX = 100
CRT_MODULUS_MAX = 30
GAMMA_PAIR_PRODUCT_MAX = 120


def _nondecreasing_tuples(max_product: int, max_len: int, start: int = 2):
    def rec(prefix, lo, remaining):
        if prefix:
            yield tuple(prefix)
        if len(prefix) == max_len:
            return
        for n in range(lo, remaining + 1):
            yield from rec(prefix + [n], n, remaining // n)

    yield from rec([], start, max_product)


def default_corpus(max_size: int = DEFAULT_MAX_SIZE, max_factors: int = 3) -> list[RingDescriptor]:
    """Every Z_n (n up to 200), every product of at most 3 Z_n factors of total size at most max_size, Z8xZ4 and ex34."""
    seen = set()
    out = []
    for n in range(2, min(SINGLE_MODULUS_MAX, max_size) + 1):
        seen.add((n,))
        out.append(RingDescriptor((Modular(n),)))
    for t in _nondecreasing_tuples(max_size, max_factors):
        if t not in seen:
            seen.add(t)
            out.append(RingDescriptor(tuple(Modular(n) for n in t)))
    # named orderings that the sorted enumeration only has in another order
    for t in ((8, 4),):
        if math.prod(t) <= max_size and t not in seen:
            seen.add(t)
            out.append(RingDescriptor(tuple(Modular(n) for n in t)))
    if max_size >= 81:
        out.append(RingDescriptor((Fixture("ex34"),)))
    return out


def _prime_powers(limit: int) -> list[int]:
    return [q for q in range(2, limit + 1) if _is_prime_power(q)]


def prime_power_corpus(max_size: int = PRIME_POWER_MAX_SIZE) -> list[RingDescriptor]:
    """All multisets of prime-power moduli with product at most max_size (each Z_n product up to isomorphism)."""
    qs = _prime_powers(max_size)
    out = []

    def rec(prefix, i, remaining):
        if prefix:
            out.append(RingDescriptor(tuple(Modular(q) for q in prefix)))
        for j in range(i, len(qs)):
            q = qs[j]
            if q > remaining:
                break
            rec(prefix + [q], j, remaining // q)

    rec([], 0, max_size)
    return out


def thm54_corpus(max_modulus: int = THM54_MODULUS_MAX) -> list[RingDescriptor]:
    out = [RingDescriptor((Modular(n),)) for n in range(2, max_modulus + 1) if not is_prime(n)]
    out.append(RingDescriptor((Fixture("ex34"),)))
    return out


def crt_pairs(max_modulus: int = CRT_MODULUS_MAX) -> list[tuple[int, int]]:
    return [(m, n) for m in range(2, max_modulus + 1) for n in range(2, max_modulus + 1) if math.gcd(m, n) == 1]


def gamma_pairs(max_product: int = GAMMA_PAIR_PRODUCT_MAX) -> list[tuple[str, str]]:
    pairs = [("Z8", "Z4"), ("Z2", "Z2"), ("Z4xZ2", "Z3"), ("fixture:ex34", "Z2")]
    pairs += [(f"Z{m}", f"Z{n}") for m in range(2, max_product) for n in range(2, max_product) if m * n <= max_product]
    seen, out = set(), []
    for p in pairs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


@dataclass
class SuiteOptions:
    max_size: int | None = None
    ring: str | None = None
    threads: int = 1
    value_tol: float = VALUE_RTOL


RING_SUITES: dict[str, tuple[str, Callable]] = {
    "thm31": ("thm3.1", check_thm31),
    "thm32": ("thm3.2", check_thm32),
    "cor33": ("cor3.3", check_cor33),
    "thm35": ("thm3.5", check_thm35),
    "quotient": ("quotient", check_quotient_divides),
    "thm41": ("thm4.1", check_thm41),
    "thm42": ("thm4.2", check_thm42),
    "thm54": ("thm5.4", check_thm54),
}
OTHER_SUITES = ("lemma51", "lemma52", "lemma53", "gamma", "crt", "ex43", "ex44", "ex45")
SUITES = tuple(RING_SUITES) + OTHER_SUITES
_DEFAULT_CORPUS_SUITES = ("thm31", "thm32", "cor33", "thm35", "quotient")
_PRIME_POWER_SUITES = ("thm41", "thm42")


def _map(fn, items, threads: int) -> list:
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_ring_checks(names: Sequence[str], corpus: Sequence[RingDescriptor], threads: int) -> list[VerificationReport]:
    """Run several ring checkers on each ring while its facts are alive."""

    def one(desc):
        facts = RingFacts(desc)
        return [RING_SUITES[name][1](facts) for name in names]

    return [r for batch in _map(one, corpus, threads) for r in batch]


def _other_reports(name: str, threads: int, tol: float = VALUE_RTOL) -> list[VerificationReport]:
    if name == "lemma51":
        reports = [check_lemma51(g, h, v, w, s) for g, h, v, w, s in _named_examples_51()]
        reports += _map(lambda x: check_lemma51(*x[:4], subject=f"random #{x[4]}"), [(*t, i) for i, t in enumerate(lemma51_instances())], threads)
        return reports
    if name == "lemma52":
        reports = [check_lemma52(g, h, s) for g, h, s in _named_examples_52()]
        reports += _map(lambda x: check_lemma52(x[0], x[1], f"random #{x[2]}"), [(*t, i) for i, t in enumerate(lemma52_instances())], threads)
        return reports
    if name == "lemma53":
        reports = [check_lemma53(*args[:6], subject=args[6]) for args in _named_examples_53()]
        reports += _map(lambda x: check_lemma53(*x[:6], subject=f"random #{x[6]}"), [(*t, i) for i, t in enumerate(lemma53_instances())], threads)
        return reports
    if name == "gamma":
        return _map(lambda pr: check_gamma_product(*pr), gamma_pairs(), threads)
    if name == "crt":
        return _map(lambda mn: check_crt_cospectral(*mn), crt_pairs(), threads)
    if name == "ex43":
        return [check_ex43(p, tol) for p in (2, 3, 5)]
    if name == "ex44":
        return [check_ex44(p) for p in (2, 3)]
    if name == "ex45":
        return [check_ex45_p2p(p) for p in (2, 3, 5)] + [check_ex45_ppq(p, q) for p, q in ((2, 3), (3, 2), (3, 5))]
    raise ValueError(f"unknown suite {name!r}")


def run_suite(suite: str, options: SuiteOptions | None = None) -> list[VerificationReport]:
    """Per-instance reports, sorted by claim id then subject."""
    options = options or SuiteOptions()
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    reports: list[VerificationReport] = []
    if options.ring is not None:
        bad = [n for n in names if n not in RING_SUITES]
        if suite != "all" and bad:
            raise ValueError(f"suite {suite} does not take a ring")
        desc = parse_ring_spec(options.ring)
        ring_names = [n for n in names if n in RING_SUITES and (desc.is_modular or n not in _PRIME_POWER_SUITES)]
        reports = run_ring_checks(ring_names, [desc], 1)
    else:
        default_names = [n for n in names if n in _DEFAULT_CORPUS_SUITES]
        if default_names:
            corpus = default_corpus(options.max_size or DEFAULT_MAX_SIZE)
            reports += run_ring_checks(default_names, corpus, options.threads)
        pp_names = [n for n in names if n in _PRIME_POWER_SUITES]
        if pp_names:
            corpus = prime_power_corpus(options.max_size or PRIME_POWER_MAX_SIZE)
            reports += run_ring_checks(pp_names, corpus, options.threads)
        if "thm54" in names:
            cap = min(THM54_MODULUS_MAX, options.max_size or THM54_MODULUS_MAX)
            reports += run_ring_checks(["thm54"], thm54_corpus(cap), options.threads)
        for name in names:
            if name in OTHER_SUITES:
                reports += _other_reports(name, options.threads, options.value_tol)
    return sort_reports(reports)


def sort_reports(reports: Iterable[VerificationReport]) -> list[VerificationReport]:
    return sorted(reports, key=lambda r: (r.claim, r.subject))


def aggregate(reports: Sequence[VerificationReport], max_listed: int = 10) -> list[VerificationReport]:
    """One summary report per claim; non-pass instances are listed in details."""
    by_claim: dict[str, list[VerificationReport]] = {}
    for r in reports:
        by_claim.setdefault(r.claim, []).append(r)
    out = []
    for claim in sorted(by_claim):
        group = by_claim[claim]
        counts = {v: sum(1 for r in group if r.verdict == v) for v in (PASS, ERRATA, FAIL, SKIPPED)}
        effective = [r.verdict for r in group if r.verdict != SKIPPED]
        verdict = worst(effective) if effective else SKIPPED
        notable = [r for r in group if r.verdict in (FAIL, ERRATA)]
        listed = ", ".join(r.subject + (f" [{r.details}]" if r.details and len(notable) <= 3 else "") for r in notable[:max_listed])
        if len(notable) > max_listed:
            listed += f", ... ({len(notable) - max_listed} more)"
        details = f"{counts[PASS]} pass, {counts[ERRATA]} errata, {counts[FAIL]} fail, {counts[SKIPPED]} skipped"
        if listed:
            details += f"; {listed}"
        out.append(VerificationReport(claim, f"{len(group)} instances", None, counts, verdict, details))
    return out


def exit_code(reports: Iterable[VerificationReport], strict: bool = False) -> int:
    bad = (FAIL, ERRATA) if strict else (FAIL,)
    return 1 if any(r.verdict in bad for r in reports) else 0
