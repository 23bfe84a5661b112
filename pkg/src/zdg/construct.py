"""Zero-divisor graphs of finite rings and their derived graphs and matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import (
    LoopGraph,
    complete_product,
    delete_vertices,
    direct_product,
    kronecker,
    permute,
    point_identification,
    to_dot,
)
from .rings import AnnClass, FiniteRing


def _induced(ring: FiniteRing, vertices) -> LoopGraph:
    vertices = list(vertices)
    adj = ring.zero_product_mask[np.ix_(vertices, vertices)].astype(np.uint8)
    return LoopGraph(
        tuple(ring.labels[v] for v in vertices),
        adj,
        tuple(ring.keys[v] for v in vertices),
    )


def zero_divisor_graph(ring: FiniteRing) -> LoopGraph:
    """Nonzero zero-divisors, x ~ y iff xy = 0; loop at x iff x^2 = 0."""
    return _induced(ring, ring.zero_divisors)


def unit_graph(ring: FiniteRing) -> LoopGraph:
    units = ring.units
    return LoopGraph(
        tuple(ring.labels[u] for u in units),
        np.zeros((len(units), len(units)), dtype=np.uint8),
        tuple(ring.keys[u] for u in units),
    )


def zero_graph(ring: FiniteRing) -> LoopGraph:
    return LoopGraph((ring.labels[ring.zero],), np.zeros((1, 1), dtype=np.uint8), (ring.keys[ring.zero],))


def looped_zero_graph(ring: FiniteRing) -> LoopGraph:
    return LoopGraph((ring.labels[ring.zero],), np.ones((1, 1), dtype=np.uint8), (ring.keys[ring.zero],))


def _extended_from_parts(gamma: LoopGraph, zero: LoopGraph, zero_looped: LoopGraph, units: LoopGraph) -> LoopGraph:
    left = complete_product(gamma, zero)
    right = complete_product(zero_looped, units)
    return point_identification(left, right, gamma.order, 0)


def extended_graph(ring: FiniteRing) -> LoopGraph:
    """(Gamma(R) nabla Z(R)) glued at 0 to (U(R) nabla Z_L(R)), in ring element order."""
    g = _extended_from_parts(zero_divisor_graph(ring), zero_graph(ring), looped_zero_graph(ring), unit_graph(ring))
    order = [g.keys.index(k) for k in ring.keys]
    return permute(g, order)


@dataclass(frozen=True, eq=False)
class DecoratedGraph:
    """A zero-divisor graph plus what is needed to rebuild its extended graph.

    ``zero_key`` and ``unit_keys`` name the extra vertices; without them the
    zero is keyed ``("0",)`` and units ``("u1",), ("u2",), ...``.
    """

    graph: LoopGraph
    unit_count: int
    zero_key: tuple = ("0",)
    unit_keys: tuple | None = None

    def __post_init__(self):
        if self.unit_count < 1:
            raise ValueError("a ring has at least one unit")
        if self.unit_keys is not None and len(self.unit_keys) != self.unit_count:
            raise ValueError("one key per unit required")

    def _unit_keys(self) -> tuple:
        return self.unit_keys if self.unit_keys is not None else tuple((f"u{i + 1}",) for i in range(self.unit_count))

    def extended(self) -> LoopGraph:
        """Extended graph with vertex order: zero-divisors, zero, units."""
        ukeys = self._unit_keys()
        label = lambda k: str(k[0]) if len(k) == 1 else "(" + ", ".join(map(str, k)) + ")"
        zero = LoopGraph((label(self.zero_key),), np.zeros((1, 1), dtype=np.uint8), (self.zero_key,))
        zero_looped = LoopGraph(zero.labels, np.ones((1, 1), dtype=np.uint8), (self.zero_key,))
        units = LoopGraph(
            tuple(label(k) for k in ukeys),
            np.zeros((self.unit_count, self.unit_count), dtype=np.uint8),
            ukeys,
        )
        gamma = self.graph
        if gamma.keys is None:
            gamma = LoopGraph(gamma.labels, gamma.adjacency, tuple((lab,) for lab in gamma.labels))
        return _extended_from_parts(gamma, zero, zero_looped, units)


def decorate(ring: FiniteRing) -> DecoratedGraph:
    return DecoratedGraph(
        zero_divisor_graph(ring),
        len(ring.units),
        ring.keys[ring.zero],
        tuple(ring.keys[u] for u in ring.units),
    )


def gamma_product(a: DecoratedGraph, b: DecoratedGraph) -> DecoratedGraph:
    """Direct product of extended graphs minus the zero pair and all unit pairs."""
    ea, eb = a.extended(), b.extended()
    prod = direct_product(ea, eb)
    zero_key = a.zero_key + b.zero_key
    ua, ub = a._unit_keys(), b._unit_keys()
    unit_keys = tuple(x + y for x in ua for y in ub)
    drop = {zero_key, *unit_keys}
    removed = [i for i, k in enumerate(prod.keys) if k in drop]
    graph = _sorted_by_key(delete_vertices(prod, removed))
    return DecoratedGraph(graph, a.unit_count * b.unit_count, zero_key, unit_keys)


def _sorted_by_key(g: LoopGraph) -> LoopGraph:
    """Put vertices in key order when keys are mutually comparable.

    For rings built from Z_n factors this is the row-major element order of
    the product ring, so the product graph lines up index-for-index.
    """
    try:
        order = sorted(range(g.order), key=lambda i: g.keys[i])
    except TypeError:
        return g
    return permute(g, order)


# ---------------------------------------------------------------------------
# Compressed graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompressedGraph:
    """Graph on zero-divisor annihilator classes, adjacency by representatives."""

    classes: tuple[AnnClass, ...]
    adjacency: np.ndarray
    labels: tuple[str, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    @property
    def order(self) -> int:
        return len(self.classes)

    def as_graph(self) -> LoopGraph:
        return LoopGraph(self.labels, self.adjacency)

    def to_dot(self, name: str = "G_E") -> str:
        attrs = {i: {"size": c.size} for i, c in enumerate(self.classes)}
        return to_dot(self.as_graph(), name=name, vertex_attrs=attrs)


def _class_adjacency(ring: FiniteRing, classes) -> np.ndarray:
    reps = [c.representative for c in classes]
    return ring.zero_product_mask[np.ix_(reps, reps)].astype(np.uint8)


def compressed_graph(ring: FiniteRing) -> CompressedGraph:
    classes = ring.zero_divisor_classes
    adj = _class_adjacency(ring, classes)
    labels = tuple(f"[{ring.labels[c.representative]}]" for c in classes)
    return CompressedGraph(classes, adj, labels)


def well_defined_on_classes(ring: FiniteRing) -> bool:
    """Every member pair of two classes agrees with the representatives' product test."""
    mask = ring.zero_product_mask
    cls = ring.class_of
    classes = ring.ann_classes
    reps = np.array([c.representative for c in classes])
    rep_mask = mask[np.ix_(reps, reps)]
    return bool(np.array_equal(mask, rep_mask[np.ix_(cls, cls)]))


def weighted_quotient_matrix(c: CompressedGraph) -> np.ndarray:
    """Entry (i, j) is #[j] when classes i and j are adjacent, else 0."""
    sizes = np.array(c.sizes, dtype=np.int64)
    return c.adjacency.astype(np.int64) * sizes[None, :]


def extended_class_order(ring: FiniteRing) -> list[AnnClass]:
    """[1], then zero-divisor classes, then [0]."""
    unit = ring.ann_classes[ring.class_of[ring.one]]
    zero = ring.ann_classes[ring.class_of[ring.zero]]
    return [unit, *ring.zero_divisor_classes, zero]


def extended_compressed_matrix(ring: FiniteRing, classes=None) -> np.ndarray:
    """Weighted quotient matrix of the extended compressed graph.

    Vertices [1], the zero-divisor classes and [0]; [0] is looped and joined
    to every class, [1] is joined to [0] only.
    """
    classes = extended_class_order(ring) if classes is None else classes
    adj = _class_adjacency(ring, classes).astype(np.int64)
    sizes = np.array([c.size for c in classes], dtype=np.int64)
    return adj * sizes[None, :]


def kronecker_class_order(ring: FiniteRing) -> list[AnnClass]:
    """Classes of a product ring ordered as the Kronecker product of factor orders.

    Factor i contributes ``extended_class_order(factor_i)``; the class of a
    tuple element is the tuple of its components' classes.
    """
    if not ring.factors:
        return extended_class_order(ring)
    factor_orders = []
    for f in ring.factors:
        order = extended_class_order(f)
        pos = {id(c): i for i, c in enumerate(order)}
        factor_orders.append([pos[id(f.ann_classes[k])] for k in f.class_of])
    dims = [f.size for f in ring.factors]
    counts = [len(extended_class_order(f)) for f in ring.factors]
    slot_to_class: dict[int, AnnClass] = {}
    for ci, cls in enumerate(ring.ann_classes):
        comps = np.unravel_index(cls.representative, dims)
        slot = int(np.ravel_multi_index([factor_orders[i][int(c)] for i, c in enumerate(comps)], counts))
        slot_to_class[slot] = cls
    total = int(np.prod(counts))
    if len(slot_to_class) != total:
        raise ValueError("product classes do not match the Kronecker index set")
    return [slot_to_class[s] for s in range(total)]


def kronecker_extended_matrix(rings) -> np.ndarray:
    out = np.ones((1, 1), dtype=object)
    for r in rings:
        out = kronecker(out, extended_compressed_matrix(r).astype(object))
    return out
