"""Undirected graphs that may carry loops, with 0/1 integer adjacency."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class LoopGraph:
    """Labeled graph; ``adjacency[i, i] == 1`` means vertex i has a loop.

    ``keys`` optionally identifies vertices by ring-element keys (tuples).
    Keys must be unique when present; products concatenate them.
    """

    labels: tuple[str, ...]
    adjacency: np.ndarray
    keys: tuple[tuple, ...] | None = None

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=np.uint8)
        n = len(self.labels)
        if a.shape != (n, n):
            raise ValueError(f"adjacency must be {n}x{n}, got {a.shape}")
        if (a > 1).any():
            raise ValueError("adjacency entries must be 0 or 1")
        if (a != a.T).any():
            raise ValueError("adjacency must be symmetric")
        if self.keys is not None and len(self.keys) != n:
            raise ValueError("one key per vertex required")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"LoopGraph(order={self.order}, edges={self.edge_count}, loops={self.loop_count})"

    @property
    def loop_count(self) -> int:
        return int(np.trace(self.adjacency.astype(np.int64)))

    @property
    def edge_count(self) -> int:
        """Number of edges, counting each loop once."""
        a = self.adjacency.astype(np.int64)
        return int((a.sum() - np.trace(a)) // 2 + np.trace(a))

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))

    def index_of(self, key) -> int:
        if self.keys is None:
            raise ValueError("graph has no vertex keys")
        if not isinstance(key, tuple):
            key = (key,)
        return self.keys.index(key)

    def has_loop(self, v: int) -> bool:
        return bool(self.adjacency[v, v])


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> LoopGraph:
    a = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        a[u, v] = a[v, u] = 1
    return LoopGraph(tuple(labels) if labels else tuple(str(i) for i in range(n)), a)


def empty_graph(n: int) -> LoopGraph:
    return graph_from_edges(n, ())


def complete_graph(n: int) -> LoopGraph:
    return graph_from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def looped_vertex() -> LoopGraph:
    return graph_from_edges(1, [(0, 0)])


def _concat_keys(k1, k2):
    if k1 is None or k2 is None:
        return None
    keys = tuple(k1) + tuple(k2)
    return keys if len(set(keys)) == len(keys) else None


def _pair_label(a: str, b: str) -> str:
    return f"({a}, {b})"


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact Kronecker product; object arrays keep arbitrary-precision entries."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.dtype == object or b.dtype == object:
        return np.kron(a.astype(object), b.astype(object))
    return np.kron(a.astype(np.int64), b.astype(np.int64))


def direct_product(g: LoopGraph, h: LoopGraph) -> LoopGraph:
    """Tensor product: (u, v) ~ (u', v') iff u ~ u' and v ~ v'; row-major vertex order."""
    adj = np.kron(g.adjacency, h.adjacency)
    labels = tuple(_pair_label(a, b) for a in g.labels for b in h.labels)
    keys = None
    if g.keys is not None and h.keys is not None:
        keys = tuple(a + b for a in g.keys for b in h.keys)
    return LoopGraph(labels, adj, keys)


def complete_product(g: LoopGraph, h: LoopGraph) -> LoopGraph:
    """Disjoint union plus every edge between the two vertex sets."""
    n, m = g.order, h.order
    a = np.zeros((n + m, n + m), dtype=np.uint8)
    a[:n, :n] = g.adjacency
    a[n:, n:] = h.adjacency
    a[:n, n:] = 1
    a[n:, :n] = 1
    return LoopGraph(g.labels + h.labels, a, _concat_keys(g.keys, h.keys))


def point_identification(g: LoopGraph, h: LoopGraph, v: int, w: int) -> LoopGraph:
    """Glue vertex w of h onto vertex v of g.

    Result order: vertices of g, then vertices of h other than w. The merged
    vertex keeps g's label and is looped iff v or w was.
    """
    n, m = g.order, h.order
    rest = [i for i in range(m) if i != w]
    a = np.zeros((n + m - 1, n + m - 1), dtype=np.uint8)
    a[:n, :n] = g.adjacency
    hr = h.adjacency[np.ix_(rest, rest)]
    a[n:, n:] = hr
    link = h.adjacency[w, rest]
    a[v, n:] = link
    a[n:, v] = link
    a[v, v] = g.adjacency[v, v] | h.adjacency[w, w]
    labels = g.labels + tuple(h.labels[i] for i in rest)
    keys = None
    if g.keys is not None and h.keys is not None:
        keys = _concat_keys(g.keys, tuple(h.keys[i] for i in rest))
    return LoopGraph(labels, a, keys)


def delete_vertices(g: LoopGraph, s: Iterable[int]) -> LoopGraph:
    drop = set(int(v) for v in s)
    bad = [v for v in drop if not 0 <= v < g.order]
    if bad:
        raise IndexError(f"vertices {bad} not in graph")
    keep = [i for i in range(g.order) if i not in drop]
    return induced_subgraph(g, keep)


def induced_subgraph(g: LoopGraph, keep: Sequence[int]) -> LoopGraph:
    keep = list(keep)
    a = g.adjacency[np.ix_(keep, keep)]
    keys = None if g.keys is None else tuple(g.keys[i] for i in keep)
    return LoopGraph(tuple(g.labels[i] for i in keep), a, keys)


def permute(g: LoopGraph, order: Sequence[int]) -> LoopGraph:
    """Reorder vertices so that new vertex i is old vertex ``order[i]``."""
    if sorted(order) != list(range(g.order)):
        raise ValueError("order must be a permutation of the vertices")
    return induced_subgraph(g, order)


def generalized_complement(g: LoopGraph) -> LoopGraph:
    """Adjacency J - A: complements edges and loops alike."""
    return LoopGraph(g.labels, 1 - g.adjacency, g.keys)


def complement(g: LoopGraph) -> LoopGraph:
    """Ordinary complement of a loop-free graph (adjacency J - I - A)."""
    if g.loop_count:
        raise ValueError("ordinary complement is defined for loop-free graphs")
    a = 1 - g.adjacency
    np.fill_diagonal(a, 0)
    return LoopGraph(g.labels, a, g.keys)


def adjacency_matrix(g: LoopGraph) -> np.ndarray:
    return g.adjacency.astype(np.int64)


def is_same_labeled_graph(g: LoopGraph, h: LoopGraph, relabel: Mapping[int, int] | Sequence[int]) -> bool:
    """True iff ``A_g[i, j] == A_h[relabel[i], relabel[j]]`` for all i, j."""
    if g.order != h.order:
        raise ValueError(f"dimension mismatch: {g.order} vs {h.order}")
    perm = [relabel[i] for i in range(g.order)]
    if sorted(perm) != list(range(h.order)):
        raise ValueError("relabel is not a bijection")
    return bool(np.array_equal(g.adjacency, h.adjacency[np.ix_(perm, perm)]))


def key_relabel(g: LoopGraph, h: LoopGraph) -> list[int]:
    """Bijection matching vertices of g and h by key."""
    if g.keys is None or h.keys is None:
        raise ValueError("both graphs need vertex keys")
    where = {k: i for i, k in enumerate(h.keys)}
    try:
        return [where[k] for k in g.keys]
    except KeyError as exc:
        raise ValueError(f"vertex key {exc.args[0]} missing from second graph") from None


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: LoopGraph, name: str = "G", vertex_attrs: Mapping[int, Mapping[str, object]] | None = None) -> str:
    """Graphviz text; loops become self-edges."""
    out = [f"graph {_dot_quote(name)} {{"]
    for i, lab in enumerate(g.labels):
        attrs = "" if not vertex_attrs or i not in vertex_attrs else (
            " [" + ", ".join(f"{k}={_dot_quote(str(v))}" for k, v in vertex_attrs[i].items()) + "]"
        )
        out.append(f"  {_dot_quote(lab)}{attrs};")
    for i, j in g.edges():
        out.append(f"  {_dot_quote(g.labels[i])} -- {_dot_quote(g.labels[j])};")
    out.append("}")
    return "\n".join(out) + "\n"


def to_csv(m: np.ndarray, labels: Sequence[str] | None = None) -> str:
    """Dense CSV; with labels, a header row and a leading label column."""
    buf = io.StringIO()
    m = np.asarray(m)
    if labels is not None:
        buf.write("," + ",".join(_csv_cell(s) for s in labels) + "\n")
    for i, row in enumerate(m.tolist()):
        prefix = _csv_cell(labels[i]) + "," if labels is not None else ""
        buf.write(prefix + ",".join(str(v) for v in row) + "\n")
    return buf.getvalue()


def _csv_cell(s: str) -> str:
    return '"' + s.replace('"', '""') + '"' if any(c in s for c in ',"\n') else s


def to_matrix_market(m: np.ndarray, symmetric: bool = True) -> str:
    """Matrix Market coordinate format, integer field."""
    m = np.asarray(m)
    rows, cols = m.shape
    if symmetric and rows == cols and np.array_equal(m, m.T):
        i, j = np.nonzero(np.tril(m))
        kind = "symmetric"
    else:
        i, j = np.nonzero(m)
        kind = "general"
    lines = [f"%%MatrixMarket matrix coordinate integer {kind}", f"{rows} {cols} {len(i)}"]
    lines.extend(f"{a + 1} {b + 1} {m[a, b]}" for a, b in zip(i.tolist(), j.tolist()))
    return "\n".join(lines) + "\n"


def from_matrix_market(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("%")]
    header = text.splitlines()[0].split()
    rows, cols, nnz = (int(t) for t in lines[0].split())
    m = np.zeros((rows, cols), dtype=np.int64)
    for ln in lines[1 : 1 + nnz]:
        a, b, v = ln.split()
        m[int(a) - 1, int(b) - 1] = int(v)
        if header[-1] == "symmetric":
            m[int(b) - 1, int(a) - 1] = int(v)
    return m
