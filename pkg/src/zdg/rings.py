"""Finite commutative rings given by multiplication tables.

Elements are identified by their index into a canonical enumeration:
``0..n-1`` for ``Z_n`` and row-major tuples for direct products. Each element
also carries a *key*, a tuple with one component per atomic factor, from
which display labels are derived.

Only multiplication is needed by the graph constructions; the addition table
is optional and used solely by the locality test of table rings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from enum import Enum
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .linalg import row_groups

# "ZDG1" as a big-endian integer
AXIOM_CHECK_SEED = int.from_bytes(b"ZDG1", "big")
EXHAUSTIVE_CHECK_LIMIT = 512
RANDOM_CHECK_TRIPLES = 10_000


class RingSpecError(ValueError):
    """Malformed ring-spec string or invalid factor parameters."""


class RingAxiomError(ValueError):
    """A table or fixture violates a commutative-ring axiom."""


class Locality(str, Enum):
    LOCAL = "known-local"
    NONLOCAL = "known-nonlocal"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Modular:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise RingSpecError(f"modulus must be at least 2, got {self.n}")

    def __str__(self) -> str:
        return f"Z{self.n}"


@dataclass(frozen=True)
class TableRing:
    source: str

    def __str__(self) -> str:
        return f"table:{self.source}"


@dataclass(frozen=True)
class Fixture:
    name: str

    def __post_init__(self):
        if self.name not in FIXTURES:
            raise RingSpecError(f"unknown fixture {self.name!r}")

    def __str__(self) -> str:
        return f"fixture:{self.name}"


FactorSpec = Union[Modular, TableRing, Fixture]


@dataclass(frozen=True)
class RingDescriptor:
    factors: tuple[FactorSpec, ...]

    def __post_init__(self):
        if not self.factors:
            raise RingSpecError("a ring descriptor needs at least one factor")

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)

    @property
    def is_modular(self) -> bool:
        return all(isinstance(f, Modular) for f in self.factors)


_SEP = r"\s*[xX]\s*(?=[Zz]\s*[\d(]|table:|fixture:)"
_FACTOR_RES = [
    ("power", re.compile(r"\s*[Zz]\s*\(\s*(\d+)\s*\^\s*(\d+)\s*\)\s*")),
    ("mod", re.compile(r"\s*[Zz]\s*(\d+)\s*")),
    ("fixture", re.compile(r"\s*fixture:\s*(\w+?)\s*(?=" + _SEP + r"|$)")),
]
# file names may contain "x", so a separator after a path needs surrounding spaces
_TABLE_RE = re.compile(r"\s*table:\s*(.+?)\s*(?=\s[xX]\s*(?:[Zz]\s*[\d(]|table:|fixture:)|$)")
_SEP_RE = re.compile(_SEP)


def parse_ring_spec(text: str) -> RingDescriptor:
    """Parse ``Z8xZ4``, ``Z(2^3)``, ``table:path``, ``fixture:ex34`` and products."""
    pos = 0
    factors: list[FactorSpec] = []
    while True:
        m = _TABLE_RE.match(text, pos)
        if m:
            factors.append(TableRing(m.group(1)))
        else:
            for kind, rx in _FACTOR_RES:
                m = rx.match(text, pos)
                if not m:
                    continue
                if kind == "power":
                    factors.append(Modular(int(m.group(1)) ** int(m.group(2))))
                elif kind == "mod":
                    factors.append(Modular(int(m.group(1))))
                else:
                    factors.append(Fixture(m.group(1).lower()))
                break
            else:
                raise RingSpecError(f"cannot parse ring spec {text!r} at offset {pos}")
        pos = m.end()
        if pos == len(text):
            return RingDescriptor(tuple(factors))
        sep = _SEP_RE.match(text, pos)
        if not sep:
            raise RingSpecError(f"expected 'x' between factors in {text!r} at offset {pos}")
        pos = sep.end()


# ---------------------------------------------------------------------------
# Rings
# ---------------------------------------------------------------------------


def _format_key(key: tuple) -> str:
    if len(key) == 1:
        return str(key[0])
    return "(" + ", ".join(str(c) for c in key) + ")"


@dataclass(frozen=True, eq=False)
class AnnClass:
    representative: int
    members: tuple[int, ...]
    annihilator: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class FiniteRing:
    """A finite commutative ring with 1 != 0, as operation tables on indices."""

    keys: tuple[tuple, ...]
    mul_table: np.ndarray
    zero: int
    one: int
    add_table: np.ndarray | None = None
    locality: Locality = Locality.UNKNOWN
    factors: tuple[FiniteRing, ...] = ()
    name: str = ""
    modular: bool = False
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.keys)
        if self.mul_table.shape != (n, n):
            raise RingAxiomError(f"multiplication table must be {n}x{n}")
        if self.zero == self.one:
            raise RingAxiomError("zero and one must differ")
        self.mul_table.setflags(write=False)
        if self.add_table is not None:
            self.add_table.setflags(write=False)
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(self.keys)})

    @property
    def size(self) -> int:
        return len(self.keys)

    def __len__(self) -> int:
        return len(self.keys)

    def __repr__(self) -> str:
        return f"FiniteRing({self.name or '?'}, size={self.size})"

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(_format_key(k) for k in self.keys)

    def index(self, key) -> int:
        """Element index from a key tuple (a bare component is accepted for atomic rings)."""
        if not isinstance(key, tuple):
            key = (key,)
        return self._index[key]

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    def add(self, x: int, y: int) -> int:
        if self.add_table is None:
            raise ValueError(f"{self.name or 'ring'} has no addition table")
        return int(self.add_table[x, y])

    @cached_property
    def zero_product_mask(self) -> np.ndarray:
        """Boolean matrix: entry (x, y) is true iff x*y = 0."""
        mask = self.mul_table == self.zero
        mask.setflags(write=False)
        return mask

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero((self.mul_table == self.one).any(axis=1)))

    @cached_property
    def zero_divisors(self) -> tuple[int, ...]:
        """Nonzero zero-divisors in index order."""
        counts = self.zero_product_mask.sum(axis=1)
        zd = counts > 1
        zd[self.zero] = False
        return tuple(int(i) for i in np.flatnonzero(zd))

    @cached_property
    def ann_classes(self) -> tuple[AnnClass, ...]:
        first, inverse = row_groups(np.packbits(self.zero_product_mask, axis=1))
        order = np.argsort(inverse, kind="stable")
        bounds = np.cumsum(np.bincount(inverse, minlength=len(first)))[:-1]
        classes = []
        for rep, members in zip(first, np.split(order, bounds)):
            ann = tuple(np.flatnonzero(self.zero_product_mask[rep]).tolist())
            classes.append(AnnClass(rep, tuple(members.tolist()), ann))
        return tuple(classes)

    @cached_property
    def class_of(self) -> np.ndarray:
        """Element index -> position of its class in ``ann_classes``."""
        out = np.empty(self.size, dtype=np.int64)
        for c, cls in enumerate(self.ann_classes):
            out[list(cls.members)] = c
        out.setflags(write=False)
        return out

    @cached_property
    def zero_divisor_classes(self) -> tuple[AnnClass, ...]:
        """Annihilator classes other than [0] and [1] (the units)."""
        unit = self.class_of[self.one]
        zero = self.class_of[self.zero]
        return tuple(c for i, c in enumerate(self.ann_classes) if i not in (unit, zero))

    def components(self, x: int) -> tuple[int, ...]:
        """Indices of x in each direct factor (just ``(x,)`` for atomic rings)."""
        if not self.factors:
            return (x,)
        return tuple(int(i) for i in np.unravel_index(x, [f.size for f in self.factors]))


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def _is_prime_power(n: int) -> bool:
    return len(factorize(n)) == 1


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs a positive integer")
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def modular_ring(n: int, with_addition: bool = False) -> FiniteRing:
    if n < 2:
        raise RingSpecError(f"modulus must be at least 2, got {n}")
    r = np.arange(n, dtype=np.int64)
    mul = (np.multiply.outer(r, r) % n).astype(np.int32)
    add = ((r[:, None] + r[None, :]) % n).astype(np.int32) if with_addition else None
    locality = Locality.LOCAL if _is_prime_power(n) else Locality.NONLOCAL
    return FiniteRing(
        keys=tuple((k,) for k in range(n)),
        mul_table=mul,
        zero=0,
        one=1,
        add_table=add,
        locality=locality,
        name=f"Z{n}",
        modular=True,
    )


def _combine_tables(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    n1, n2 = t1.shape[0], t2.shape[0]
    dtype = np.int32 if n1 * n2 < 2**31 else np.int64
    big = t1.astype(dtype)[:, None, :, None] * n2 + t2.astype(dtype)[None, :, None, :]
    return big.reshape(n1 * n2, n1 * n2)


def product_ring(rings: Sequence[FiniteRing], name: str | None = None) -> FiniteRing:
    """Direct product with row-major tuple elements and componentwise operations."""
    rings = tuple(rings)
    if len(rings) == 1:
        return rings[0]
    atoms: list[FiniteRing] = []
    for r in rings:
        atoms.extend(r.factors or (r,))
    mul = atoms[0].mul_table
    add = atoms[0].add_table
    keys = [k for k in atoms[0].keys]
    zero, one = atoms[0].zero, atoms[0].one
    for r in atoms[1:]:
        mul = _combine_tables(mul, r.mul_table)
        add = _combine_tables(add, r.add_table) if add is not None and r.add_table is not None else None
        keys = [a + b for a in keys for b in r.keys]
        zero = zero * r.size + r.zero
        one = one * r.size + r.one
    nontrivial = sum(1 for r in atoms if r.size >= 2)
    return FiniteRing(
        keys=tuple(keys),
        mul_table=mul,
        zero=zero,
        one=one,
        add_table=add,
        locality=Locality.NONLOCAL if nontrivial >= 2 else Locality.UNKNOWN,
        factors=tuple(atoms),
        name=name or "x".join(r.name for r in atoms),
        modular=all(r.modular for r in atoms),
    )


def build_ring(descriptor: RingDescriptor | str, with_addition: bool = False) -> FiniteRing:
    if isinstance(descriptor, str):
        descriptor = parse_ring_spec(descriptor)
    parts = []
    for f in descriptor.factors:
        if isinstance(f, Modular):
            parts.append(modular_ring(f.n, with_addition=with_addition))
        elif isinstance(f, TableRing):
            parts.append(load_table_ring(f.source))
        else:
            parts.append(FIXTURES[f.name]())
    if len(parts) == 1:
        return parts[0]
    return product_ring(parts, name=str(descriptor))


def local_factors(descriptor: RingDescriptor) -> list[FactorSpec]:
    """Split every Modular(n) factor into its prime-power (local) CRT factors."""
    out: list[FactorSpec] = []
    for f in descriptor.factors:
        if isinstance(f, Modular):
            out.extend(Modular(p**t) for p, t in sorted(factorize(f.n).items()))
        else:
            out.append(f)
    return out


def prime_power_data(descriptor: RingDescriptor) -> list[tuple[int, int]]:
    """(p_i, t_i) for each local factor of an all-Modular descriptor."""
    if not descriptor.is_modular:
        raise ValueError(f"{descriptor} has non-Modular factors")
    out = []
    for f in local_factors(descriptor):
        ((p, t),) = factorize(f.n).items()
        out.append((p, t))
    return out


# ---------------------------------------------------------------------------
# Module-level accessors
# ---------------------------------------------------------------------------


def mul(ring: FiniteRing, x: int, y: int) -> int:
    return ring.mul(x, y)


def units(ring: FiniteRing) -> tuple[int, ...]:
    return ring.units


def zero_divisors(ring: FiniteRing) -> tuple[int, ...]:
    return ring.zero_divisors


def annihilator(ring: FiniteRing, x: int) -> tuple[int, ...]:
    return tuple(int(j) for j in np.flatnonzero(ring.zero_product_mask[x]))


def ann_classes(ring: FiniteRing) -> tuple[AnnClass, ...]:
    return ring.ann_classes


def is_local(ring: FiniteRing) -> bool | None:
    """True/False when decidable, None when only multiplication is known.

    With an addition table, the ring is local iff its nonunits are closed
    under addition.
    """
    if ring.locality is Locality.LOCAL:
        return True
    if ring.locality is Locality.NONLOCAL:
        return False
    if ring.add_table is None:
        return None
    unit = np.zeros(ring.size, dtype=bool)
    unit[list(ring.units)] = True
    nonunits = np.flatnonzero(~unit)
    sums = ring.add_table[np.ix_(nonunits, nonunits)]
    return not bool(unit[sums].any())


# ---------------------------------------------------------------------------
# Axiom validation
# ---------------------------------------------------------------------------


def validate_ring(ring: FiniteRing, seed: int = AXIOM_CHECK_SEED) -> None:
    """Raise RingAxiomError naming the first failing pair or triple."""
    t = ring.mul_table
    n = ring.size
    lab = ring.labels
    asym = np.argwhere(t != t.T)
    if len(asym):
        i, j = asym[0]
        raise RingAxiomError(f"multiplication is not commutative at ({lab[i]}, {lab[j]})")
    if (t < 0).any() or (t >= n).any():
        raise RingAxiomError("multiplication table has out-of-range entries")
    bad = np.flatnonzero(t[ring.one] != np.arange(n))
    if len(bad):
        raise RingAxiomError(f"{lab[ring.one]} is not a multiplicative identity at {lab[bad[0]]}")
    bad = np.flatnonzero(t[ring.zero] != ring.zero)
    if len(bad):
        raise RingAxiomError(f"{lab[ring.zero]} is not absorbing at {lab[bad[0]]}")
    a_tab = ring.add_table
    if a_tab is not None:
        if (a_tab != a_tab.T).any():
            i, j = np.argwhere(a_tab != a_tab.T)[0]
            raise RingAxiomError(f"addition is not commutative at ({lab[i]}, {lab[j]})")
        if (a_tab[ring.zero] != np.arange(n)).any():
            raise RingAxiomError("zero is not an additive identity")
        if not (a_tab == ring.zero).any(axis=1).all():
            i = int(np.flatnonzero(~(a_tab == ring.zero).any(axis=1))[0])
            raise RingAxiomError(f"{lab[i]} has no additive inverse")

    def check_triples(a, b, c):
        ab_c = t[t[a, b], c]
        a_bc = t[a, t[b, c]]
        bad = np.flatnonzero(np.atleast_1d(ab_c != a_bc))
        if len(bad):
            k = bad[0]
            trip = tuple(lab[int(np.broadcast_to(v, ab_c.shape).flat[k])] for v in (a, b, c))
            raise RingAxiomError(f"multiplication is not associative at {trip}")
        if a_tab is not None:
            s1 = a_tab[a_tab[a, b], c]
            s2 = a_tab[a, a_tab[b, c]]
            bad = np.flatnonzero(np.atleast_1d(s1 != s2))
            if len(bad):
                k = bad[0]
                trip = tuple(lab[int(np.broadcast_to(v, s1.shape).flat[k])] for v in (a, b, c))
                raise RingAxiomError(f"addition is not associative at {trip}")
            d1 = t[a, a_tab[b, c]]
            d2 = a_tab[t[a, b], t[a, c]]
            bad = np.flatnonzero(np.atleast_1d(d1 != d2))
            if len(bad):
                k = bad[0]
                trip = tuple(lab[int(np.broadcast_to(v, d1.shape).flat[k])] for v in (a, b, c))
                raise RingAxiomError(f"distributivity fails at {trip}")

    if n <= EXHAUSTIVE_CHECK_LIMIT:
        b = np.arange(n)[:, None]
        c = np.arange(n)[None, :]
        for a in range(n):
            check_triples(np.full((n, n), a), np.broadcast_to(b, (n, n)), np.broadcast_to(c, (n, n)))
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, RANDOM_CHECK_TRIPLES))
        check_triples(a, b, c)


# ---------------------------------------------------------------------------
# Table rings
# ---------------------------------------------------------------------------


def ring_from_tables(
    labels: Sequence[str],
    mul_table,
    zero: int,
    one: int,
    add_table=None,
    name: str = "",
    validate: bool = True,
) -> FiniteRing:
    n = len(labels)
    try:
        m = np.asarray(mul_table, dtype=np.int64)
        a = None if add_table is None else np.asarray(add_table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise RingAxiomError(f"operation tables must be integer arrays: {exc}") from exc
    if m.shape != (n, n) or (a is not None and a.shape != (n, n)):
        raise RingAxiomError(f"operation tables must be {n}x{n}")
    if not (0 <= zero < n and 0 <= one < n):
        raise RingAxiomError("zero/one index out of range")
    if len(set(labels)) != n:
        raise RingAxiomError("element labels must be distinct")
    if (m < 0).any() or (m >= n).any() or (a is not None and ((a < 0).any() or (a >= n).any())):
        raise RingAxiomError("operation tables have out-of-range entries")
    ring = FiniteRing(
        keys=tuple((str(lab),) for lab in labels),
        mul_table=m.astype(np.int32),
        zero=int(zero),
        one=int(one),
        add_table=None if a is None else a.astype(np.int32),
        name=name,
    )
    if validate:
        validate_ring(ring)
    return ring


def load_table_ring(path: str | Path) -> FiniteRing:
    """Load the JSON table format ``{size, labels, zero, one, mul, add?}``."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RingAxiomError(f"cannot read table ring {path}: {exc}") from exc
    missing = [k for k in ("size", "labels", "zero", "one", "mul") if k not in data]
    if missing:
        raise RingAxiomError(f"table ring {path} lacks fields {missing}")
    if len(data["labels"]) != data["size"]:
        raise RingAxiomError(f"table ring {path}: {len(data['labels'])} labels for size {data['size']}")
    return ring_from_tables(
        data["labels"], data["mul"], data["zero"], data["one"], data.get("add"), name=f"table:{path}"
    )


def ring_to_table(ring: FiniteRing) -> dict:
    out = {
        "size": ring.size,
        "labels": list(ring.labels),
        "zero": ring.zero,
        "one": ring.one,
        "mul": ring.mul_table.tolist(),
    }
    if ring.add_table is not None:
        out["add"] = ring.add_table.tolist()
    return out


def save_table_ring(ring: FiniteRing, path: str | Path) -> None:
    Path(path).write_text(json.dumps(ring_to_table(ring)), encoding="utf-8")


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


def _ex34_label(a: int, b: int, c: int, d: int) -> str:
    parts = []
    for coef, mono in ((a, ""), (b, "X"), (c, "Y"), (d, "X^2")):
        if coef == 0:
            continue
        if mono == "":
            parts.append(str(coef))
        else:
            parts.append(mono if coef == 1 else f"{coef}{mono}")
    return "+".join(parts) if parts else "0"


def fixture_ex34() -> FiniteRing:
    """Z_3[[X,Y]]/(XY, X^3, Y^3, X^2 - Y^2), basis 1, X, Y, X^2 over Z_3."""
    elems = np.array(np.unravel_index(np.arange(81), (3, 3, 3, 3))).T  # rows (a, b, c, d)
    a1, b1, c1, d1 = (elems[:, k][:, None] for k in range(4))
    a2, b2, c2, d2 = (elems[:, k][None, :] for k in range(4))
    pa = (a1 * a2) % 3
    pb = (a1 * b2 + a2 * b1) % 3
    pc = (a1 * c2 + a2 * c1) % 3
    pd = (a1 * d2 + a2 * d1 + b1 * b2 + c1 * c2) % 3
    mul = (((pa * 3 + pb) * 3 + pc) * 3 + pd).astype(np.int32)
    sa, sb, sc, sd = ((elems[:, k][:, None] + elems[:, k][None, :]) % 3 for k in range(4))
    add = (((sa * 3 + sb) * 3 + sc) * 3 + sd).astype(np.int32)
    keys = tuple((_ex34_label(*map(int, e)),) for e in elems)
    return FiniteRing(
        keys=keys,
        mul_table=mul,
        zero=0,
        one=27,  # (1, 0, 0, 0)
        add_table=add,
        name="fixture:ex34",
    )


def ex34_index(a: int, b: int, c: int, d: int) -> int:
    """Index of a + bX + cY + dX^2 in ``fixture_ex34`` (coefficients mod 3)."""
    return ((a % 3 * 3 + b % 3) * 3 + c % 3) * 3 + d % 3


FIXTURES = {"ex34": fixture_ex34}


def modular_product(moduli: Sequence[int]) -> FiniteRing:
    """Shorthand for Z_{n1} x ... x Z_{nk}."""
    return build_ring(RingDescriptor(tuple(Modular(n) for n in moduli)))

