"""Exact integer linear algebra: characteristic polynomials, rank, nullity.

No floating point is involved in any returned value.

Characteristic polynomials of dense matrices are computed by Hessenberg
reduction modulo many word-size primes at once (vectorised over the prime
axis) followed by Chinese remaindering. The number of primes is chosen from
a rigorous bound on the coefficients, so the result is exact, not
probabilistic.

Matrices with repeated rows (zero-divisor graphs have one repeated row per
annihilator class) go through a rank factorisation ``A = C R`` first, using
``det(xI - CR) = x^(n-r) det(xI - RC)``; only the small ``r x r`` core is
reduced densely.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from .polynomial import IntPolynomial

# Residues stay below 2**24 so that products fit in 48 bits and row sums of up
# to 2**15 such products fit in int64.
_PRIME_CEILING = 1 << 24
_MAX_DENSE_DIM = 1 << 15


@lru_cache(maxsize=None)
def _prime_pool() -> np.ndarray:
    """All primes in [2**24 - 2**20, 2**24), descending."""
    lo, hi = _PRIME_CEILING - (1 << 20), _PRIME_CEILING
    small = _small_primes(int(math.isqrt(hi)) + 1)
    seg = np.ones(hi - lo, dtype=bool)
    for p in small:
        start = (-lo) % p
        seg[start::p] = False
    return (np.flatnonzero(seg) + lo)[::-1].astype(np.int64)


def _small_primes(limit: int) -> list[int]:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def _primes_for_bits(bits: float) -> np.ndarray:
    pool = _prime_pool()
    count = int(bits / 23.9) + 2
    if count > len(pool):
        raise OverflowError("coefficient bound exceeds the prime pool")
    return pool[:count]


def as_integer_matrix(m) -> np.ndarray:
    """Return m as int64 when safe, otherwise as an object array of Python ints."""
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if arr.dtype == object:
        ints = np.vectorize(_exact_int, otypes=[object])(arr) if arr.size else arr
        if arr.size and max(abs(v) for v in ints.flat) < (1 << 62):
            return ints.astype(np.int64)
        return ints
    if arr.dtype.kind == "b":
        return arr.astype(np.int64)
    if arr.dtype.kind in "iu":
        return arr.astype(np.int64)
    raise TypeError(f"matrix entries must be integers, got dtype {arr.dtype}")


def _exact_int(v) -> int:
    if isinstance(v, Fraction):
        if v.denominator != 1:
            raise TypeError(f"non-integer entry {v}")
        return v.numerator
    if isinstance(v, (int, np.integer)):
        return int(v)
    raise TypeError(f"non-integer entry {v!r}")


def _residues(a: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """Stack of a mod p for each prime, shape (P, rows, cols)."""
    if a.dtype == object:
        return np.stack([(a % int(p)).astype(np.int64) for p in primes])
    return a[None, :, :] % primes[:, None, None]


def _modinv(values: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """Elementwise inverse modulo the matching prime (0 stays 0)."""
    out = [pow(v, -1, p) if v % p else 0 for v, p in zip(values.tolist(), primes.tolist())]
    return np.array(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# Characteristic polynomial
# ---------------------------------------------------------------------------


def _coefficient_bits(a: np.ndarray) -> float:
    """log2 of prod(1 + ||row_i||_2), which bounds every charpoly coefficient."""
    bits = 0.0
    for row in a.tolist():
        sq = sum(int(v) * int(v) for v in row)
        bits += math.log2(1 + math.isqrt(sq) + 1)
    return bits


def _hessenberg_charpoly_mod(h: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """Charpoly coefficients (ascending) of each residue matrix, shape (P, n+1)."""
    h = h.copy()
    num_p, n, _ = h.shape
    pcol = primes[:, None]
    pmat = primes[:, None, None]
    for j in range(n - 2):
        col = h[:, j + 1 :, j]
        nz = col != 0
        has = nz.any(axis=1)
        piv = np.argmax(nz, axis=1) + j + 1
        for pr in np.flatnonzero(has & (piv != j + 1)):
            i = piv[pr]
            h[pr, [j + 1, i], :] = h[pr, [i, j + 1], :]
            h[pr, :, [j + 1, i]] = h[pr, :, [i, j + 1]]
        if j + 2 >= n:
            continue
        inv = _modinv(h[:, j + 1, j], primes)
        u = h[:, j + 2 :, j] * inv[:, None] % pcol
        h[:, j + 2 :, :] = (h[:, j + 2 :, :] - u[:, :, None] * h[:, j + 1, None, :]) % pmat
        h[:, :, j + 1] = (h[:, :, j + 1] + np.einsum("pik,pk->pi", h[:, :, j + 2 :], u)) % pcol

    polys = np.zeros((num_p, n + 1, n + 1), dtype=np.int64)
    polys[:, 0, 0] = 1
    beta = np.zeros((num_p, n), dtype=np.int64)
    for k in range(1, n + 1):
        prev = polys[:, k - 1, :]
        cur = np.zeros_like(prev)
        cur[:, 1:] = prev[:, :-1]
        cur = (cur - h[:, k - 1, k - 1][:, None] * prev) % pcol
        if k >= 2:
            sub = h[:, k - 1, k - 2]
            beta[:, : k - 2] = beta[:, : k - 2] * sub[:, None] % pcol
            beta[:, k - 2] = sub
            t = h[:, : k - 1, k - 1] * beta[:, : k - 1] % pcol
            corr = np.einsum("pi,pic->pc", t, polys[:, : k - 1, :]) % pcol
            cur = (cur - corr) % pcol
        polys[:, k, :] = cur
    return polys[:, n, :]


def _crt(residues: np.ndarray, primes: np.ndarray) -> list[int]:
    """Symmetric-range integers from residues of shape (P, m)."""
    m = residues.shape[1]
    values = [0] * m
    modulus = 1
    for r, p in zip(residues.tolist(), primes.tolist()):
        inv = pow(modulus % p, -1, p)
        for i in range(m):
            t = (r[i] - values[i]) * inv % p
            values[i] += modulus * t
        modulus *= p
    half = modulus // 2
    return [v - modulus if v > half else v for v in values]


def _charpoly_dense(a: np.ndarray) -> IntPolynomial:
    n = a.shape[0]
    if n == 0:
        return IntPolynomial.constant(1)
    if n > _MAX_DENSE_DIM:
        raise OverflowError("matrix too large for the dense characteristic polynomial")
    primes = _primes_for_bits(_coefficient_bits(a) + 1)
    res = _hessenberg_charpoly_mod(_residues(a, primes), primes)
    return IntPolynomial(_crt(res, primes))


def row_groups(a: np.ndarray) -> tuple[list[int], np.ndarray]:
    """First-occurrence indices of distinct rows and each row's group number.

    Groups are numbered in order of first occurrence.
    """
    a = np.ascontiguousarray(a)
    n = a.shape[0]
    if a.dtype == object:
        groups: dict[str, int] = {}
        first: list[int] = []
        inverse = np.empty(n, dtype=np.int64)
        for i in range(n):
            g = groups.setdefault(repr(a[i].tolist()), len(first))
            if g == len(first):
                first.append(i)
            inverse[i] = g
        return first, inverse
    if n == 0:
        return [], np.empty(0, dtype=np.int64)
    if a.ndim == 1 or a.shape[1] == 0:
        return [0], np.zeros(n, dtype=np.int64)
    # group by a wrapping integer hash, then confirm every row against its group's first row
    weights = np.random.default_rng(len(a[0])).integers(1, 1 << 62, size=a.shape[1], dtype=np.int64)
    with np.errstate(over="ignore"):
        h = a.astype(np.int64) @ weights if a.dtype != np.int64 else a @ weights
    _, first_idx, inv = np.unique(h, return_index=True, return_inverse=True)
    inv = inv.ravel()
    if not np.array_equal(a, a[first_idx[inv]]):
        rows = a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()
        _, first_idx, inv = np.unique(rows, return_index=True, return_inverse=True)
    order = np.argsort(first_idx, kind="stable")
    renumber = np.empty_like(order)
    renumber[order] = np.arange(len(order))
    return first_idx[order].tolist(), renumber[inv.ravel()].astype(np.int64)


_row_groups = row_groups


def _dedupe(a: np.ndarray) -> np.ndarray:
    rows, _ = _row_groups(a)
    b = a[rows]
    cols, _ = _row_groups(np.ascontiguousarray(b.T))
    return b[:, cols]


def charpoly(m) -> IntPolynomial:
    """Exact det(xI - m) for a square integer matrix."""
    a = as_integer_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"charpoly needs a square matrix, got {a.shape}")
    n = a.shape[0]
    if n == 0:
        return IntPolynomial.constant(1)
    first, inverse = _row_groups(a)
    if len(first) == n:
        return _charpoly_dense(a)
    return _charpoly_low_rank(a, first, inverse)


def _charpoly_low_rank(a: np.ndarray, first: list[int], inverse: np.ndarray) -> IntPolynomial:
    n = a.shape[0]
    k = len(first)
    d = a[first]
    # s[:, g] sums the columns of d over the rows belonging to group g: d @ indicator
    onehot = np.zeros((n, k), dtype=a.dtype if a.dtype != object else object)
    onehot[np.arange(n), inverse] = 1
    s = d @ onehot
    basis, coef = row_basis(d)
    r = len(basis)
    if r == 0:
        return IntPolynomial.monomial(n)
    if r == k:
        core = s
        scale = 1
    else:
        # R = d[basis], C = onehot @ coef, so RC = s[basis] @ coef
        scale = reduce(lambda u, v: u * v // math.gcd(u, v), (c.denominator for row in coef for c in row), 1)
        sb = s[basis].tolist()
        core = np.array(
            [[int(sum(Fraction(sb[i][g]) * coef[g][j] for g in range(k)) * scale) for j in range(r)] for i in range(r)],
            dtype=object,
        )
    chi = charpoly(core) if core.shape[0] < n else _charpoly_dense(as_integer_matrix(core))
    if scale != 1:
        # chi_{M/L}(x) = L^-r chi_M(Lx)
        cs = []
        for j, c in enumerate(chi.coeffs):
            num = c * scale**j
            den = scale**r
            if num % den:
                raise ArithmeticError("non-integral characteristic polynomial")
            cs.append(num // den)
        chi = IntPolynomial(cs)
    return chi * IntPolynomial.monomial(n - r)


# ---------------------------------------------------------------------------
# Rank
# ---------------------------------------------------------------------------


# Largest prime below 2**26: residues and their products stay below 2**53, so
# float64 elimination is exact.
RANK_PRIME = 67108859


def _reduce(v: np.ndarray, p: int) -> np.ndarray:
    v -= p * np.floor(v / p)
    v[v < 0] += p
    v[v >= p] -= p
    return v


# below this many entries, per-call numpy overhead dominates
_SMALL_RANK_CELLS = 4096


def _rank_mod_small(m: list[list[int]], p: int) -> int:
    rank = 0
    rows = len(m)
    for c in range(len(m[0]) if m else 0):
        piv = next((i for i in range(rank, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        prow = [v * inv % p for v in m[rank]]
        m[rank] = prow
        for i in range(rank + 1, rows):
            f = m[i][c]
            if f:
                m[i] = [(v - f * w) % p for v, w in zip(m[i], prow)]
        rank += 1
        if rank == rows:
            break
    return rank


def _rank_mod(a: np.ndarray, p: int = RANK_PRIME) -> int:
    """Rank over GF(p); a lower bound for the rational rank."""
    if p * p >= 1 << 53:
        raise ValueError("prime too large for exact float64 elimination")
    if a.shape[0] * a.shape[1] <= _SMALL_RANK_CELLS:
        return _rank_mod_small((a % p).tolist(), p)
    m = np.array((a % p).tolist(), dtype=np.float64) if a.dtype == object else np.mod(a, p).astype(np.float64)
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(m[rank:, c])
        if not len(nz):
            continue
        piv = rank + nz[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        # columns left of c are already zero below the pivot row
        row = _reduce(m[rank, c:] * pow(int(m[rank, c]), -1, p), p)
        m[rank, c:] = row
        sub = m[rank + 1 :, c:]
        hit = np.flatnonzero(sub[:, 0])
        if len(hit):
            sub[hit] = _reduce(sub[hit] - sub[hit, :1] * row, p)
        rank += 1
    return rank


def _rank_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination over the integers."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(rank + 1, nrows):
            ri = m[i]
            f = ri[c]
            m[i] = [(pr[c] * ri[j] - f * pr[j]) // prev for j in range(ncols)]
        prev = pr[c]
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(m) -> int:
    """Exact rank over the rationals.

    Duplicate rows and columns are removed first (rank-preserving). A full
    rank modulo a prime certifies full rational rank; otherwise the reduced
    matrix goes through fraction-free elimination.
    """
    a = as_integer_matrix(m)
    if a.size == 0:
        return 0
    b = _dedupe(a)
    if not np.any(b != 0):
        return 0
    full = min(b.shape)
    if _rank_mod(b) == full:
        return full
    return _rank_bareiss(b.tolist())


def nullity(g) -> int:
    """#V(g) - rank A(g) for a LoopGraph (or the corank of a square matrix)."""
    a = g.adjacency if hasattr(g, "adjacency") else np.asarray(g)
    return a.shape[0] - rank(a)


def row_basis(m) -> tuple[list[int], list[list[Fraction]]]:
    """Indices of a maximal independent set of rows, and every row's coordinates in it.

    Returns ``(basis, coef)`` with ``m[i] == sum(coef[i][j] * m[basis[j]])``.
    """
    a = as_integer_matrix(m)
    nrows = a.shape[0]
    if nrows == 0:
        return [], []
    b = a
    if b.shape[1] > 0:
        cols, _ = _row_groups(np.ascontiguousarray(b.T))
        b = b[:, cols]
    if _rank_mod(b) == nrows:
        eye = [[Fraction(int(i == j)) for j in range(nrows)] for i in range(nrows)]
        return list(range(nrows)), eye
    # echelon rows kept with their expression in terms of original basis rows
    echelon: list[tuple[int, list[Fraction], list[Fraction]]] = []  # (pivot col, row, combo)
    basis: list[int] = []
    coef: list[list[Fraction]] = []
    for i, row in enumerate(b.tolist()):
        vec = [Fraction(v) for v in row]
        combo: dict[int, Fraction] = {}
        for pc, erow, ecombo in echelon:
            f = vec[pc]
            if f == 0:
                continue
            vec = [x - f * y for x, y in zip(vec, erow)]
            for j, c in enumerate(ecombo):
                if c:
                    combo[j] = combo.get(j, Fraction(0)) + f * c
        pc = next((j for j, v in enumerate(vec) if v != 0), None)
        if pc is None:
            coef.append([combo.get(j, Fraction(0)) for j in range(len(basis))])
            continue
        # new basis row: erow = (row - sum combo_j basis_j) / pivot
        piv = vec[pc]
        erow = [v / piv for v in vec]
        new_index = len(basis)
        basis.append(i)
        ecombo = [-combo.get(j, Fraction(0)) / piv for j in range(new_index)] + [1 / piv]
        for idx, (epc, er, ec) in enumerate(echelon):
            echelon[idx] = (epc, er, ec + [Fraction(0)])
        echelon.append((pc, erow, ecombo))
        coef.append(None)  # filled below
    r = len(basis)
    out = []
    for i, c in enumerate(coef):
        if c is None:
            out.append([Fraction(int(basis[j] == i)) for j in range(r)])
        else:
            out.append(c + [Fraction(0)] * (r - len(c)))
    return basis, out


def det(m) -> int:
    a = as_integer_matrix(m)
    n = a.shape[0]
    return (-1) ** n * charpoly(a).coeff(0)
