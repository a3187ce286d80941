"""Dense exact linear algebra over prime fields F_p.

Matrices are int64 numpy arrays with canonical entries in [0, p).  The
modulus is capped below 2**31 so that a product of two entries, and the
difference of such a product with an entry, always fits in int64.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix, csgraph, csr_matrix, spmatrix

from .errors import StructuralError

MAX_MODULUS = 2**31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise StructuralError(f"modulus must be an integer, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))
        if not is_prime(self.p):
            raise StructuralError(f"{self.p} is not prime")
        if self.p >= MAX_MODULUS:
            raise StructuralError(f"modulus {self.p} exceeds the supported bound 2**31")

    def __call__(self, a: int) -> int:
        return int(a) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, self.p - 2, self.p)

    def __str__(self):
        return f"F_{self.p}"


class Matrix:
    """Immutable dense matrix over a prime field."""

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data):
        if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
            arr = data.astype(np.int64) % field.p
        else:
            arr = np.array([[int(v) % field.p for v in row] for row in data], dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise StructuralError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> Matrix:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, size: int) -> Matrix:
        return cls(field, np.eye(size, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise StructuralError("rows have mismatched lengths")
        if cols is not None and cols != width:
            raise StructuralError(f"expected {cols} columns, got {width}")
        return cls(field, rows)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, self.data.T)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.field != other.field:
            raise StructuralError("matrices live over different fields")
        if self.cols != other.rows:
            raise StructuralError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, matmul_mod(self.data, other.data, self.field.p))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"Matrix({self.field}, {self.tolist()})"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product of int64 matrices mod p, chunking the inner dimension to avoid overflow."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[1]
    chunk = max(1, (2**63 - 1) // max(1, (p - 1) ** 2) - 1)
    if inner <= chunk:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, inner, chunk):
        out = (out + (a[:, lo:lo + chunk] @ b[lo:lo + chunk]) % p) % p
    return out


class RREF(NamedTuple):
    reduced: Matrix
    pivot_cols: tuple[int, ...]
    rank: int


def _eliminate(a: np.ndarray, p: int, full: bool) -> list[int]:
    """In-place Gauss-Jordan (full) or forward elimination on a writable int64 array."""
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = (a[r, c:] * inv) % p
        targets = np.flatnonzero(a[:, c]) if full else r + 1 + np.flatnonzero(a[r + 1:, c])
        targets = targets[targets != r]
        if targets.size:
            a[targets, c:] = (a[targets, c:] - np.outer(a[targets, c], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> RREF:
    a = np.array(m.data, dtype=np.int64)
    pivots = _eliminate(a, m.field.p, full=True)
    return RREF(Matrix(m.field, a), tuple(pivots), len(pivots))


def rank(m: Matrix) -> int:
    return len(_eliminate(np.array(m.data, dtype=np.int64), m.field.p, full=False))


def array_rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(_eliminate(np.array(a, dtype=np.int64), p, full=False))


def kernel_basis(m: Matrix) -> Matrix:
    """Right null space; row k sets the k-th free column to 1 and the other free columns to 0."""
    red, pivots, _ = rref(m)
    cols = m.cols
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    p = m.field.p
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red.data[r, f]) % p
    return Matrix(m.field, basis)


def rank_of_vectors(vs: Sequence[Sequence[int]], field: PrimeField) -> int:
    vs = [list(v) for v in vs]
    if not vs:
        return 0
    if len({len(v) for v in vs}) != 1:
        raise StructuralError("vectors have mismatched lengths")
    return rank(Matrix(field, vs))


def sparse_rank(mat: spmatrix, p: int) -> int:
    """Rank of a sparse matrix mod p, summed over the connected blocks of its support."""
    coo = coo_matrix(mat)
    keep = coo.data % p != 0
    rows, cols, data = coo.row[keep], coo.col[keep], coo.data[keep] % p
    if rows.size == 0:
        return 0
    nrows, ncols = coo.shape
    # bipartite graph: rows are nodes 0..nrows-1, columns follow
    graph = csr_matrix(
        (np.ones(rows.size, dtype=np.int8), (rows, cols + nrows)),
        shape=(nrows + ncols, nrows + ncols),
    )
    _, labels = csgraph.connected_components(graph, directed=False)
    row_labels = labels[:nrows]
    col_labels = labels[nrows:]
    comp_rows = np.bincount(row_labels)
    comp_cols = np.bincount(col_labels, minlength=comp_rows.size)
    comp_rows = np.pad(comp_rows, (0, comp_cols.size - comp_rows.size))
    # local index of each row / column inside its component
    row_local = np.empty(nrows, dtype=np.int64)
    order = np.argsort(row_labels, kind="stable")
    starts = np.concatenate([[0], np.cumsum(comp_rows)[:-1]])
    row_local[order] = np.arange(nrows) - starts[row_labels[order]]
    col_local = np.empty(ncols, dtype=np.int64)
    order = np.argsort(col_labels, kind="stable")
    cstarts = np.concatenate([[0], np.cumsum(comp_cols)[:-1]])
    col_local[order] = np.arange(ncols) - cstarts[col_labels[order]]

    entry_comp = row_labels[rows]
    nonempty = np.unique(entry_comp)
    # a connected block with a single row or column has rank exactly one
    thin = (comp_rows[nonempty] == 1) | (comp_cols[nonempty] == 1)
    total = int(thin.sum())
    fat = set(nonempty[~thin].tolist())
    if not fat:
        return total
    by_comp = np.argsort(entry_comp, kind="stable")
    sorted_comp = entry_comp[by_comp]
    bounds = np.searchsorted(sorted_comp, nonempty)
    ends = np.searchsorted(sorted_comp, nonempty, side="right")
    for comp, lo, hi in zip(nonempty.tolist(), bounds.tolist(), ends.tolist()):
        if comp not in fat:
            continue
        idx = by_comp[lo:hi]
        block = np.zeros((comp_rows[comp], comp_cols[comp]), dtype=np.int64)
        block[row_local[rows[idx]], col_local[cols[idx]]] = data[idx]
        total += len(_eliminate(block, p, full=False))
    return total


def solve(m: Matrix, rhs: Sequence[int]) -> list[int] | None:
    """One solution x of m x = rhs (free variables zero), or None if inconsistent."""
    if len(rhs) != m.rows:
        raise StructuralError("right-hand side length does not match row count")
    aug = np.hstack([np.array(m.data), np.array(rhs, dtype=np.int64).reshape(-1, 1) % m.field.p])
    red, pivots, _ = rref(Matrix(m.field, aug))
    if m.cols in pivots:
        return None
    x = [0] * m.cols
    for r, c in enumerate(pivots):
        x[c] = int(red.data[r, -1])
    return x
