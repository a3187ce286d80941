"""Graded Betti numbers as Koszul homology.

beta_{i,j}(M) = dim H_i(K(x_0..x_n) (x) M)_j, where the degree-j strand of
K_i (x) M has basis e_T (x) mu with |T| = i and mu a basis element of M_{j-i}.
Only ranks of the strand differentials are needed, never a minimal
resolution.  Works for any `GradedQuotient`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from .errors import InternalConsistencyError, StructuralError
from .graded import GradedQuotient, PointQuotient
from .linalg import matmul_mod, sparse_rank
from .points import PointConfig, is_nondegenerate


class DegenerateConfigError(StructuralError):
    pass


@dataclass
class KoszulSlice:
    i: int
    j: int
    domain: list[tuple[tuple[int, ...], int]]
    codomain: list[tuple[tuple[int, ...], int]]
    differential: csr_matrix       # len(codomain) x len(domain)


def koszul_slice(q: GradedQuotient, i: int, j: int) -> KoszulSlice:
    """d(e_T (x) mu) = sum_{t in T} (-1)^{pos(t)} e_{T-t} (x) x_t mu."""
    nv = q.nvars
    p = q.field.p
    deg = j - i
    if i < 0 or i > nv or deg < 0:
        return KoszulSlice(i, j, [], [], csr_matrix((0, 0), dtype=np.int64))
    h = q.dim(deg)
    subsets = list(itertools.combinations(range(nv), i))
    domain = [(T, k) for T in subsets for k in range(h)]
    if i == 0:
        return KoszulSlice(i, j, domain, [], csr_matrix((0, len(domain)), dtype=np.int64))
    h_out = q.dim(deg + 1)
    faces = list(itertools.combinations(range(nv), i - 1))
    face_index = {T: k for k, T in enumerate(faces)}
    codomain = [(T, k) for T in faces for k in range(h_out)]
    rows, cols, vals = [], [], []
    if h and h_out:
        blocks = [coo_matrix(q.mult(deg, t)) for t in range(nv)]
        for col_block, T in enumerate(subsets):
            for pos, t in enumerate(T):
                blk = blocks[t]
                if blk.nnz == 0:
                    continue
                row_block = face_index[T[:pos] + T[pos + 1:]]
                rows.append(blk.row + row_block * h_out)
                cols.append(blk.col + col_block * h)
                data = blk.data % p
                vals.append((p - data) % p if pos % 2 else data)
    if rows:
        mat = csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(len(codomain), len(domain)), dtype=np.int64,
        )
        mat.data %= p
    else:
        mat = csr_matrix((len(codomain), len(domain)), dtype=np.int64)
    return KoszulSlice(i, j, domain, codomain, mat)


def composes_to_zero(outer: csr_matrix, inner: csr_matrix, p: int) -> bool:
    if outer.shape[1] != inner.shape[0]:
        raise InternalConsistencyError("consecutive Koszul differentials have incompatible shapes")
    if outer.nnz == 0 or inner.nnz == 0:
        return True
    if (p - 1) ** 2 * outer.shape[1] < 2**62:
        prod = (outer @ inner).tocsr()
        prod.data %= p
        prod.eliminate_zeros()
        return prod.nnz == 0
    return not matmul_mod(outer.toarray(), inner.toarray(), p).any()


class KoszulEngine:
    """Caches strand ranks of the Koszul complex of one graded quotient."""

    def __init__(self, q: GradedQuotient):
        self.q = q
        self._slices: dict[tuple[int, int], KoszulSlice] = {}
        self._ranks: dict[tuple[int, int], int] = {}

    def slice(self, i: int, j: int) -> KoszulSlice:
        key = (i, j)
        if key not in self._slices:
            self._slices[key] = koszul_slice(self.q, i, j)
        return self._slices[key]

    def chain_dim(self, i: int, j: int) -> int:
        if i < 0 or i > self.q.nvars or j < i:
            return 0
        return math.comb(self.q.nvars, i) * self.q.dim(j - i)

    def rank(self, i: int, j: int) -> int:
        """Rank of d_{i,j}: (K_i (x) M)_j -> (K_{i-1} (x) M)_j."""
        if i <= 0 or i > self.q.nvars or j < i:
            return 0
        key = (i, j)
        if key not in self._ranks:
            self._ranks[key] = sparse_rank(self.slice(i, j).differential, self.q.field.p)
        return self._ranks[key]

    def betti(self, i: int, j: int) -> int:
        return self.chain_dim(i, j) - self.rank(i, j) - self.rank(i + 1, j)

    def check_dd(self, i: int, j: int) -> bool:
        if i < 1 or i + 1 > self.q.nvars or j < i + 1:
            return True
        return composes_to_zero(self.slice(i, j).differential, self.slice(i + 1, j).differential,
                                self.q.field.p)


@dataclass
class BettiTable:
    """beta_{i,j} on a finite window; entries outside the window read as 0."""

    values: dict[tuple[int, int], int]
    nvars: int
    window: list[tuple[int, int]] = field(default_factory=list)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.values.get(key, 0)

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.values.items()) if v}

    def __eq__(self, other):
        if isinstance(other, BettiTable):
            return self.nonzero() == other.nonzero()
        if isinstance(other, dict):
            return self.nonzero() == {k: v for k, v in other.items() if v}
        return NotImplemented

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.values.items() if a == i)

    def to_json(self) -> dict:
        return {"betti": [{"i": i, "j": j, "value": v} for (i, j), v in sorted(self.values.items()) if v]}

    @classmethod
    def from_json(cls, obj: dict, nvars: int = 0) -> BettiTable:
        values = {(int(e["i"]), int(e["j"])): int(e["value"]) for e in obj["betti"]}
        return cls(values, nvars)

    def render(self, highlight: tuple[int, int] | None = None) -> str:
        """Macaulay-style layout: column i, row j - i."""
        nz = self.nonzero()
        keys = list(self.values) or [(0, 0)]
        max_i = max(i for i, _ in keys)
        shifts = [j - i for i, j in keys]
        if highlight is not None:
            max_i = max(max_i, highlight[0])
            shifts.append(highlight[1] - highlight[0])
        lo, hi = min(0, min(shifts)), max(shifts)
        if nz:
            hi = max(j - i for i, j in nz)
            if highlight is not None:
                hi = max(hi, highlight[1] - highlight[0])

        def cell(i, j):
            v = self[(i, j)]
            s = str(v) if v else "."
            return f"[{s}]" if highlight == (i, j) else s

        cols = list(range(max_i + 1))
        grid = [["total:"] + [str(self.total(i)) for i in cols]]
        for r in range(lo, hi + 1):
            grid.append([f"{r}:"] + [cell(i, i + r) for i in cols])
        width = max(len(c) for row in grid for c in row[1:]) if grid else 1
        label = max(len(row[0]) for row in grid)
        header = " " * label + " " + " ".join(str(i).rjust(width) for i in cols)
        lines = [header] + [row[0].rjust(label) + " " + " ".join(c.rjust(width) for c in row[1:]) for row in grid]
        return "\n".join(lines)


def hilbert_numerator(q: GradedQuotient, max_deg: int) -> list[int]:
    """Coefficients of HS(t) * (1 - t)^nvars up to t^max_deg."""
    nv = q.nvars
    return [sum((-1) ** k * math.comb(nv, k) * q.hilbert(j - k) for k in range(min(j, nv) + 1))
            for j in range(max_deg + 1)]


def hilbert_identity_holds(table: BettiTable, q: GradedQuotient, max_deg: int) -> bool:
    numerator = hilbert_numerator(q, max_deg)
    for j in range(max_deg + 1):
        alt = sum((-1) ** i * table[(i, j)] for i in range(q.nvars + 1))
        if alt != numerator[j]:
            return False
    return True


def compute_table(engine: KoszulEngine, cells: Iterable[tuple[int, int]], check_dd: bool = True) -> BettiTable:
    cells = sorted(set(cells))
    values = {}
    for i, j in cells:
        if check_dd and not engine.check_dd(i, j):
            raise InternalConsistencyError(f"d o d != 0 at homological degree {i + 1}, internal degree {j}")
        values[(i, j)] = engine.betti(i, j)
    return BettiTable(values, engine.q.nvars, cells)


def structural_violations(table: BettiTable, q: GradedQuotient, max_deg: int,
                          projective_dim: int | None = None) -> list[str]:
    problems = []
    if table[(0, 0)] != 1:
        problems.append(f"beta_00 = {table[(0, 0)]}")
    for (i, j), v in table.values.items():
        if v < 0:
            problems.append(f"negative entry at {(i, j)}")
        if i == 0 and j > 0 and v:
            problems.append(f"beta_0{j} = {v} for a cyclic module")
        if j < i and v:
            problems.append(f"beta_{i},{j} nonzero below the diagonal")
    if projective_dim is not None and not any(v for (i, _), v in table.values.items() if i == projective_dim):
        problems.append(f"no nonzero entry in column {projective_dim}")
    if not hilbert_identity_holds(table, q, max_deg):
        problems.append("alternating Betti sums disagree with the Hilbert series")
    return problems


class _Session:
    """Per-config Koszul data (quotient + engine), reused across queries."""

    def __init__(self, x: PointConfig):
        self.x = x
        self.q = PointQuotient(x)
        self.engine = KoszulEngine(self.q)


_session_cache: dict[PointConfig, _Session] = {}


def _session(x: PointConfig) -> _Session:
    s = _session_cache.get(x)
    if s is None:
        if len(_session_cache) > 64:
            _session_cache.clear()
        s = _session_cache[x] = _Session(x)
    return s


def betti_number(x: PointConfig, i: int, j: int) -> int:
    if not 0 <= i <= x.n + 1:
        raise StructuralError(f"homological index {i} outside 0..{x.n + 1}")
    return _session(x).engine.betti(i, j)


def point_window(n: int, reg: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n + 2) for j in range(i, i + reg + 2)]


def betti_table(x: PointConfig, check: bool = True) -> BettiTable:
    """All beta_{i,j}(S/I(X)) with i <= n+1 and j <= i + reg + 1.

    The top row (j = i + reg + 1) lies past the regularity and must vanish;
    with `check` the structural identities are asserted as well.
    """
    s = _session(x)
    if len(x) == 0:
        raise StructuralError("the empty configuration has no coordinate ring to resolve")
    reg = s.q.regularity_index()
    cells = point_window(x.n, reg)
    table = compute_table(s.engine, cells, check_dd=check)
    if check:
        guard = [(i, i + reg + 1) for i in range(x.n + 2) if table[(i, i + reg + 1)]]
        if guard:
            raise InternalConsistencyError(f"nonzero Betti numbers past the regularity at {guard}")
        problems = structural_violations(table, s.q, x.n + reg + 2,
                                         projective_dim=x.n if is_nondegenerate(x) else None)
        if any(table[(x.n + 1, j)] for j in range(x.n + 1, x.n + reg + 3)):
            problems.append("beta_{n+1,j} nonzero: depth of S/I(X) must be positive")
        if problems:
            raise InternalConsistencyError("; ".join(problems))
    return table


def _require_nondegenerate(x: PointConfig) -> None:
    if not is_nondegenerate(x):
        raise DegenerateConfigError("configuration lies on a hyperplane")


def main_predicate(x: PointConfig) -> bool:
    """beta_{n,n+1}(S/I(X)) != 0."""
    _require_nondegenerate(x)
    return betti_number(x, x.n, x.n + 1) != 0


def isoc_via_betti(x: PointConfig) -> int:
    """Least r >= 1 with beta_{n,n+r} != 0."""
    _require_nondegenerate(x)
    s = _session(x)
    reg = s.q.regularity_index()
    for r in range(1, reg + 2):
        if s.engine.betti(x.n, x.n + r):
            return r
    raise InternalConsistencyError("no nonzero beta_{n,n+r} inside the regularity window")


def table_for(q: GradedQuotient, cells: Iterable[tuple[int, int]],
              check: Callable[[BettiTable], list[str]] | None = None) -> BettiTable:
    table = compute_table(KoszulEngine(q), cells)
    if check is not None:
        problems = check(table)
        if problems:
            raise InternalConsistencyError("; ".join(problems))
    return table
