"""Simplicial complexes, reduced homology, Hochster's formula, and the cycle example.

Conventions: the void complex (no faces) has all reduced homology zero; the
complex {empty face} has H~_{-1} = 1.  Induced subcomplexes of a non-void
complex always contain the empty face.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from .errors import BudgetExceeded, InternalConsistencyError, StructuralError
from .graded import GradedQuotient, monomial_basis
from .koszul import BettiTable, KoszulEngine, compute_table, structural_violations
from .linalg import Matrix, PrimeField, array_rank, rank_of_vectors, solve
from .points import PointConfig

MAX_VERTICES = 10


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: int
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cleaned = []
        for f in self.facets:
            f = tuple(sorted(set(int(v) for v in f)))
            if any(not 0 <= v < self.vertices for v in f):
                raise StructuralError(f"facet {f} uses a vertex outside 0..{self.vertices - 1}")
            cleaned.append(f)
        # drop non-maximal faces so facets are mutually non-contained
        maximal = [f for f in cleaned
                   if not any(set(f) < set(g) for g in cleaned)]
        maximal = sorted(set(maximal), key=lambda f: (len(f), f))
        object.__setattr__(self, "facets", tuple(maximal))

    @classmethod
    def from_json(cls, obj: dict | str) -> SimplicialComplex:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(int(obj["vertices"]), tuple(tuple(f) for f in obj["facets"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed complex JSON: {exc}") from None

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "facets": [list(f) for f in self.facets]}

    @property
    def is_void(self) -> bool:
        return not self.facets

    def faces(self) -> set[frozenset[int]]:
        out: set[frozenset[int]] = set()
        for f in self.facets:
            for k in range(len(f) + 1):
                out.update(frozenset(s) for s in itertools.combinations(f, k))
        return out

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def induced(self, w: Iterable[int]) -> SimplicialComplex:
        w = set(w)
        if self.is_void:
            return self
        facets = [tuple(v for v in f if v in w) for f in self.facets]
        return SimplicialComplex(self.vertices, tuple(facets))


def cycle_complex(m: int) -> SimplicialComplex:
    if m < 3:
        raise StructuralError("a cycle needs at least three vertices")
    return SimplicialComplex(m, tuple((i, (i + 1) % m) for i in range(m)))


def simplex(m: int) -> SimplicialComplex:
    return SimplicialComplex(m, (tuple(range(m)),))


def _faces_by_dim(c: SimplicialComplex) -> dict[int, list[tuple[int, ...]]]:
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for f in c.faces():
        by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
    for q in by_dim:
        by_dim[q].sort()
    return by_dim


def boundary_matrix(c: SimplicialComplex, q: int, field: PrimeField) -> np.ndarray:
    """Augmented boundary map C_q -> C_{q-1}; the empty face spans C_{-1}."""
    by_dim = _faces_by_dim(c)
    src = by_dim.get(q, [])
    dst = by_dim.get(q - 1, [])
    index = {f: k for k, f in enumerate(dst)}
    mat = np.zeros((len(dst), len(src)), dtype=np.int64)
    for col, face in enumerate(src):
        for pos in range(len(face)):
            mat[index[face[:pos] + face[pos + 1:]], col] = 1 if pos % 2 == 0 else field.p - 1
    return mat


def reduced_homology_dims(c: SimplicialComplex, field: PrimeField) -> list[int]:
    """dim H~_q for q = -1 .. dim c (empty list for the void complex)."""
    if c.is_void:
        return []
    by_dim = _faces_by_dim(c)
    top = max(by_dim)
    ranks = {q: array_rank(boundary_matrix(c, q, field), field.p) for q in range(0, top + 2)}
    ranks[-1] = 0
    return [len(by_dim.get(q, [])) - ranks[q] - ranks.get(q + 1, 0) for q in range(-1, top + 1)]


def reduced_homology(c: SimplicialComplex, field: PrimeField, q: int) -> int:
    dims = reduced_homology_dims(c, field)
    k = q + 1
    return dims[k] if 0 <= k < len(dims) else 0


def hochster_betti(c: SimplicialComplex, field: PrimeField, i: int, j: int) -> int:
    """sum over j-subsets W of dim H~_{j-i-1}(Delta_W)."""
    if not 0 <= j <= c.vertices:
        return 0
    return sum(reduced_homology(c.induced(w), field, j - i - 1)
               for w in itertools.combinations(range(c.vertices), j))


def hochster_table(c: SimplicialComplex, field: PrimeField) -> BettiTable:
    values = {}
    for w_size in range(c.vertices + 1):
        for w in itertools.combinations(range(c.vertices), w_size):
            dims = reduced_homology_dims(c.induced(w), field)
            for k, h in enumerate(dims):
                if h:
                    # H~_{q} with q = k - 1 contributes to beta_{i,j}, j = |W|, i = j - q - 1
                    i = w_size - k
                    values[(i, w_size)] = values.get((i, w_size), 0) + h
    cells = sr_window(c.vertices)
    table = {cell: values.get(cell, 0) for cell in cells}
    stray = {k: v for k, v in values.items() if k not in table}
    table.update(stray)
    return BettiTable(table, c.vertices, cells)


def sr_window(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m + 1) for j in range(i, m + 1)]


class StanleyReisnerQuotient(GradedQuotient):
    """k[x_0..x_{m-1}] modulo the monomials supported on non-faces.

    The degree-d basis is the set of face-supported monomials; a product that
    leaves the complex reduces to zero.
    """

    def __init__(self, c: SimplicialComplex, field: PrimeField):
        self.complex = c
        self.field = field
        self.nvars = c.vertices
        self._faces = {sum(1 << v for v in f) for f in c.faces()}
        self._bases: dict[int, list[tuple[int, ...]]] = {}
        self._index: dict[int, dict[tuple[int, ...], int]] = {}

    def _support(self, mon: Sequence[int]) -> int:
        return sum(1 << k for k, e in enumerate(mon) if e)

    def is_standard(self, mon: Sequence[int]) -> bool:
        return self._support(mon) in self._faces

    def basis(self, d: int) -> list[tuple[int, ...]]:
        if d not in self._bases:
            mons = []
            for face in sorted(self._faces):
                verts = [v for v in range(self.nvars) if face >> v & 1]
                k = len(verts)
                if k == 0:
                    if d == 0:
                        mons.append((0,) * self.nvars)
                    continue
                if k > d:
                    continue
                # compositions of d into k positive parts
                for cuts in itertools.combinations(range(1, d), k - 1):
                    parts = [b - a for a, b in zip((0,) + cuts, cuts + (d,))]
                    mon = [0] * self.nvars
                    for v, e in zip(verts, parts):
                        mon[v] = e
                    mons.append(tuple(mon))
            mons.sort(reverse=True)
            self._bases[d] = mons
            self._index[d] = {m: k for k, m in enumerate(mons)}
        return self._bases[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d)) if d >= 0 else 0

    def mult(self, d: int, t: int) -> csr_matrix:
        src = self.basis(d)
        self.basis(d + 1)
        index = self._index[d + 1]
        rows, cols = [], []
        for col, mon in enumerate(src):
            bumped = list(mon)
            bumped[t] += 1
            k = index.get(tuple(bumped))
            if k is not None:
                rows.append(k)
                cols.append(col)
        return csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)),
                          shape=(self.dim(d + 1), len(src)))

    def ideal_slice_monomials(self, d: int) -> list[tuple[int, ...]]:
        """Degree-d monomials of the Stanley-Reisner ideal (support is a non-face)."""
        return [m for m in monomial_basis(self.nvars - 1, d) if not self.is_standard(m)]


def sr_betti_via_koszul(c: SimplicialComplex, field: PrimeField, check: bool = True,
                        max_chain: int = 200_000) -> BettiTable:
    if c.vertices > MAX_VERTICES:
        raise BudgetExceeded(f"Stanley-Reisner tables are limited to {MAX_VERTICES} vertices")
    q = StanleyReisnerQuotient(c, field)
    engine = KoszulEngine(q)
    cells = sr_window(c.vertices)
    total = sum(engine.chain_dim(i, j) for i, j in cells)
    if total > max_chain:
        raise BudgetExceeded(f"Koszul strands would hold {total} basis vectors (budget {max_chain})")
    table = compute_table(engine, cells, check_dd=check)
    if check and not c.is_void:
        problems = structural_violations(table, q, c.vertices)
        if problems:
            raise InternalConsistencyError("; ".join(problems))
    return table


def cyclic_difference_vectors(s: int, field: PrimeField) -> list[list[int]]:
    """e_i - e_{i+1} in k^s, indices taken cyclically."""
    vecs = []
    for i in range(s):
        v = [0] * s
        v[i] = (v[i] + 1) % field.p
        v[(i + 1) % s] = (v[(i + 1) % s] - 1) % field.p
        vecs.append(v)
    return vecs


def cycle_section_points(n: int, field: PrimeField) -> PointConfig:
    """The n+2 points e_i - e_{i+1} of the hyperplane sum(x) = 0, in the basis f_k = e_{k-1} - e_k."""
    if n < 1:
        raise StructuralError("n must be at least 1")
    m = n + 2
    basis = [[0] * m for _ in range(n + 1)]
    for k in range(1, n + 2):
        basis[k - 1][k - 1] = 1
        basis[k - 1][k] = field.p - 1
    f = Matrix(field, basis).T          # columns are the f_k
    coords = []
    for v in cyclic_difference_vectors(m, field):
        sol = solve(f, v)
        if sol is None:
            raise InternalConsistencyError("section point outside the hyperplane")
        coords.append(sol)
    return PointConfig.from_coords(field, n, coords)


def proper_subsets_independent(vectors: Sequence[Sequence[int]], field: PrimeField) -> bool:
    """Every (s-1)-subset independent, and the whole family of s vectors dependent."""
    s = len(vectors)
    if s < 2:
        raise StructuralError("need at least two vectors")
    for sub in itertools.combinations(vectors, s - 1):
        if rank_of_vectors(sub, field) != s - 1:
            return False
    return rank_of_vectors(vectors, field) == s - 1


def cyclic_differences_check(s: int, field: PrimeField) -> bool:
    return proper_subsets_independent(cyclic_difference_vectors(s, field), field)
