"""Rank-oracle matroids and the two-flat cover decision.

Element sets are passed around as iterables of indices in the public API and
as int bitmasks internally.  Rank values are memoized per matroid instance.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BudgetExceeded, StructuralError
from .linalg import PrimeField
from .points import PointConfig

EXPLICIT_MAX_GROUND = 16
ENUMERATION_MAX_GROUND = 20


def to_mask(elements: Iterable[int], size: int) -> int:
    mask = 0
    for e in elements:
        if not 0 <= e < size:
            raise StructuralError(f"element {e} outside ground set of size {size}")
        mask |= 1 << e
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


class Matroid:
    """Base class: subclasses provide `_compute_rank(mask)`."""

    def __init__(self, size: int, labels: Sequence[int] | None = None):
        self.size = size
        self.labels = tuple(labels) if labels is not None else tuple(range(size))
        self._rank_cache: dict[int, int] = {0: 0}

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def rank_mask(self, mask: int) -> int:
        r = self._rank_cache.get(mask)
        if r is None:
            r = self._compute_rank(mask)
            self._rank_cache[mask] = r
        return r

    def _compute_rank(self, mask: int) -> int:
        raise NotImplementedError

    def rank(self, s: Iterable[int] = ()) -> int:
        return self.rank_mask(to_mask(s, self.size))

    def full_rank(self) -> int:
        return self.rank_mask(self.full_mask)

    def delete(self, x: int) -> Matroid:
        raise NotImplementedError


class LinearMatroid(Matroid):
    """Column matroid of a list of coordinate vectors over F_p."""

    def __init__(self, field: PrimeField, vectors: Sequence[Sequence[int]], labels: Sequence[int] | None = None):
        vectors = [tuple(int(c) % field.p for c in v) for v in vectors]
        if len({len(v) for v in vectors}) > 1:
            raise StructuralError("vectors have mismatched lengths")
        super().__init__(len(vectors), labels)
        self.field = field
        self.vectors = tuple(vectors)
        # echelon rows (pivot, normalized row) spanning each cached subset
        self._echelon: dict[int, tuple[tuple[int, tuple[int, ...]], ...]] = {0: ()}

    @classmethod
    def from_points(cls, x: PointConfig) -> LinearMatroid:
        return cls(x.field, [pt.coords for pt in x.points])

    def _reduce(self, rows, v: tuple[int, ...]) -> list[int]:
        p = self.field.p
        w = list(v)
        for piv, row in rows:
            c = w[piv]
            if c:
                w = [(a - c * b) % p for a, b in zip(w, row)]
        return w

    def _basis_rows(self, mask: int):
        rows = self._echelon.get(mask)
        if rows is not None:
            return rows
        top = mask.bit_length() - 1
        rest = self._basis_rows(mask & ~(1 << top))
        w = self._reduce(rest, self.vectors[top])
        piv = next((k for k, c in enumerate(w) if c), None)
        if piv is None:
            rows = rest
        else:
            inv = pow(w[piv], self.field.p - 2, self.field.p)
            rows = rest + ((piv, tuple(c * inv % self.field.p for c in w)),)
        self._echelon[mask] = rows
        return rows

    def _compute_rank(self, mask: int) -> int:
        return len(self._basis_rows(mask))

    def delete(self, x: int) -> LinearMatroid:
        if not 0 <= x < self.size:
            raise StructuralError(f"element {x} outside ground set of size {self.size}")
        keep = [k for k in range(self.size) if k != x]
        return LinearMatroid(self.field, [self.vectors[k] for k in keep], [self.labels[k] for k in keep])

    def __repr__(self):
        return f"LinearMatroid({self.field}, {len(self.vectors)} vectors)"


class ExplicitMatroid(Matroid):
    """Matroid given by its independent sets (downward closure applied)."""

    def __init__(self, size: int, independent_sets: Iterable[Iterable[int]], labels: Sequence[int] | None = None,
                 validate: bool = True, seed: int = 0):
        if size > EXPLICIT_MAX_GROUND:
            raise BudgetExceeded(f"explicit matroids are limited to {EXPLICIT_MAX_GROUND} elements")
        super().__init__(size, labels)
        indep = {0}
        for s in independent_sets:
            mask = to_mask(s, size)
            if mask in indep:
                continue
            bits = from_mask(mask)
            for k in range(len(bits) + 1):
                for sub in itertools.combinations(bits, k):
                    indep.add(to_mask(sub, size))
        self.independent = frozenset(indep)
        if validate:
            problem = self.axiom_violation(seed=seed)
            if problem:
                raise StructuralError(f"not a matroid: {problem}")

    @classmethod
    def from_json(cls, obj: dict | str, validate: bool = True) -> ExplicitMatroid:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(int(obj["ground"]), obj["independent_sets"], validate=validate)
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed matroid JSON: {exc}") from None

    def to_json(self) -> dict:
        maximal = [m for m in self.independent if not any(m != o and m & o == m for o in self.independent)]
        return {"ground": self.size, "independent_sets": sorted(list(from_mask(m)) for m in maximal)}

    def _compute_rank(self, mask: int) -> int:
        if mask in self.independent:
            return bin(mask).count("1")
        best = 0
        m = mask
        while m:
            low = m & -m
            best = max(best, self.rank_mask(mask & ~low))
            m &= ~low
        return best

    def axiom_violation(self, samples: int = 1000, seed: int = 0) -> str | None:
        """Check rank axioms; exhaustive for up to 8 elements, sampled above."""
        full = self.full_mask
        r = self.rank_mask
        if r(0) != 0:
            return "rank of the empty set is nonzero"
        if self.size <= 8:
            masks = range(full + 1)
            for a in masks:
                if r(a) > bin(a).count("1"):
                    return f"r({from_mask(a)}) exceeds its size"
                for e in range(self.size):
                    if not a >> e & 1 and r(a | 1 << e) < r(a):
                        return f"rank not monotone at {from_mask(a)} + {e}"
            pairs = ((a, b) for a in masks for b in masks if a < b)
        else:
            rng = random.Random(seed)
            pairs = [(rng.randint(0, full), rng.randint(0, full)) for _ in range(samples)]
            for a, _ in pairs:
                if r(a) > bin(a).count("1"):
                    return f"r({from_mask(a)}) exceeds its size"
                for e in range(self.size):
                    if not a >> e & 1 and r(a | 1 << e) < r(a):
                        return f"rank not monotone at {from_mask(a)} + {e}"
        for a, b in pairs:
            if r(a | b) + r(a & b) > r(a) + r(b):
                return f"submodularity fails for {from_mask(a)}, {from_mask(b)}"
        return None

    def delete(self, x: int) -> ExplicitMatroid:
        if not 0 <= x < self.size:
            raise StructuralError(f"element {x} outside ground set of size {self.size}")

        def squeeze(mask):
            low = mask & ((1 << x) - 1)
            return low | (mask >> (x + 1)) << x

        sets = [from_mask(squeeze(m)) for m in self.independent if not m >> x & 1]
        labels = [self.labels[k] for k in range(self.size) if k != x]
        return ExplicitMatroid(self.size - 1, sets, labels, validate=False)


def uniform_matroid(rank_: int, size: int) -> ExplicitMatroid:
    return ExplicitMatroid(size, itertools.combinations(range(size), min(rank_, size)))


def rank(m: Matroid, s: Iterable[int]) -> int:
    return m.rank(s)


def closure(m: Matroid, s: Iterable[int]) -> tuple[int, ...]:
    mask = to_mask(s, m.size)
    r = m.rank_mask(mask)
    return tuple(x for x in range(m.size) if m.rank_mask(mask | 1 << x) == r)


def is_independent(m: Matroid, s: Iterable[int]) -> bool:
    mask = to_mask(s, m.size)
    return m.rank_mask(mask) == bin(mask).count("1")


@dataclass(frozen=True)
class Circuit:
    elements: tuple[int, ...]


def _is_circuit_mask(m: Matroid, mask: int) -> bool:
    k = bin(mask).count("1")
    if m.rank_mask(mask) == k:
        return False
    bits = from_mask(mask)
    return all(m.rank_mask(mask & ~(1 << e)) == k - 1 for e in bits)


def circuits(m: Matroid, max_size: int | None = None) -> list[Circuit]:
    if m.size > ENUMERATION_MAX_GROUND:
        raise BudgetExceeded(f"circuit enumeration is limited to {ENUMERATION_MAX_GROUND} elements")
    max_size = m.size if max_size is None else min(max_size, m.size)
    found = []
    for k in range(1, max_size + 1):
        for sub in itertools.combinations(range(m.size), k):
            if _is_circuit_mask(m, to_mask(sub, m.size)):
                found.append(Circuit(sub))
    found.sort(key=lambda c: c.elements)
    return found


def fundamental_circuit(m: Matroid, basis: Iterable[int], x: int) -> Circuit:
    bmask = to_mask(basis, m.size)
    if not 0 <= x < m.size:
        raise StructuralError(f"element {x} outside ground set of size {m.size}")
    if bmask >> x & 1:
        raise StructuralError(f"element {x} already lies in the basis")
    if m.rank_mask(bmask) != bin(bmask).count("1"):
        raise StructuralError("basis is not independent")
    if m.rank_mask(bmask) != m.full_rank():
        raise StructuralError("basis does not span the matroid")
    # y belongs to the circuit exactly when x escapes cl(basis - y)
    members = [x]
    for y in from_mask(bmask):
        rest = bmask & ~(1 << y)
        if m.rank_mask(rest | 1 << x) > m.rank_mask(rest):
            members.append(y)
    return Circuit(tuple(sorted(members)))


@dataclass(frozen=True)
class CoverCertificate:
    """A partition of the ground set into two parts whose closures cover it."""

    part1: tuple[int, ...]
    part2: tuple[int, ...]
    r1: int
    r2: int
    t: int
    basis1: tuple[tuple[int, ...], ...] = ()
    basis2: tuple[tuple[int, ...], ...] = ()

    @property
    def a(self) -> int:
        return max(self.r1, 1) - 1

    @property
    def b(self) -> int:
        return max(self.r2, 1) - 1

    def to_json(self) -> dict:
        return {
            "part1": list(self.part1), "part2": list(self.part2),
            "r1": self.r1, "r2": self.r2, "a": self.a, "b": self.b, "t": self.t,
            "basis1": [list(v) for v in self.basis1], "basis2": [list(v) for v in self.basis2],
        }


def _flat_basis(m: Matroid, mask: int) -> tuple[tuple[int, ...], ...]:
    if not isinstance(m, LinearMatroid):
        return ()
    chosen = 0
    for e in from_mask(mask):
        if m.rank_mask(chosen | 1 << e) > m.rank_mask(chosen):
            chosen |= 1 << e
    return tuple(m.vectors[e] for e in from_mask(chosen))


def is_Dt(m: Matroid, t: int) -> CoverCertificate | None:
    """Cheapest two-part partition with r(S1) + r(S2) <= t + 1, or None.

    A part of rank zero (only loops) is charged as rank one: a flat of rank
    one can always absorb it.  Ties are broken by the lexicographically
    least assignment vector, element 0 always landing in part 1.
    """
    size = m.size
    if size < 2:
        raise StructuralError("the cover property needs at least two elements")
    if t < 1:
        raise StructuralError("t must be at least 1")
    floor = max(m.full_rank(), 2)  # r1 + r2 >= r(E) by submodularity
    rank_mask = m.rank_mask
    best_cost = t + 2
    best: tuple[int, int] | None = None

    def cost(m1: int, m2: int) -> int:
        return max(rank_mask(m1), 1) + max(rank_mask(m2), 1)

    def search(k: int, m1: int, m2: int) -> bool:
        nonlocal best_cost, best
        c = cost(m1, m2)
        if c >= best_cost:
            return False
        if k == size:
            if m2:
                best_cost, best = c, (m1, m2)
                return c <= floor
            return False
        bit = 1 << k
        if search(k + 1, m1 | bit, m2):
            return True
        return search(k + 1, m1, m2 | bit)

    search(1, 1, 0)
    if best is None:
        return None
    m1, m2 = best
    return CoverCertificate(from_mask(m1), from_mask(m2), rank_mask(m1), rank_mask(m2), t,
                            _flat_basis(m, m1), _flat_basis(m, m2))


def delete(m: Matroid, x: int) -> Matroid:
    return m.delete(x)


def is_uniform(m: Matroid, r: int) -> bool:
    if m.full_rank() != r:
        return False
    k = min(r, m.size)
    return all(m.rank_mask(to_mask(s, m.size)) == k for s in itertools.combinations(range(m.size), k))


HYPOTHESIS_FAILS = "hypothesis_fails"
CONCLUSION_UNIFORM = "conclusion_uniform"
COUNTEREXAMPLE = "COUNTEREXAMPLE"


@dataclass
class DeletionVerdict:
    verdict: str
    size: int
    n: int
    certificate: CoverCertificate | None
    deletions_covered: list[bool] = field(default_factory=list)
    uniform: bool | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict, "size": self.size, "n": self.n,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "deletions_covered": self.deletions_covered, "uniform": self.uniform,
        }


def check_deletion_theorem(m: Matroid, n: int) -> DeletionVerdict:
    """Test: not D_n, every single-element deletion D_n  =>  M is U_{n+2}^{n+1}."""
    if m.full_rank() != n + 1:
        raise StructuralError(f"matroid has rank {m.full_rank()}, expected {n + 1}")
    if m.size < 3:
        raise StructuralError("deletion check needs at least three elements")
    cert = is_Dt(m, n)
    if cert is not None:
        return DeletionVerdict(HYPOTHESIS_FAILS, m.size, n, cert)
    covered = []
    for x in range(m.size):
        covered.append(is_Dt(m.delete(x), n) is not None)
        if not covered[-1]:
            return DeletionVerdict(HYPOTHESIS_FAILS, m.size, n, None, covered)
    uniform = m.size == n + 2 and is_uniform(m, n + 1)
    verdict = CONCLUSION_UNIFORM if uniform else COUNTEREXAMPLE
    return DeletionVerdict(verdict, m.size, n, None, covered, uniform)


def verify_circuit_elimination(m: Matroid, budget: int = 1 << ENUMERATION_MAX_GROUND) -> bool:
    """Strong-enough circuit elimination check over all enumerated circuits."""
    if (1 << m.size) > budget:
        raise BudgetExceeded(f"2^{m.size} subsets exceed the budget {budget}")
    masks = [to_mask(c.elements, m.size) for c in circuits(m)]
    for c1, c2 in itertools.combinations(masks, 2):
        common = c1 & c2
        union = c1 | c2
        for x in from_mask(common):
            target = union & ~(1 << x)
            if not any(c & target == c for c in masks):
                return False
    return True
