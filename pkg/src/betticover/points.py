"""Finite sets of points in projective n-space over F_p."""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicatePointError, FieldTooSmall, ParseError, StructuralError
from .linalg import Matrix, PrimeField, rank, rank_of_vectors


def normalize(coords: Iterable[int], field: PrimeField) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1."""
    v = [int(c) % field.p for c in coords]
    for c in v:
        if c:
            inv = field.inv(c)
            return tuple(x * inv % field.p for x in v)
    raise StructuralError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]

    @classmethod
    def from_coords(cls, coords: Iterable[int], field: PrimeField) -> ProjPoint:
        return cls(normalize(coords, field))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class PointConfig:
    """An ordered, duplicate-free list of points of P^n over F_p."""

    field: PrimeField
    n: int
    points: tuple[ProjPoint, ...]

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError(f"projective dimension must be at least 1, got {self.n}")
        pts = []
        for k, pt in enumerate(self.points):
            if not isinstance(pt, ProjPoint):
                pt = ProjPoint.from_coords(pt, self.field)
            if len(pt) != self.n + 1:
                raise StructuralError(f"point {k} has {len(pt)} coordinates, expected {self.n + 1}")
            if pt.coords != normalize(pt.coords, self.field):
                pt = ProjPoint.from_coords(pt.coords, self.field)
            pts.append(pt)
        seen: dict[tuple[int, ...], int] = {}
        for k, pt in enumerate(pts):
            if pt.coords in seen:
                raise DuplicatePointError(seen[pt.coords], k)
            seen[pt.coords] = k
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def from_coords(cls, field: PrimeField | int, n: int, rows: Iterable[Sequence[int]]) -> PointConfig:
        if isinstance(field, int):
            field = PrimeField(field)
        return cls(field, n, tuple(ProjPoint.from_coords(r, field) for r in rows))

    @property
    def p(self) -> int:
        return self.field.p

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def coordinate_matrix(self) -> Matrix:
        return Matrix.from_rows(self.field, [pt.coords for pt in self.points], cols=self.n + 1)

    def array(self) -> np.ndarray:
        return np.array([pt.coords for pt in self.points], dtype=np.int64).reshape(len(self), self.n + 1)

    def subset(self, indices: Iterable[int]) -> PointConfig:
        return PointConfig(self.field, self.n, tuple(self.points[i] for i in indices))

    def delete(self, index: int) -> PointConfig:
        return self.subset(i for i in range(len(self)) if i != index)

    def extend(self, rows: Iterable[Sequence[int]]) -> PointConfig:
        extra = tuple(ProjPoint.from_coords(r, self.field) for r in rows)
        return PointConfig(self.field, self.n, self.points + extra)

    def transform(self, g: Matrix) -> PointConfig:
        """Apply the linear change of coordinates v -> g v to every point."""
        if g.shape != (self.n + 1, self.n + 1):
            raise StructuralError("coordinate change has the wrong size")
        return PointConfig.from_coords(self.field, self.n, (g @ self.coordinate_matrix().T).T.tolist())

    def to_text(self) -> str:
        lines = [f"p={self.p} n={self.n}"]
        lines += [" ".join(map(str, pt.coords)) for pt in self.points]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "points": [list(pt.coords) for pt in self.points]}

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _header_value(token: str, key: str) -> int:
    name, sep, value = token.partition("=")
    if not sep or name.strip() != key:
        raise ParseError(f"expected '{key}=<int>' in header, got {token!r}")
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"header value for {key} is not an integer: {value!r}") from None


def _build(p: int, n: int, rows: list[list[int]]) -> PointConfig:
    try:
        field = PrimeField(p)
    except StructuralError as exc:
        raise ParseError(str(exc)) from None
    if n < 1:
        raise ParseError(f"projective dimension must be at least 1, got {n}")
    normalized = []
    for k, row in enumerate(rows):
        if len(row) != n + 1:
            raise ParseError(f"point {k} has {len(row)} coordinates, expected {n + 1}")
        if all(c % p == 0 for c in row):
            raise ParseError(f"point {k} is the zero vector")
        normalized.append(ProjPoint.from_coords(row, field))
    return PointConfig(field, n, tuple(normalized))


def parse_config(text: bytes | str) -> PointConfig:
    """Parse the plain-text point format, or its JSON equivalent."""
    if isinstance(text, bytes):
        text = text.decode()
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
            rows = [[int(c) for c in r] for r in obj["points"]]
            return _build(int(obj["p"]), int(obj["n"]), rows)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed JSON point file: {exc}") from None
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty point file")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"malformed header {lines[0]!r}; expected 'p=<prime> n=<dim>'")
    p = _header_value(header[0], "p")
    n = _header_value(header[1], "n")
    rows = []
    for ln in lines[1:]:
        try:
            rows.append([int(tok) for tok in ln.split()])
        except ValueError:
            raise ParseError(f"non-integer coordinate in line {ln!r}") from None
    return _build(p, n, rows)


def load_config(path) -> PointConfig:
    with open(path, "rb") as fh:
        return parse_config(fh.read())


def is_nondegenerate(x: PointConfig) -> bool:
    if len(x) == 0:
        return False
    return rank(x.coordinate_matrix()) == x.n + 1


def is_linearly_general(x: PointConfig) -> bool:
    k = min(len(x), x.n + 1)
    coords = [pt.coords for pt in x.points]
    return all(rank_of_vectors(sub, x.field) == k for sub in itertools.combinations(coords, k))


def count_projective_points(p: int, dim: int) -> int:
    return (p ** (dim + 1) - 1) // (p - 1)


def moment_curve_config(field: PrimeField, n: int, params: Sequence[int]) -> PointConfig:
    reduced = [int(t) % field.p for t in params]
    if len(set(reduced)) != len(reduced):
        raise StructuralError("moment curve parameters must be distinct in F_p")
    return PointConfig.from_coords(field, n, ([pow(t, e, field.p) for e in range(n + 1)] for t in reduced))


def _random_vector(rng: np.random.Generator, p: int, length: int) -> list[int]:
    while True:
        v = rng.integers(0, p, size=length).tolist()
        if any(v):
            return v


def random_invertible(field: PrimeField, size: int, rng: np.random.Generator) -> Matrix:
    while True:
        g = Matrix(field, rng.integers(0, field.p, size=(size, size)))
        if rank(g) == size:
            return g


def _points_spanning(field: PrimeField, basis: np.ndarray, count: int, rng: np.random.Generator,
                     max_tries: int = 1000) -> list[tuple[int, ...]]:
    """`count` distinct projective points in the span of the rows of `basis` that together span it."""
    dim = basis.shape[0]
    for _ in range(max_tries):
        found: dict[tuple[int, ...], None] = {}
        # the basis itself guarantees spanning; fill the rest with random combinations
        order = rng.permutation(dim).tolist()
        for k in order[:count]:
            found[normalize(basis[k].tolist(), field)] = None
        attempts = 0
        while len(found) < count and attempts < 50 * count + 100:
            coeffs = np.array(_random_vector(rng, field.p, dim), dtype=np.int64)
            vec = (coeffs @ basis) % field.p
            found.setdefault(normalize(vec.tolist(), field), None)
            attempts += 1
        pts = list(found)
        if len(pts) == count and rank_of_vectors(pts, field) == dim:
            return pts
    raise FieldTooSmall("could not sample enough distinct spanning points")


def two_plane_config(field: PrimeField, n: int, a: int, b: int, counts: tuple[int, int],
                     rng: np.random.Generator) -> PointConfig:
    """Points on a random a-plane U and a disjoint random b-plane V with a + b = n - 1.

    The first `counts[0]` points span U and the remaining `counts[1]` span V.
    """
    c1, c2 = counts
    if a < 0 or b < 0 or a + b != n - 1:
        raise StructuralError(f"need a, b >= 0 with a + b = n - 1, got a={a}, b={b}, n={n}")
    if c1 < a + 1 or c2 < b + 1:
        raise StructuralError(f"counts {counts} cannot span planes of dimensions {a} and {b}")
    if c1 > count_projective_points(field.p, a) or c2 > count_projective_points(field.p, b):
        raise FieldTooSmall(f"F_{field.p} has too few points on the requested planes")
    g = random_invertible(field, n + 1, rng).data
    # rows of g form a basis of k^{n+1}; splitting them gives complementary subspaces
    u_pts = _points_spanning(field, g[: a + 1], c1, rng)
    v_pts = _points_spanning(field, g[a + 1:], c2, rng)
    return PointConfig.from_coords(field, n, u_pts + v_pts)


def random_config(field: PrimeField, n: int, size: int, rng: np.random.Generator) -> PointConfig:
    if size < 1:
        raise StructuralError("size must be at least 1")
    if size > count_projective_points(field.p, n):
        raise FieldTooSmall(f"P^{n} over F_{field.p} has fewer than {size} points")
    found: dict[tuple[int, ...], None] = {}
    while len(found) < size:
        found.setdefault(normalize(_random_vector(rng, field.p, n + 1), field), None)
    return PointConfig.from_coords(field, n, list(found))


def random_with_collinear(field: PrimeField, n: int, size: int, extra: int,
                          rng: np.random.Generator) -> PointConfig:
    """`size - extra` random points plus `extra` further points on the line through two of them."""
    base = random_config(field, n, max(2, size - extra), rng)
    i, j = rng.choice(len(base), size=2, replace=False).tolist()
    u = np.array(base.points[i].coords, dtype=np.int64)
    v = np.array(base.points[j].coords, dtype=np.int64)
    have = {pt.coords for pt in base.points}
    new: list[tuple[int, ...]] = []
    if extra > field.p - 1:
        raise FieldTooSmall("line too short for the requested extra points")
    while len(base) + len(new) < size:
        t = int(rng.integers(1, field.p))
        pt = normalize(((u + t * v) % field.p).tolist(), field)
        if pt not in have:
            have.add(pt)
            new.append(pt)
    return base.extend(new)
