"""Graded pieces of S = F_p[x_0..x_n] and of the coordinate ring S/I(X).

Every slice I(X)_d is computed as the kernel of the evaluation map on the
degree-d monomials, so no Groebner bases appear: the graded-lex order only
names basis vectors.  A monomial is *standard* in degree d when its
evaluation column is independent of the columns of all later monomials;
these monomials are exactly the non-pivots of I(X)_d in reduced echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from .errors import FieldTooSmall, NotNonzerodivisor, StructuralError
from .linalg import Matrix, PrimeField, array_rank, kernel_basis, rref
from .points import PointConfig

Monomial = tuple[int, ...]


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[Monomial, ...]:
    """Degree-d monomials in x_0..x_n, graded-lex with x_0 > x_1 > ... > x_n."""
    if d < 0:
        raise StructuralError("degree must be nonnegative")

    def rec(nvars: int, deg: int):
        if nvars == 1:
            yield (deg,)
            return
        for first in range(deg, -1, -1):
            for rest in rec(nvars - 1, deg - first):
                yield (first,) + rest

    return tuple(rec(n + 1, d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[Monomial, int]:
    return {m: k for k, m in enumerate(monomial_basis(n, d))}


def format_monomial(m: Monomial) -> str:
    parts = [f"x_{k}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(m) if e]
    return "*".join(parts) or "1"


def evaluation_matrix(x: PointConfig, d: int) -> np.ndarray:
    """Row P holds every degree-d monomial evaluated at the normalized representative of P."""
    mons = np.array(monomial_basis(x.n, d), dtype=np.int64).reshape(-1, x.n + 1)
    pts = x.array()
    p = x.p
    out = np.ones((len(x), len(mons)), dtype=np.int64)
    for k in range(x.n + 1):
        powers = np.ones((len(x), d + 1), dtype=np.int64)
        for e in range(1, d + 1):
            powers[:, e] = powers[:, e - 1] * pts[:, k] % p
        out = out * powers[:, mons[:, k]] % p
    return out


@dataclass(frozen=True)
class QuotientBasis:
    """Standard-monomial basis of (S/I)_d and the normal-form map onto it."""

    degree: int
    monomials: tuple[Monomial, ...]
    standard: tuple[int, ...]          # indices into `monomials`
    reduction: np.ndarray              # len(monomials) x len(standard)

    @property
    def dim(self) -> int:
        return len(self.standard)

    @property
    def standard_monomials(self) -> tuple[Monomial, ...]:
        return tuple(self.monomials[k] for k in self.standard)


@dataclass(frozen=True)
class IdealSlice:
    degree: int
    basis: Matrix                     # rows span I_d, in reduced echelon form
    pivots: tuple[int, ...]
    monomials: tuple[Monomial, ...]

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivot_monomials(self) -> tuple[Monomial, ...]:
        return tuple(self.monomials[k] for k in self.pivots)


def quotient_basis(x: PointConfig, d: int) -> QuotientBasis:
    mons = monomial_basis(x.n, d)
    total = len(mons)
    ev = evaluation_matrix(x, d)
    red, pivots, rk = rref(Matrix(x.field, ev[:, ::-1]))
    # pivot in the reversed order <-> column independent of everything after it
    std_desc = [total - 1 - c for c in pivots]
    standard = tuple(sorted(std_desc))
    slot = {m: k for k, m in enumerate(standard)}
    reduction = np.zeros((total, rk), dtype=np.int64)
    for row, m in enumerate(std_desc):
        reduction[:, slot[m]] = red.data[row, ::-1]
    return QuotientBasis(d, mons, standard, reduction)


def ideal_slice_from_quotient(q: QuotientBasis, field: PrimeField) -> IdealSlice:
    std = set(q.standard)
    rows = []
    pivots = []
    for m in range(len(q.monomials)):
        if m in std:
            continue
        row = np.zeros(len(q.monomials), dtype=np.int64)
        row[m] = 1
        row[list(q.standard)] = (-q.reduction[m]) % field.p
        rows.append(row)
        pivots.append(m)
    data = np.array(rows, dtype=np.int64).reshape(len(rows), len(q.monomials))
    return IdealSlice(q.degree, Matrix(field, data), tuple(pivots), q.monomials)


def ideal_slice(x: PointConfig, d: int) -> IdealSlice:
    return ideal_slice_from_quotient(quotient_basis(x, d), x.field)


def ideal_slice_via_kernel(x: PointConfig, d: int) -> IdealSlice:
    """Same slice computed as the RREF of the evaluation kernel; used as a cross-check."""
    ker = kernel_basis(Matrix(x.field, evaluation_matrix(x, d)))
    red, pivots, rk = rref(ker)
    return IdealSlice(d, Matrix(x.field, red.data[:rk]), pivots, monomial_basis(x.n, d))


class GradedQuotient:
    """A standard graded quotient of a polynomial ring, seen through its graded pieces.

    Subclasses supply `dim(d)` and `mult(d, t)`, the matrix of multiplication
    by x_t from degree d to degree d + 1 in the chosen bases.
    """

    field: PrimeField
    nvars: int

    def dim(self, d: int) -> int:
        raise NotImplementedError

    def mult(self, d: int, t: int) -> csr_matrix:
        raise NotImplementedError

    def hilbert(self, d: int) -> int:
        return self.dim(d) if d >= 0 else 0


class PointQuotient(GradedQuotient):
    """The coordinate ring S/I(X) of a point configuration."""

    def __init__(self, x: PointConfig):
        self.x = x
        self.field = x.field
        self.nvars = x.n + 1
        self._bases: dict[int, QuotientBasis] = {}
        self._mult: dict[tuple[int, int], csr_matrix] = {}
        self._reg: int | None = None

    def basis(self, d: int) -> QuotientBasis:
        if d not in self._bases:
            self._bases[d] = quotient_basis(self.x, d)
        return self._bases[d]

    def dim(self, d: int) -> int:
        return self.basis(d).dim if d >= 0 else 0

    def mult_dense(self, d: int, t: int) -> np.ndarray:
        src = self.basis(d)
        dst = self.basis(d + 1)
        index = monomial_index(self.x.n, d + 1)
        rows = []
        for mon in src.standard_monomials:
            bumped = list(mon)
            bumped[t] += 1
            rows.append(dst.reduction[index[tuple(bumped)]])
        return np.array(rows, dtype=np.int64).reshape(src.dim, dst.dim).T

    def mult(self, d: int, t: int) -> csr_matrix:
        key = (d, t)
        if key not in self._mult:
            self._mult[key] = csr_matrix(self.mult_dense(d, t))
        return self._mult[key]

    def regularity_index(self) -> int:
        """Least d with HF(d) = |X|."""
        if self._reg is None:
            d = 0
            while self.dim(d) != len(self.x):
                d += 1
            self._reg = d
        return self._reg

    def hilbert(self, d: int) -> int:
        # HF of reduced points is nondecreasing and stays at |X| once it gets there
        if d < 0:
            return 0
        if d >= self.regularity_index():
            return len(self.x)
        return self.dim(d)


class PolynomialRing(GradedQuotient):
    """S itself (the zero ideal); every monomial is standard."""

    def __init__(self, field: PrimeField, nvars: int):
        self.field = field
        self.nvars = nvars

    def dim(self, d: int) -> int:
        return len(monomial_basis(self.nvars - 1, d)) if d >= 0 else 0

    def mult(self, d: int, t: int) -> csr_matrix:
        src = monomial_basis(self.nvars - 1, d)
        index = monomial_index(self.nvars - 1, d + 1)
        rows = []
        for mon in src:
            bumped = list(mon)
            bumped[t] += 1
            rows.append(index[tuple(bumped)])
        cols = np.arange(len(src))
        return csr_matrix((np.ones(len(src), dtype=np.int64), (rows, cols)), shape=(len(index), len(src)))


def hilbert_function(x: PointConfig, d: int) -> int:
    return quotient_basis(x, d).dim


def regularity_index(x: PointConfig) -> int:
    return PointQuotient(x).regularity_index()


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not any(self.coefficients):
            raise StructuralError("a linear form must be nonzero")

    def __call__(self, point: Sequence[int], p: int) -> int:
        return sum(c * v for c, v in zip(self.coefficients, point)) % p

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients):
            if c:
                terms.append(f"x_{k}" if c == 1 else f"{c}*x_{k}")
        return " + ".join(terms)


def iter_nzd_linear_forms(x: PointConfig) -> Iterator[LinearForm]:
    """Normalized linear forms vanishing at no point of X, in increasing lex order.

    Depth-first over coefficients; a branch is cut as soon as some point whose
    remaining coordinates are all zero already evaluates to zero.
    """
    p = x.p
    width = x.n + 1
    pts = [pt.coords for pt in x.points]
    # points whose last nonzero coordinate sits at position k become fixed at depth k
    fixed_at: list[list[int]] = [[] for _ in range(width)]
    for idx, pt in enumerate(pts):
        last = max(k for k, c in enumerate(pt) if c)
        fixed_at[last].append(idx)
    partial = [0] * len(pts)
    coeffs = [0] * width

    def rec(k: int, leading: bool) -> Iterator[LinearForm]:
        if k == width:
            yield LinearForm(tuple(coeffs))
            return
        if leading:
            choices = range(p)
        elif k == width - 1:
            choices = (1,)
        else:
            choices = (0, 1)
        touched = [i for i in range(len(pts)) if pts[i][k]]
        saved = [partial[i] for i in touched]
        for c in choices:
            for i, s in zip(touched, saved):
                partial[i] = (s + c * pts[i][k]) % p
            if all(partial[i] for i in fixed_at[k]):
                coeffs[k] = c
                yield from rec(k + 1, leading or c != 0)
        for i, s in zip(touched, saved):
            partial[i] = s
        coeffs[k] = 0

    return rec(0, False)


def find_nzd_linear_form(x: PointConfig) -> LinearForm:
    if len(x) == 0:
        raise StructuralError("need at least one point")
    for form in iter_nzd_linear_forms(x):
        return form
    raise FieldTooSmall(f"every linear form over F_{x.p} vanishes at some point of X")


def _times_form(q: PointQuotient, ell: LinearForm, d: int) -> np.ndarray:
    """Matrix of multiplication by ell from (S/I)_{d-1} to (S/I)_d."""
    p = q.field.p
    out = np.zeros((q.dim(d), q.dim(d - 1)), dtype=np.int64)
    if d < 1:
        return out
    for t, c in enumerate(ell.coefficients):
        if c:
            out = (out + c * q.mult_dense(d - 1, t)) % p
    return out


def socle_dims(x: PointConfig, ell: LinearForm, max_d: int) -> list[int]:
    """dim soc(A)_d for d = 0..max_d, where A = S/(I(X) + (ell))."""
    if len(ell.coefficients) != x.n + 1:
        raise StructuralError("linear form has the wrong number of coefficients")
    bad = [k for k, pt in enumerate(x.points) if ell(pt.coords, x.p) == 0]
    if bad:
        raise NotNonzerodivisor(f"{ell} vanishes at point(s) {bad}")
    q = PointQuotient(x)
    p = x.p
    image = {d: _times_form(q, ell, d) for d in range(max_d + 2)}
    dims = []
    for d in range(max_d + 1):
        h = q.dim(d)
        if h == 0:
            dims.append(0)
            continue
        # rows of `quot` cut out the image of ell inside (S/I)_{d+1}
        quot = kernel_basis(Matrix(x.field, image[d + 1].T)).data
        if quot.shape[0] == 0:
            killed = h
        else:
            stacked = np.vstack([quot @ q.mult_dense(d, t) % p for t in range(x.n + 1)])
            killed = h - array_rank(stacked, p)
        dims.append(killed - array_rank(image[d], p))
    return dims


def artinian_dims(x: PointConfig, ell: LinearForm, max_d: int) -> list[int]:
    q = PointQuotient(x)
    return [q.dim(d) - array_rank(_times_form(q, ell, d), x.p) for d in range(max_d + 1)]


def isoc_via_socle(x: PointConfig, ell: LinearForm | None = None) -> int | None:
    """Least d >= 1 with a nonzero socle element in degree d, or None if none below the window."""
    if ell is None:
        ell = find_nzd_linear_form(x)
    max_d = regularity_index(x) + 1
    dims = socle_dims(x, ell, max_d)
    return next((d for d in range(1, max_d + 1) if dims[d]), None)
