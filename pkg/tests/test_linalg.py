from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse import csr_matrix

from betticover.errors import StructuralError
from betticover.linalg import (Matrix, PrimeField, array_rank, is_prime, kernel_basis, matmul_mod, rank,
                               rank_of_vectors, rref, solve, sparse_rank)

F101 = PrimeField(101)


def test_is_prime_small_and_large():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(32003)
    assert is_prime(2**31 - 1)
    assert not is_prime(32003 * 101)
    assert not is_prime(561)  # Carmichael


@pytest.mark.parametrize("p", [1, 4, 100, 2**31 + 11])
def test_field_rejects_bad_modulus(p):
    with pytest.raises(StructuralError):
        PrimeField(p)


def test_field_arithmetic():
    f = PrimeField(7)
    assert f.add(5, 4) == 2
    assert f.sub(2, 5) == 4
    assert f.mul(3, 5) == 1
    assert f.neg(3) == 4
    assert f.inv(3) == 5
    assert f(-1) == 6
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_matrix_reduces_entries_and_is_immutable():
    m = Matrix(PrimeField(5), [[7, -1], [10, 3]])
    assert m.tolist() == [[2, 4], [0, 3]]
    with pytest.raises(ValueError):
        m.data[0, 0] = 1
    with pytest.raises(AttributeError):
        m.data = None
    assert m == Matrix(PrimeField(5), [[2, 4], [0, 3]])
    assert hash(m) == hash(Matrix(PrimeField(5), [[2, 4], [0, 3]]))


def test_matrix_rejects_ragged_and_3d():
    with pytest.raises(StructuralError):
        Matrix(F101, np.zeros((2, 2, 2), dtype=np.int64))


def test_rref_small_example():
    # over F_5: [[1,2],[3,4]] has determinant -2 != 0
    r = rref(Matrix(PrimeField(5), [[1, 2], [3, 4]]))
    assert r.rank == 2
    assert r.pivot_cols == (0, 1) or list(r.pivot_cols) == [0, 1]
    assert r.reduced.tolist() == [[1, 0], [0, 1]]


def test_rank_depends_on_characteristic():
    m = [[1, 1], [1, -1]]
    assert rank(Matrix(PrimeField(2), m)) == 1
    assert rank(Matrix(PrimeField(3), m)) == 2


def test_kernel_basis_canonical_form():
    # x + y + z = 0 over F_7: free variables y, z
    k = kernel_basis(Matrix(PrimeField(7), [[1, 1, 1]]))
    assert k.tolist() == [[6, 1, 0], [6, 0, 1]]


def test_kernel_of_invertible_is_empty():
    k = kernel_basis(Matrix.identity(F101, 3))
    assert k.rows == 0


def test_rank_of_vectors_length_mismatch():
    with pytest.raises(StructuralError):
        rank_of_vectors([[1, 0], [1, 0, 0]], F101)


def test_matmul_mod_no_overflow():
    p = 2**31 - 1
    a = np.full((3, 4000), p - 1, dtype=np.int64)
    b = np.full((4000, 2), p - 1, dtype=np.int64)
    expected = (4000 * ((p - 1) * (p - 1) % p)) % p
    assert (matmul_mod(a, b, p) == expected).all()


def test_solve():
    f = PrimeField(11)
    m = Matrix(f, [[1, 2], [3, 4]])
    sol = solve(m, [5, 6])
    assert (m @ Matrix(f, [[v] for v in sol])).tolist() == [[5], [6]]
    assert solve(Matrix(f, [[1, 1], [2, 2]]), [1, 0]) is None


def test_sparse_rank_block_diagonal():
    dense = np.zeros((6, 6), dtype=np.int64)
    dense[0, 0] = dense[1, 1] = 1
    dense[2:4, 2:4] = [[1, 2], [2, 4]]  # rank 1 block over any field
    dense[5, 4] = dense[5, 5] = 3
    assert sparse_rank(csr_matrix(dense), 101) == 4
    assert sparse_rank(csr_matrix((0, 3), dtype=np.int64), 101) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.sampled_from([2, 3, 101]), st.integers(0, 2**32 - 1))
def test_rank_nullity_and_kernel(rows, cols, p, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(rows, cols))
    if rng.random() < 0.5:
        a[:, 0] = 0  # force some degeneracy
    m = Matrix(PrimeField(p), a)
    k = kernel_basis(m)
    assert rank(m) + k.rows == cols
    assert not (m @ k.T).data.any() if k.rows else True
    assert array_rank(a, p) == rank(m)
    assert sparse_rank(csr_matrix(a), p) == rank(m)
    assert rank(m) == rank(m.T)
