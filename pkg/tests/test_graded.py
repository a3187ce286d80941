from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betticover.errors import FieldTooSmall, NotNonzerodivisor, StructuralError
from betticover.graded import (LinearForm, PointQuotient, PolynomialRing, artinian_dims, evaluation_matrix,
                               find_nzd_linear_form, format_monomial, hilbert_function, ideal_slice,
                               ideal_slice_via_kernel, iter_nzd_linear_forms, isoc_via_socle, monomial_basis,
                               quotient_basis, regularity_index, socle_dims)
from betticover.linalg import PrimeField
from betticover.points import PointConfig, moment_curve_config, random_config, two_plane_config

F101 = PrimeField(101)
COORD = PointConfig.from_coords(F101, 2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_monomial_basis_order():
    assert monomial_basis(2, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert monomial_basis(3, 0) == ((0, 0, 0, 0),)
    for n in range(1, 5):
        for d in range(5):
            assert len(monomial_basis(n, d)) == math.comb(n + d, d)
    with pytest.raises(StructuralError):
        monomial_basis(2, -1)


def test_format_monomial():
    assert format_monomial((2, 0, 1)) == "x_0^2*x_2"
    assert format_monomial((0, 0)) == "1"


def test_evaluation_matrix_by_hand():
    x = PointConfig.from_coords(PrimeField(7), 1, [[1, 2], [1, 3]])
    # monomials x0^2, x0 x1, x1^2
    assert evaluation_matrix(x, 2).tolist() == [[1, 2, 4], [1, 3, 2]]


def test_hilbert_function_coordinate_points():
    assert [hilbert_function(COORD, d) for d in range(4)] == [1, 3, 3, 3]
    assert regularity_index(COORD) == 1


def test_hilbert_function_moment_curve():
    x = moment_curve_config(F101, 2, range(4))
    assert [hilbert_function(x, d) for d in range(4)] == [1, 3, 4, 4]
    assert regularity_index(x) == 2


def test_hilbert_function_general_points_is_min():
    for n, size in [(2, 5), (3, 7), (4, 9)]:
        x = moment_curve_config(F101, n, range(size))
        for d in range(4):
            assert hilbert_function(x, d) == min(math.comb(n + d, d), size)


def test_quotient_basis_of_coordinate_points_degree_two():
    qb = quotient_basis(COORD, 2)
    assert qb.standard_monomials == ((2, 0, 0), (0, 2, 0), (0, 0, 2))
    sl = ideal_slice(COORD, 2)
    assert sl.pivot_monomials == ((1, 1, 0), (1, 0, 1), (0, 1, 1))


def test_ideal_slice_vanishes_on_points():
    x = moment_curve_config(F101, 3, range(6))
    for d in range(4):
        sl = ideal_slice(x, d)
        ev = evaluation_matrix(x, d)
        assert not (ev @ sl.basis.data.T % 101).any()
        assert sl.dim + quotient_basis(x, d).dim == len(monomial_basis(3, d))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 8), st.sampled_from([7, 101]), st.integers(0, 2**32 - 1))
def test_two_ideal_slice_routes_agree(n, size, p, seed):
    field = PrimeField(p)
    size = min(size, (p ** (n + 1) - 1) // (p - 1))
    x = random_config(field, n, size, np.random.default_rng(seed))
    for d in range(4):
        a, b = ideal_slice(x, d), ideal_slice_via_kernel(x, d)
        assert a.basis == b.basis
        assert a.pivots == tuple(b.pivots)


def test_multiplication_maps_are_consistent():
    x = moment_curve_config(F101, 2, range(5))
    q = PointQuotient(x)
    for d in range(3):
        for s, t in itertools.permutations(range(3), 2):
            st_ = q.mult_dense(d + 1, t) @ q.mult_dense(d, s) % 101
            ts = q.mult_dense(d + 1, s) @ q.mult_dense(d, t) % 101
            assert (st_ == ts).all()


def test_polynomial_ring_dims():
    r = PolynomialRing(F101, 3)
    assert [r.dim(d) for d in range(4)] == [1, 3, 6, 10]
    assert r.dim(-1) == 0


def test_linear_form():
    ell = LinearForm((1, 0, 2))
    assert ell((1, 1, 1), 5) == 3
    assert str(ell) == "x_0 + 2*x_2"
    with pytest.raises(StructuralError):
        LinearForm((0, 0))


def brute_force_nzd_forms(x):
    out = []
    for coeffs in itertools.product(range(x.p), repeat=x.n + 1):
        nz = [c for c in coeffs if c]
        if not nz or nz[0] != 1:
            continue
        if all(sum(c * v for c, v in zip(coeffs, pt.coords)) % x.p for pt in x.points):
            out.append(coeffs)
    return sorted(out)


@pytest.mark.parametrize("p,n,size,seed", [(5, 2, 6, 0), (7, 2, 10, 1), (3, 3, 8, 2), (5, 1, 4, 3), (2, 2, 3, 4)])
def test_nzd_search_is_exhaustive_and_ordered(p, n, size, seed):
    x = random_config(PrimeField(p), n, size, np.random.default_rng(seed))
    assert [f.coefficients for f in iter_nzd_linear_forms(x)] == brute_force_nzd_forms(x)


def test_nzd_for_coordinate_points():
    assert find_nzd_linear_form(COORD).coefficients == (1, 1, 1)


def test_nzd_unavailable_over_tiny_field():
    all_of_p1 = PointConfig.from_coords(PrimeField(2), 1, [[1, 0], [0, 1], [1, 1]])
    with pytest.raises(FieldTooSmall):
        find_nzd_linear_form(all_of_p1)


def test_socle_coordinate_points():
    ell = find_nzd_linear_form(COORD)
    assert socle_dims(COORD, ell, 3) == [0, 2, 0, 0]
    assert artinian_dims(COORD, ell, 3) == [1, 2, 0, 0]
    assert isoc_via_socle(COORD) == 1


def test_socle_rejects_zero_divisor():
    with pytest.raises(NotNonzerodivisor):
        socle_dims(COORD, LinearForm((1, 0, 0)), 2)
    with pytest.raises(StructuralError):
        socle_dims(COORD, LinearForm((1, 1)), 2)


def test_artinian_reduction_has_length_equal_to_degree():
    for x in [moment_curve_config(F101, 3, range(7)),
              two_plane_config(F101, 3, 1, 1, (4, 3), np.random.default_rng(1))]:
        ell = find_nzd_linear_form(x)
        dims = artinian_dims(x, ell, regularity_index(x) + 1)
        assert sum(dims) == len(x)
        assert dims[-1] == 0


def test_moment_curve_socle_degree_two():
    for n in range(2, 6):
        assert isoc_via_socle(moment_curve_config(F101, n, range(n + 2))) == 2
