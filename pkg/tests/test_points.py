from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

from betticover.errors import DuplicatePointError, FieldTooSmall, ParseError, StructuralError
from betticover.linalg import Matrix, PrimeField, rank_of_vectors
from betticover.points import (PointConfig, count_projective_points, is_linearly_general, is_nondegenerate,
                               load_config, moment_curve_config, normalize, parse_config, random_config,
                               random_invertible, random_with_collinear, two_plane_config)

F101 = PrimeField(101)


def test_normalize_scales_first_nonzero_to_one():
    assert normalize([0, 3, 6], PrimeField(7)) == (0, 1, 2)
    assert normalize([2, 4, 1], PrimeField(5)) == (1, 2, 3)


def test_projectively_equal_points_are_duplicates():
    with pytest.raises(DuplicatePointError) as info:
        PointConfig.from_coords(7, 2, [[1, 2, 3], [0, 0, 1], [2, 4, 6]])
    assert info.value.indices == (0, 2)


def test_n_must_be_positive():
    with pytest.raises(StructuralError):
        PointConfig.from_coords(7, 0, [[1]])


def test_parse_text_format_with_comments():
    text = "# a triangle\np=101 n=2\n1 0 0\n\n0 1 0\n# midway\n0 0 1\n"
    x = parse_config(text)
    assert (x.p, x.n, len(x)) == (101, 2, 3)
    assert [pt.coords for pt in x] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert parse_config(x.to_text()) == x


def test_parse_json_round_trip():
    x = moment_curve_config(F101, 3, range(5))
    assert parse_config(json.dumps(x.to_json())) == x
    assert parse_config(x.to_text().encode()) == x


@pytest.mark.parametrize("text", [
    "", "p=101\n1 0\n", "q=101 n=2\n", "p=100 n=2\n1 0 0\n", "p=101 n=2\n1 0\n",
    "p=101 n=2\n0 0 0\n", "p=101 n=2\n1 a 0\n", "p=101 n=0\n1\n", '{"p": 101}',
    "p=101 n=2\n1 0 0\n2 0 0\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_config(text)


def test_load_config(tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("p=7 n=1\n1 0\n0 1\n1 1\n")
    assert len(load_config(path)) == 3


def test_nondegenerate_and_general():
    coord = PointConfig.from_coords(F101, 2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert is_nondegenerate(coord) and is_linearly_general(coord)
    line = PointConfig.from_coords(F101, 2, [[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    assert not is_nondegenerate(line)
    four = coord.extend([[1, 1, 0]])
    assert is_nondegenerate(four) and not is_linearly_general(four)


def test_moment_curve_is_linearly_general():
    for n in range(1, 6):
        assert is_linearly_general(moment_curve_config(F101, n, range(n + 3)))
    with pytest.raises(StructuralError):
        moment_curve_config(PrimeField(5), 2, [1, 6])


def test_subset_delete_transform():
    x = moment_curve_config(F101, 2, range(4))
    assert x.delete(1) == x.subset([0, 2, 3])
    g = random_invertible(F101, 3, np.random.default_rng(3))
    y = x.transform(g)
    assert len(y) == 4 and is_linearly_general(y)
    with pytest.raises(StructuralError):
        x.transform(Matrix.identity(F101, 2))


def test_count_projective_points():
    assert count_projective_points(2, 2) == 7
    assert count_projective_points(3, 2) == 13
    assert count_projective_points(101, 0) == 1


def test_random_config_pinned():
    # frozen from a first verified run; guards the RNG contract
    x = random_config(F101, 2, 5, np.random.default_rng(7))
    assert x.to_json()["points"] == [[1, 40, 39], [1, 59, 48], [1, 70, 71], [1, 75, 77], [1, 0, 73]]
    assert x.digest() == "e9e524eca063d21e"


def test_random_config_too_many_points():
    with pytest.raises(FieldTooSmall):
        random_config(PrimeField(2), 2, 8, np.random.default_rng(0))


@pytest.mark.parametrize("n,a,b,counts", [(3, 1, 1, (3, 3)), (2, 0, 1, (1, 4)), (4, 2, 1, (5, 2)), (1, 0, 0, (1, 1))])
def test_two_plane_config(n, a, b, counts):
    x = two_plane_config(F101, n, a, b, counts, np.random.default_rng(11))
    assert len(x) == sum(counts)
    assert is_nondegenerate(x)
    u, v = x.subset(range(counts[0])), x.subset(range(counts[0], len(x)))
    assert rank_of_vectors([p.coords for p in u], F101) == a + 1
    assert rank_of_vectors([p.coords for p in v], F101) == b + 1


def test_two_plane_config_errors():
    rng = np.random.default_rng(0)
    with pytest.raises(StructuralError):
        two_plane_config(F101, 3, 1, 2, (2, 3), rng)
    with pytest.raises(FieldTooSmall):
        two_plane_config(F101, 2, 0, 1, (2, 3), rng)


def test_random_with_collinear_has_three_on_a_line():
    x = random_with_collinear(F101, 3, 7, 2, np.random.default_rng(5))
    assert len(x) == 7
    coords = [p.coords for p in x]
    assert any(rank_of_vectors(t, F101) == 2 for t in itertools.combinations(coords, 3))
