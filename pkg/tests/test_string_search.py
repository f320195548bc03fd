import random

import numpy as np
import pytest

from src.core.errors import InstanceError
from src.core.geometry import CompleteIntersection, is_string
from src.core.string_search import (
    CanonicalMatrix,
    SearchBounds,
    brute_force_string_matrices,
    canonicalize,
    enumerate_string_matrices,
    iterate_ambient_dims,
    string_matrices_for,
    verify_theorem,
)

TWELVE_ROWS = ((2, 1), (1, -2), (1, 0), (1, 0), (1, 0))


def matrices(bounds):
    return [matrix for _, matrix in enumerate_string_matrices(bounds)]


def test_single_factor_examples():
    assert matrices(SearchBounds(1, 3, n=(5,))) == [CanonicalMatrix(((2,), (1,), (1,)))]
    assert matrices(SearchBounds(1, 1, n=(3,))) == [CanonicalMatrix(((2,),))]
    assert matrices(SearchBounds(1, 1, n=(2,))) == []


def test_two_factor_search_finds_twelve_dimensional_instance():
    found = matrices(SearchBounds(2, 5, n=(7, 4)))
    assert canonicalize(TWELVE_ROWS) in found


def test_emitted_matrices_are_string():
    for n, matrix in enumerate_string_matrices(SearchBounds(2, 5, n_max=7, allow_odd_dim=True)):
        assert np.array_equal(matrix.gram(), np.diag([v + 1 for v in n]))
        cert = is_string(CompleteIntersection(n, matrix.rows))
        assert cert.is_string and cert.lefschetz_ok


def test_odd_dimensions_are_filtered_by_default():
    even = list(enumerate_string_matrices(SearchBounds(1, 3, n_max=8)))
    both = list(enumerate_string_matrices(SearchBounds(1, 3, n_max=8, allow_odd_dim=True)))
    assert [n for n, _ in even] == [(3,), (4,), (5,)]
    assert len(both) == 6
    assert all((sum(n) - m.t) % 2 == 0 for n, m in even)


@pytest.mark.parametrize("n", range(1, 30))
def test_search_matches_brute_force(n):
    bounds = SearchBounds(1, 4, n=(n,), allow_odd_dim=True)
    assert set(matrices(bounds)) == brute_force_string_matrices(n, 4)


def test_search_emits_each_class_once():
    found = matrices(SearchBounds(2, 5, n=(7, 4)))
    assert len(found) == len(set(found))


@pytest.mark.parametrize("seed", range(20))
def test_canonical_form_is_unique(seed):
    rng = random.Random(seed)
    for matrix in string_matrices_for((7, 4), 5):
        rows = [tuple(d * rng.choice((-1, 1)) for d in row) for row in matrix.rows]
        rng.shuffle(rows)
        assert canonicalize(rows) == matrix
        assert canonicalize(canonicalize(rows).rows) == matrix


def test_canonicalize_rejects_zero_row():
    with pytest.raises(InstanceError):
        canonicalize([(1, 0), (0, 0)])


@pytest.mark.parametrize("kwargs", [
    dict(s=0, t_max=1, n_max=3),
    dict(s=1, t_max=0, n=(3,)),
    dict(s=1, t_max=1),
    dict(s=1, t_max=1, n=(3,), n_max=3),
    dict(s=2, t_max=1, n=(3,)),
    dict(s=1, t_max=1, n=(0,)),
])
def test_invalid_bounds(kwargs):
    with pytest.raises(InstanceError):
        SearchBounds(**kwargs)


def test_ambient_dims_from_n_max():
    assert list(iterate_ambient_dims(SearchBounds(2, 1, n_max=2))) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert list(iterate_ambient_dims(SearchBounds(2, 1, n=(4, 3)))) == [(4, 3)]


def test_sweep_single_instance():
    report = verify_theorem(SearchBounds(1, 3, n=(5,)), trunc_order=8)
    assert report.instance_count == 1
    assert report.ok
    assert len(report.section("landweber_stong")) == 1


def test_sweep_sections():
    report = verify_theorem(SearchBounds(1, 3, n_max=8, allow_odd_dim=True), trunc_order=2)
    assert report.instance_count == 6
    assert len(report.section("main")) == 3
    assert len(report.section("odd_dimension")) == 3
    assert report.ok


def test_empty_sweep():
    report = verify_theorem(SearchBounds(1, 1, n=(2,)), trunc_order=4)
    assert report.instance_count == 0
    assert report.ok
    assert report.failures == []


@pytest.mark.slow
def test_sweep_twelve_dimensional_family():
    report = verify_theorem(SearchBounds(2, 5, n=(7, 4)), trunc_order=4)
    assert canonicalize(TWELVE_ROWS) in [r.matrix for r in report.records]
    assert report.ok


@pytest.mark.slow
def test_parallel_sweep_matches_serial():
    bounds = SearchBounds(2, 4, n_max=5)
    serial = verify_theorem(bounds, trunc_order=2)
    parallel = verify_theorem(bounds, trunc_order=2, threads=2)
    assert [(r.n, r.matrix, r.value) for r in serial.records] == \
        [(r.n, r.matrix, r.value) for r in parallel.records]
    assert parallel.ok


@pytest.mark.slow
def test_acceptance_sweep():
    single = verify_theorem(SearchBounds(1, 4, n_max=12), trunc_order=6)
    assert single.instance_count == 7
    assert single.ok
    assert single.section("landweber_stong") == single.records
    double = verify_theorem(SearchBounds(2, 5, n_max=9), trunc_order=6)
    assert double.instance_count == 84
    assert double.ok
    assert double.failures == []
