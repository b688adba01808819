"""Row reduction over F_q, kernel systems and rank over F_q(T)."""

import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from utils.field_core import field_config, get_field
from utils.linalg import fractional_kernel, kernel_basis, polynomial_rank, rank, row_reduce
from utils.series_ring import Poly, series_from_rational

F3_FIELD = get_field(field_config(3))


def _apply(matrix, vector, field):
    out = []
    for row in matrix:
        acc = 0
        for a, x in zip(row, vector):
            acc = field.add(acc, field.mul(int(a), int(x)))
        out.append(acc)
    return out


def test_row_reduce_pivots_lowest_column_first(F3):
    matrix = np.array([[0, 1, 2], [1, 2, 0], [1, 0, 1]])
    R, pivots = row_reduce(matrix, F3)
    assert pivots == [0, 1]
    assert R[2].tolist() == [0, 0, 0]
    assert rank(matrix, F3) == 2


def test_kernel_basis_is_canonical(F2):
    matrix = np.array([[1, 1, 1]])
    basis = kernel_basis(matrix, F2)
    assert [v.tolist() for v in basis] == [[1, 1, 0], [1, 0, 1]]
    assert [v.tolist() for v in kernel_basis(np.zeros((0, 2), dtype=np.int64), F2)] == [[1, 0], [0, 1]]


def test_rank_over_extension_field(F4):
    u = F4.from_coeffs([0, 1])
    matrix = np.array([[1, u], [u, F4.mul(u, u)]])
    assert rank(matrix, F4) == 1


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(min_value=0, max_value=2), min_size=4, max_size=4), min_size=1, max_size=4))
def test_kernel_vectors_are_annihilated(rows):
    matrix = np.array(rows, dtype=np.int64)
    basis = kernel_basis(matrix, F3_FIELD)
    assert len(basis) + rank(matrix, F3_FIELD) == 4
    for vector in basis:
        assert _apply(matrix, vector, F3_FIELD) == [0] * len(rows)


def test_rank_matches_brute_force_count(F2):
    matrix = np.array([[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]])
    solutions = sum(
        1 for v in itertools.product(range(2), repeat=4) if _apply(matrix, v, F2) == [0, 0, 0]
    )
    assert solutions == 2 ** (4 - rank(matrix, F2))


def test_polynomial_rank(F3):
    T = Poly.T(F3)
    one = Poly.one(F3)
    assert polynomial_rank([[one, T], [T, T * T]]) == 1
    assert polynomial_rank([[one, T], [one, T + one]]) == 2
    assert polynomial_rank([[Poly.zero(F3), Poly.zero(F3)]]) == 0


def test_fractional_kernel_finds_the_denominator(F2):
    y = series_from_rational(Poly.one(F2), Poly(F2, [1, 1]), -10)
    system = fractional_kernel([y], 2, 2)
    assert system.rows == 2 and system.cols == 3
    assert system.dimension == 2
    assert system.first == (Poly(F2, [1, 1]),)
    assert len(list(system.elements(100))) == 3


def test_poly_cap_rows_bound_the_polynomial_part(F2):
    y = series_from_rational(Poly(F2, [0, 0, 1]), Poly.one(F2), -4)
    free = fractional_kernel([y], 1, 0)
    capped = fractional_kernel([y], 1, 0, poly_cap=1)
    assert free.dimension == 2
    assert capped.dimension == 0
