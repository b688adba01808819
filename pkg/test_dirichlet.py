"""Dirichlet solvers for linear forms and polynomial values."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from utils.dirichlet import enumerate_witnesses, linear_form, solve_linear, solve_poly
from utils.errors import InvalidArgument
from utils.exponents import height_H, height_Ht
from utils.field_core import field_config_for_q, get_field
from utils.linalg import fractional_kernel
from utils.literals import parse_series
from utils.series_ring import (
    LaurentPoly,
    Poly,
    Vector,
    frac_part,
    poly_part,
    series_from_literal,
    series_from_poly,
    series_from_rational,
)


def _rational(field, numerator, denominator, floor=-40):
    return series_from_rational(Poly(field, numerator), Poly(field, denominator), floor)


def test_kernel_case_recovers_the_denominator(F2):
    y = _rational(F2, [1], [1, 1])
    solution = solve_linear([y], 2)
    assert solution.case == "kernel"
    assert solution.k == 0
    assert solution.q == (Poly(F2, [1, 1]),)
    assert solution.p == Poly.one(F2)
    assert solution.err.is_bottom() and solution.err_exact
    assert solution.to_dict()["bound_log"] == -2


def test_m_below_k_uses_the_trivial_solution(F2):
    y = _rational(F2, [1, 0, 0, 0, 1], [0, 1])
    solution = solve_linear([y], 2)
    assert solution.case == "m<k"
    assert solution.k == 3
    assert solution.q == (Poly.zero(F2),)
    assert solution.p == Poly.one(F2)
    assert solution.err == 0 < solution.bound


def test_m_equal_k_takes_the_polynomial_part(F2):
    y = _rational(F2, [1, 0, 0, 0, 1], [0, 1])
    solution = solve_linear([y], 3)
    assert solution.case == "m=k"
    assert solution.p == Poly(F2, [0, 0, 0, 1])
    assert solution.err == -1


def test_bad_arguments(F2):
    y = _rational(F2, [1], [1, 1])
    with pytest.raises(InvalidArgument):
        solve_linear([], 2)
    with pytest.raises(InvalidArgument):
        solve_linear([y], 0)
    with pytest.raises(InvalidArgument):
        solve_poly(Vector((y,)), 1, 2, mode="both")


FIELDS = {q: get_field(field_config_for_q(q)) for q in (2, 3, 4, 9)}
QUADRATIC = "alg:(X^2+T*X-1);prefix=(T^-1);floor=-80"


@st.composite
def sources(draw, field):
    """A nonzero rational, algebraic or finite-literal series over ``field``."""
    coefficient = st.integers(min_value=0, max_value=field.q - 1)
    nonzero = st.integers(min_value=1, max_value=field.q - 1)
    kind = draw(st.sampled_from(["rat", "alg", "lit"]))
    if kind == "rat":
        numerator = draw(st.lists(coefficient, min_size=1, max_size=4).filter(any))
        denominator = draw(st.lists(coefficient, min_size=1, max_size=4).filter(any))
        return _rational(field, numerator, denominator, -80)
    if kind == "alg":
        factor = Poly(field, draw(st.lists(coefficient, min_size=1, max_size=3).filter(any)))
        return parse_series(QUADRATIC, field) * factor
    terms = draw(st.dictionaries(st.integers(min_value=-8, max_value=2), nonzero, min_size=1, max_size=5))
    return series_from_literal(LaurentPoly.from_terms(field, terms), -80)


@st.composite
def instances(draw):
    field = FIELDS[draw(st.sampled_from(sorted(FIELDS)))]
    n = draw(st.integers(min_value=1, max_value=3))
    return [draw(sources(field)) for _ in range(n)], draw(st.integers(min_value=1, max_value=8))


@settings(max_examples=200, deadline=None)
@given(instances())
def test_linear_solutions_meet_their_bounds(instance):
    y, m = instance
    solution = solve_linear(y, m)
    n, k = len(y), solution.k
    residual = linear_form(y, solution.q) - series_from_poly(solution.p, -80)
    assert residual.magnitude()[0] < n * (k - m)
    assert solution.p.log_abs <= m
    assert all(c.log_abs <= m for c in solution.q)
    assert not solution.p.is_zero() or any(not c.is_zero() for c in solution.q)


def test_kernel_dimension_is_at_least_n(F3):
    y = [_rational(F3, [1], [1, 1, 1]), _rational(F3, [0, 1], [2, 0, 1])]
    solution = solve_linear(y, 4)
    assert solution.case == "kernel"
    assert solution.err < solution.bound


@pytest.mark.parametrize("mode", ["Ht", "H"])
def test_solve_poly_bounds(F2, mode):
    x = Vector((_rational(F2, [1], [1, 1]),))
    solution = solve_poly(x, 2, 2, mode)
    assert solution.N == 2
    assert solution.err < solution.c_log - 2 * solution.N
    if mode == "Ht":
        assert solution.c_log == 0
        assert height_Ht(solution.poly) <= 2
    else:
        assert height_H(solution.poly) <= 2


def test_solve_poly_on_the_quadratic_series(alpha3):
    x = Vector((alpha3,))
    solution = solve_poly(x, 1, 4)
    assert solution.err < -4
    assert solution.height_tilde <= 4
    assert solution.to_dict()["bound_log"] == -4


def test_enumerated_witnesses_are_distinct(alpha3):
    x = Vector((alpha3,))
    witnesses = enumerate_witnesses(x, 1, 5)
    keys = {w.poly.normalized().to_literal() for w in witnesses}
    assert len(keys) == 5
    for w in witnesses:
        assert w.err < -w.m
        assert w.height_tilde <= w.m


@pytest.mark.parametrize("count", [2, 3])
def test_rational_points_still_yield_distinct_witnesses(F2, count):
    x = Vector((_rational(F2, [1], [1, 1]),))
    witnesses = enumerate_witnesses(x, 1, count)
    keys = [w.poly.normalized().to_literal() for w in witnesses]
    assert len(set(keys)) == count
    assert keys[0] == "T*X+X+1"
    for w in witnesses:
        assert w.err.is_bottom()
        assert w.height_tilde <= w.m
    assert max(w.m for w in witnesses) == 2


def _exhaustive_linear(y, m):
    """Smallest residual over all nonzero q with deg q <= m (q = 2, one series)."""
    field = y.field
    best = None
    for coeffs in itertools.product(range(2), repeat=m + 1):
        q = Poly(field, coeffs)
        if q.is_zero():
            continue
        p = poly_part(y * q)
        err = (y * q - series_from_poly(p, -40)).log_abs()
        if best is None or err < best:
            best = err
    return best


@pytest.mark.parametrize("m", [1, 2, 3])
def test_linear_solution_is_feasible_by_exhaustion(F2, m):
    y = _rational(F2, [1, 1], [1, 1, 0, 1])
    solution = solve_linear([y], m)
    assert _exhaustive_linear(y, m) <= solution.err < -m


def _exhaustive_count(y, m):
    """Nonzero q over F_2 with deg q_j <= m and |frac(sum q_j y_j)| < e^{-nm}, plus the best residual."""
    field = y[0].field
    n = len(y)
    choices = [Poly(field, c) for c in itertools.product(range(2), repeat=m + 1)]
    count, best = 0, None
    for q in itertools.product(choices, repeat=n):
        if all(c.is_zero() for c in q):
            continue
        err = frac_part(linear_form(y, q)).log_abs()
        if best is None or err < best:
            best = err
        if err < -n * m:
            count += 1
    return count, best


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_kernel_matches_exhaustive_search(F2, n, m):
    y = [_rational(F2, [1, 1], [1, 1, 0, 1]), _rational(F2, [1], [1, 1, 1])][:n]
    system = fractional_kernel(y, m, n * m)
    assert system.dimension >= n
    count, best = _exhaustive_count(y, m)
    assert count == 2 ** system.dimension - 1
    solution = solve_linear(y, m)
    assert solution.case == "kernel"
    assert best <= solution.err < solution.bound
