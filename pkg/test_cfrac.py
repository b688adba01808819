"""Continued fractions, convergents and best approximations."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from utils.cfrac import (
    best_convergent_at_degree,
    best_error_at_degree,
    cf_expand,
    convergents,
    max_quotient_degree,
    reconstruct,
)
from utils.errors import IndexOutOfCertifiedRange, InvalidArgument, PrecisionIndeterminate
from utils.field_core import field_config, get_field
from utils.literals import parse_series
from utils.series_ring import Poly, poly_part, series_from_literal, series_from_poly, series_from_rational

F2_FIELD = get_field(field_config(2))
F3_FIELD = get_field(field_config(3))


def test_quadratic_series_has_constant_quotients(F3, alpha3):
    expansion = cf_expand(alpha3, 20)
    assert expansion.a0.is_zero()
    assert expansion.quotients == (Poly.T(F3),) * 20
    assert not expansion.terminated
    assert max_quotient_degree(expansion, 20) == 1


def test_convergents_of_the_quadratic_series(F3, alpha3):
    expansion = cf_expand(alpha3, 6)
    conv = convergents(expansion, 6)
    assert [c.q.degree for c in conv] == [0, 1, 2, 3, 4, 5]
    assert [c.err for c in conv] == [-1, -2, -3, -4, -5, -6]
    assert all(c.err_exact for c in conv)
    assert conv[2].q == Poly(F3, [1, 0, 1])
    assert conv[2].p == Poly.T(F3)
    assert conv[3].q == Poly(F3, [0, 2, 0, 1])


def test_all_twenty_convergents_of_the_quadratic_series(alpha3):
    conv = convergents(cf_expand(alpha3, 20), 21)
    assert [c.q.degree for c in conv] == list(range(21))
    assert [c.err for c in conv] == [-(n + 1) for n in range(21)]
    _assert_convergent_invariants(conv)


def test_best_error_at_degree(alpha3):
    expansion = cf_expand(alpha3, 6)
    assert best_error_at_degree(expansion, 3) == -4
    assert best_convergent_at_degree(expansion, 0).q.degree == 0
    with pytest.raises(InvalidArgument):
        best_error_at_degree(expansion, -1)
    with pytest.raises(IndexOutOfCertifiedRange):
        best_error_at_degree(expansion, 6)


def test_rational_expansion_terminates(F2):
    x = series_from_rational(Poly(F2, [1, 0, 1]), Poly(F2, [1, 1, 0, 1]), -20)
    expansion = cf_expand(x, 10)
    assert expansion.terminated
    assert expansion.quotients == (Poly.T(F2), Poly(F2, [1, 0, 1]))
    last = convergents(expansion, 3)[-1]
    assert last.q == Poly(F2, [1, 1, 0, 1])
    assert last.err.is_bottom()
    assert best_error_at_degree(expansion, 7).is_bottom()


def test_inverse_of_t_plus_one(F2):
    expansion = cf_expand(series_from_rational(Poly.one(F2), Poly(F2, [1, 1]), -10), 5)
    assert expansion.terminated
    assert expansion.quotients == (Poly(F2, [1, 1]),)


def _euclid(P, Q):
    a0, remainder = divmod(P, Q)
    quotients = []
    a, b = Q, remainder
    while not b.is_zero():
        quotient, remainder = divmod(a, b)
        quotients.append(quotient)
        a, b = b, remainder
    return a0, quotients


def _assert_convergent_invariants(conv):
    one = Poly.one(conv[0].q.field)
    for c in conv:
        assert c.q.lead == 1
        assert c.q.gcd(c.p) == one
    for before, after in zip(conv, conv[1:]):
        determinant = after.q * before.p - after.p * before.q
        assert not determinant.is_zero() and determinant.degree == 0


@pytest.mark.parametrize("field", [F2_FIELD, F3_FIELD], ids=["q2", "q3"])
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_rational_quotients_follow_euclid(field, data):
    coefficient = st.integers(min_value=0, max_value=field.q - 1)
    P = Poly(field, data.draw(st.lists(coefficient, min_size=1, max_size=6)))
    Q = Poly(field, data.draw(st.lists(coefficient, min_size=1, max_size=6).filter(any)))
    x = series_from_rational(P, Q, -40)
    expansion = cf_expand(x, 20)
    a0, quotients = _euclid(P, Q)
    assert expansion.terminated
    assert expansion.a0 == a0
    assert list(expansion.quotients) == quotients
    assert (reconstruct(expansion, len(quotients)) - x).exact_zero
    _assert_convergent_invariants(convergents(expansion, len(quotients) + 1))


def test_partial_quotient_degrees_read_off_errors(F3):
    x = parse_series("rat:(T^4+T+1)/(T^5+2*T^2+T+1);floor=-40", F3)
    expansion = cf_expand(x, 10)
    conv = convergents(expansion, expansion.certified_terms + 1)
    degrees = expansion.denominator_degrees()
    for c in conv[:-1]:
        assert c.err == -degrees[c.index + 1]


def test_reconstruct_matches_the_series(alpha3):
    expansion = cf_expand(alpha3, 8)
    approximation = reconstruct(expansion, 8)
    difference = (approximation - alpha3).extend(-30)
    assert difference.log_abs() == -(8 + 9)


def test_literal_precision_limits_certified_terms(F3, alpha3):
    literal = series_from_literal(alpha3.truncate(-10), -10)
    with pytest.raises(PrecisionIndeterminate):
        cf_expand(literal, 20)
    partial = cf_expand(literal, 20, allow_partial=True)
    assert 0 < partial.certified_terms < 20
    assert all(a == Poly.T(F3) for a in partial.quotients)
    with pytest.raises(IndexOutOfCertifiedRange):
        convergents(partial, partial.certified_terms + 2)


def test_polynomial_part_goes_to_a0(F3, alpha3):
    shifted = alpha3 + series_from_poly(Poly(F3, [2, 1]), -30)
    expansion = cf_expand(shifted, 3)
    assert expansion.a0 == Poly(F3, [2, 1])
    assert expansion.quotients == (Poly.T(F3),) * 3


@pytest.mark.parametrize("series", ["alpha2", "alpha3"])
def test_convergents_are_best_approximations_by_exhaustion(request, series):
    alpha = request.getfixturevalue(series)
    field = alpha.field
    expansion = cf_expand(alpha, 6)
    for D in range(0, 5):
        best = None
        for coeffs in itertools.product(range(field.q), repeat=D + 1):
            q = Poly(field, coeffs)
            if q.is_zero():
                continue
            product = alpha * q
            err = (product - series_from_poly(poly_part(product), -30)).log_abs()
            best = err if best is None or err < best else best
        assert best == best_error_at_degree(expansion, D)


def test_negative_term_count(alpha3):
    with pytest.raises(InvalidArgument):
        cf_expand(alpha3, -1)
