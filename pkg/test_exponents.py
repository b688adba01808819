"""Veronese map, heights, k-VWA searches and Mahler-type exponent estimates."""

import itertools
from fractions import Fraction

import pytest

from utils.errors import NoNonconstantTerm, ZeroPolynomial
from utils.exponents import (
    LambdaPolynomial,
    deg_height,
    height_H,
    height_Ht,
    is_irreducible,
    kvwa_search,
    mahler_label,
    monomial_basis,
    omega_k_lower,
    vanishes_exactly,
    veronese,
    vwa_reduction,
)
from utils.literals import parse_xpoly
from utils.series_ring import Poly, Vector, series_from_rational


def _rational(field, numerator, denominator, floor=-40):
    return series_from_rational(Poly(field, numerator), Poly(field, denominator), floor)


def test_monomial_basis_order():
    assert monomial_basis(2, 2).exponents == ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert monomial_basis(1, 3).N == 3
    assert monomial_basis(3, 2).N == 9


def test_veronese_values(F3):
    x1 = _rational(F3, [1], [1, 1])
    x2 = _rational(F3, [2], [0, 1])
    image = veronese(Vector((x1, x2)), 2)
    assert len(image) == 5
    assert image[3].source.numerator == Poly(F3, [2])
    assert image[3].source.denominator == Poly(F3, [0, 1, 1])


def test_heights_and_reduction(F3):
    P = parse_xpoly("T^2*X^2+X+2*T^3", F3)
    assert height_H(P) == 3
    assert height_Ht(P) == 2
    reduction = vwa_reduction(P, 2)
    assert reduction.q_norm == 2
    assert reduction.p == Poly(F3, [0, 0, 0, 2])
    assert reduction.holds
    assert deg_height(parse_xpoly("X+1", F3)) == 1


def test_height_errors(F3):
    with pytest.raises(ZeroPolynomial):
        height_H(LambdaPolynomial.from_mapping(F3, 1, {}))
    with pytest.raises(NoNonconstantTerm):
        height_Ht(parse_xpoly("T+1", F3))


def test_normalized_and_literal(F3):
    P = parse_xpoly("2*X1*X2+T*X2^2+1", F3, 2)
    assert P.to_literal() == "2*X1*X2+T*X2^2+1"
    assert P.normalized().to_literal() == "X1*X2+2*T*X2^2+2"


def test_irreducibility(F3):
    assert is_irreducible(parse_xpoly("X^2+T*X+2", F3))
    assert not is_irreducible(parse_xpoly("X^2+2*T^2", F3))
    assert not is_irreducible(parse_xpoly("T*X+T", F3))
    assert is_irreducible(parse_xpoly("T*X+1", F3))


def test_vanishing_is_proven_for_the_minimal_polynomial(F3, alpha3):
    x = Vector((alpha3,))
    assert vanishes_exactly(parse_xpoly("X^2+T*X+2", F3), x)
    assert vanishes_exactly(parse_xpoly("X^3+T*X^2+2*X", F3), x)
    assert not vanishes_exactly(parse_xpoly("X^2+2", F3), x)


def test_kvwa_quadratic_series_has_no_linear_witnesses(alpha3):
    assert kvwa_search(Vector((alpha3,)), 1, 1, 6) == []


def test_kvwa_rational_point_has_a_vanishing_witness(F2):
    witnesses = kvwa_search(Vector((_rational(F2, [1], [1, 1]),)), 1, 1, 2)
    assert [w.level for w in witnesses][:1] == [1]
    assert witnesses[0].poly.to_literal() == "T*X+X+1"
    assert witnesses[0].err.is_bottom()
    assert all(w.reduction.holds for w in witnesses)
    assert len([w for w in witnesses if w.level == 2]) == 2


def _exhaustive_kvwa(x, k, s, h_max):
    """All P over F_2 with coefficients of degree <= h_max meeting the k-VWA inequality."""
    basis = monomial_basis(len(x), k)
    field = x.field
    choices = [Poly(field, c) for c in itertools.product(range(2), repeat=h_max + 1)]
    found = set()
    for constant, *coeffs in itertools.product(choices, repeat=basis.N + 1):
        if all(c.is_zero() for c in coeffs):
            continue
        P = LambdaPolynomial.from_basis(basis, constant, coeffs)
        h = deg_height(P)
        if P.evaluate(x).log_abs() < -(basis.N + s) * h:
            found.add(P.to_literal())
    return found


@pytest.mark.parametrize("h_max", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2])
def test_kvwa_search_matches_brute_force(F2, k, h_max):
    x = Vector((_rational(F2, [0, 1], [1, 1, 1]),))
    found = {w.poly.to_literal() for w in kvwa_search(x, k, 1, h_max)}
    assert found == _exhaustive_kvwa(x, k, 1, h_max)


@pytest.mark.parametrize("h_max", [1, 2, 3])
def test_kvwa_search_matches_brute_force_on_the_quadratic_series(alpha2, h_max):
    x = Vector((alpha2,))
    found = {w.poly.to_literal() for w in kvwa_search(x, 1, 1, h_max)}
    assert found == _exhaustive_kvwa(x, 1, 1, h_max)


def test_omega_of_the_quadratic_series(alpha3):
    estimate = omega_k_lower(alpha3, 1, 6)
    assert not estimate.infinite
    assert estimate.best_exponent == Fraction(1)
    assert estimate.ratio_to_k() == Fraction(1)
    assert estimate.certified


def test_omega_counts_constant_coefficient_witnesses(alpha3):
    estimate = omega_k_lower(alpha3, 1, 0)
    assert estimate.best_exponent == Fraction(1)
    assert height_H(estimate.witness).value == 0
    assert estimate.witness_err == -1


def test_omega_detects_the_minimal_polynomial(alpha3):
    estimate = omega_k_lower(alpha3, 2, 1)
    assert estimate.infinite
    assert estimate.certified
    assert estimate.witness.to_literal() == "X^2+T*X+2"
    assert estimate.exponent_text() == "inf"


def test_omega_of_a_rational_series(F2):
    estimate = omega_k_lower(_rational(F2, [1], [1, 1]), 1, 2)
    assert estimate.infinite
    assert estimate.witness.to_literal() == "T*X+X+1"
    assert estimate.to_dict()["best_exponent"] == "inf"


def test_mahler_labels(F2, alpha3):
    assert mahler_label(_rational(F2, [1], [1, 1]), 2, 2).label == "annihilated"
    report = mahler_label(alpha3, 1, 3)
    assert report.label == "consistent-with-S"
    assert "lower bound only" in report.caveats
    assert mahler_label(alpha3, 2, 1).label == "annihilated"
