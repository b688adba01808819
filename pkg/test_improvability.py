"""Dirichlet-improvability deciders, singularity probes and the rationality dichotomy."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from utils.errors import InvalidEpsilon
from utils.exponents import LambdaPolynomial, monomial_basis, veronese
from utils.field_core import field_config, get_field
from utils.improvability import (
    di_decide_linear,
    di_decide_linear_cf,
    di_decide_poly,
    di_frequency,
    di_report,
    rationality_dichotomy_experiment,
    singular_probe,
)
from utils.series_ring import Poly, Vector, frac_part, series_from_rational

F2_FIELD = get_field(field_config(2))
F3_FIELD = get_field(field_config(3))


def _rational(field, numerator, denominator, floor=-60):
    return series_from_rational(Poly(field, numerator), Poly(field, denominator), floor)


@pytest.fixture
def rational2(F2):
    # (T^2 + 1) / (T^3 + T + 1)
    return _rational(F2, [1, 0, 1], [1, 1, 0, 1])


@pytest.mark.parametrize("s", [1, 2, 3])
def test_quadratic_series_is_never_improvable(alpha3, s):
    report = di_report(Vector((alpha3,)), 1, s, 1, 30)
    assert all(not v.solvable for v in report.verdicts)
    assert report.improvable_from is None
    for m in (1, 5, 17, 30):
        assert not di_decide_linear_cf(alpha3, s, m).solvable


def test_rational_series_is_improvable_from_the_denominator_degree(rational2):
    report = di_report(Vector((rational2,)), 1, 1, 1, 12)
    assert [v.solvable for v in report.verdicts] == [False] * 4 + [True] * 8
    assert report.improvable_from == 5
    for v in report.verdicts[4:]:
        assert v.err.is_bottom()


def test_kernel_and_cf_deciders_agree(rational2, alpha3):
    for alpha in (rational2, alpha3):
        for s in (1, 2):
            for m in range(1, 10):
                assert di_decide_poly(Vector((alpha,)), 1, s, m).solvable == di_decide_linear_cf(alpha, s, m).solvable


@pytest.mark.parametrize("field", [F2_FIELD, F3_FIELD], ids=["q2", "q3"])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_random_rationals_are_improvable(field, data):
    coefficient = st.integers(min_value=0, max_value=field.q - 1)
    numerator = data.draw(st.lists(coefficient, min_size=1, max_size=5))
    denominator = data.draw(st.lists(coefficient, min_size=1, max_size=6).filter(any))
    x = _rational(field, numerator, denominator)
    report = di_report(Vector((x,)), 1, 1, 1, 30)
    assert report.improvable_from is not None
    assert all(v.solvable for v in report.verdicts if v.m >= report.improvable_from)
    for verdict in report.verdicts:
        assert di_decide_linear_cf(x, 1, verdict.m).solvable == verdict.solvable


def test_solvability_is_monotone_in_epsilon(rational2, alpha2, F2):
    for alpha in (rational2, alpha2, _rational(F2, [1, 1], [1, 0, 1, 1])):
        x = Vector((alpha,))
        for m in range(1, 13):
            solvable = [di_decide_poly(x, 1, s, m).solvable for s in range(1, 5)]
            for s in range(1, 4):
                assert solvable[s] <= solvable[s - 1]


def test_epsilon_must_be_below_one_over_e(rational2):
    with pytest.raises(InvalidEpsilon):
        di_decide_poly(Vector((rational2,)), 1, 0, 5)
    with pytest.raises(InvalidEpsilon):
        di_decide_linear_cf(rational2, 0, 5)


def test_linear_decider_returns_the_constant(rational2, F2):
    verdict, coeffs = di_decide_linear([rational2], 1, 6)
    assert verdict.solvable
    q, constant = coeffs
    assert (rational2 * q + series_from_rational(constant, Poly.one(F2), -60)).exact_zero


def _exhaustive_verdict(x, k, s, m):
    """Brute-force DI(k, e^-s) at m over F_2: every (a_1..a_N), a_0 forced to cancel the polynomial part."""
    basis = monomial_basis(len(x), k)
    y = list(veronese(x, k))
    field = x.field
    degree = m - s - 1
    if degree < 0:
        return False
    choices = [Poly(field, c) for c in itertools.product(range(2), repeat=degree + 1)]
    for coeffs in itertools.product(choices, repeat=basis.N):
        if all(c.is_zero() for c in coeffs):
            continue
        form = y[0] * coeffs[0]
        for series, c in zip(y[1:], coeffs[1:]):
            form = form + series * c
        if frac_part(form).log_abs() < -(m * basis.N + s):
            return True
    return False


@pytest.mark.parametrize("m", [1, 2, 3])
def test_k_di_reduction_matches_brute_force(F2, alpha2, m):
    for x in (_rational(F2, [1], [1, 1]), _rational(F2, [0, 1], [1, 1, 1]), alpha2):
        vector = Vector((x,))
        verdict = di_decide_poly(vector, 2, 1, m)
        assert verdict.solvable == _exhaustive_verdict(vector, 2, 1, m)
        linear, _ = di_decide_linear(list(veronese(vector, 2)), 1, m)
        assert linear.solvable == verdict.solvable


def test_witness_satisfies_the_strict_bounds(F2):
    x = Vector((_rational(F2, [1], [1, 1]), _rational(F2, [1, 1], [1, 0, 1, 1])))
    verdict = di_decide_poly(x, 1, 1, 4)
    assert verdict.solvable
    assert isinstance(verdict.witness, LambdaPolynomial)
    assert all(c.degree <= 2 for c in verdict.witness.nonconstant().values())
    assert verdict.err < -(4 * 2 + 1)


def test_dichotomy_on_a_rational_series(rational2):
    report = rationality_dichotomy_experiment(rational2, 1, 10)
    assert report.kind == "rational"
    assert report.deciders_agree
    assert report.report.improvable_from == 5
    assert report.stationary is True
    assert report.determinants and all(d.value.is_zero() for d in report.determinants)
    assert not report.recurrent_failures


def test_dichotomy_on_the_quadratic_series(alpha3):
    report = rationality_dichotomy_experiment(alpha3, 1, 30, window=3)
    assert report.kind == "algebraic"
    assert report.unsolvable == list(range(1, 31))
    assert report.recurrent_failures
    assert report.max_quotient_degree == 1
    assert report.stationary is None
    assert report.caveats
    assert report.to_dict()["deciders_agree"] is True


def test_singular_probe_on_a_rational_pair(F2):
    x = Vector((_rational(F2, [1], [1, 1]), _rational(F2, [1], [0, 1])))
    probe = singular_probe(x, 1, 2, 8)
    assert probe.consistent_with_singular
    assert [r.s for r in probe.reports] == [1, 2]


def test_di_frequency_is_seeded(F2):
    first = di_frequency(F2, 1, 1, 1, 3, seed=5, count=12)
    second = di_frequency(F2, 1, 1, 1, 3, seed=5, count=12)
    assert first == second
    assert 0 <= first["solvable"] <= 12
    assert first["floor"] == -6
