"""Haar sampling, Federer ratios, (C, alpha)-good fits, nonplanarity and the sampling probes."""

import math

import numpy as np
import pytest

from config.settings import get_settings
from utils.errors import DegenerateFunction, InsufficientSamples, InvalidArgument
from utils.exponents import monomial_basis
from utils.measure_lab import (
    UltraBall,
    coordinate_sublevel,
    exhaustive_ball_count,
    federer_monte_carlo,
    federer_ratio,
    good_fit,
    nonplanar_check,
    plant_zero,
    sample_ball,
    sprindzuk_probe,
    zero_vector,
)
from utils.series_ring import LaurentPoly, Poly


def _coordinate(field, basis, index):
    coeffs = [LaurentPoly.zero(field)] * (basis.N + 1)
    coeffs[1 + index] = LaurentPoly.from_poly(Poly.one(field))
    return coeffs


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_federer_ratio_is_d(d):
    report = federer_ratio(d, 0)
    assert report.log_ratio == d
    assert report.to_dict()["discrepancy"] == (d != 2)


@pytest.mark.parametrize("d,j", [(1, 0), (2, 0), (1, 1), (2, -1)])
def test_exhaustive_ball_count(F2, d, j):
    count = exhaustive_ball_count(F2, d, j, j)
    assert count.inside == 2 ** d
    assert count.total == 4 ** d
    inner, outer = count.log_measures(2)
    assert inner == d * j
    assert outer - inner == federer_ratio(d, j).log_ratio


def test_exhaustive_count_rejects_a_floor_above_the_radius(F2):
    with pytest.raises(InvalidArgument):
        exhaustive_ball_count(F2, 1, 0, 1)


def test_federer_monte_carlo_fraction(F3):
    estimate = federer_monte_carlo(F3, 1, 0, seed=11, count=6000)
    p = 1 / 3
    assert abs(estimate.fraction - p) <= 3 * math.sqrt(p * (1 - p) / 6000)
    assert estimate.log_ratio == 1


def test_samples_are_seeded_and_inside_the_ball(F3):
    ball = UltraBall(zero_vector(F3, 2), 1)
    first = sample_ball(ball, -5, 7, 20)
    again = sample_ball(ball, -5, 7, 20)
    other = sample_ball(ball, -5, 8, 20)
    assert np.array_equal(first.coefficients, again.coefficients)
    assert not np.array_equal(first.coefficients, other.coefficients)
    assert all(ball.contains(first.point(i)) for i in range(first.count))
    assert first.coefficients.shape == (20, 2, 7)


def test_sampling_does_not_depend_on_the_thread_count(F2, monkeypatch):
    ball = UltraBall(zero_vector(F2, 1), 0)
    monkeypatch.setenv("FFDIOPH_THREADS", "1")
    serial = sample_ball(ball, -8, 3, 9000).coefficients
    monkeypatch.setenv("FFDIOPH_THREADS", "4")
    get_settings.cache_clear()
    parallel = sample_ball(ball, -8, 3, 9000).coefficients
    assert np.array_equal(serial, parallel)


def test_empty_sample(F2):
    cloud = sample_ball(UltraBall(zero_vector(F2, 1), 0), -3, 0, 0)
    assert cloud.count == 0


def test_coordinate_sublevel_fractions(F2):
    basis = monomial_basis(1, 1)
    ball = UltraBall(zero_vector(F2, 1), 0)
    n = 10000
    fit = good_fit(basis, _coordinate(F2, basis, 0), ball, -20, 1, n, [0, 1, 2])
    for t, fraction in fit.rows():
        p = float(coordinate_sublevel(2, 0, t))
        assert abs(fraction - p) <= 3 * math.sqrt(p * (1 - p) / n)
    assert fit.norm_log == 0
    assert abs(fit.alpha_hat - math.log(2)) < 0.1
    assert fit.target_alpha == 1.0


def test_good_fit_of_a_square(F3):
    basis = monomial_basis(1, 2)
    ball = UltraBall(zero_vector(F3, 1), 0)
    fit = good_fit(basis, _coordinate(F3, basis, 1), ball, -20, 4, 5000, [0, 1, 2, 3])
    assert fit.fractions == tuple(sorted(fit.fractions, reverse=True))
    assert fit.target_alpha == 0.5
    assert fit.c_hat is not None and fit.c_hat > 0
    again = good_fit(basis, _coordinate(F3, basis, 1), ball, -20, 4, 5000, [0, 1, 2, 3])
    assert again.fractions == fit.fractions


def _random_combination(field, basis, seed):
    """c_0 = 0 and F_q-constant c_1..c_N drawn from ``seed``, not all zero."""
    values = np.random.default_rng(seed).integers(0, field.q, size=basis.N)
    if not values.any():
        values[0] = 1
    return [LaurentPoly.zero(field)] + [LaurentPoly.from_poly(Poly(field, [int(v)])) for v in values]


@pytest.mark.parametrize("d,k", [(1, 2), (2, 2)])
@pytest.mark.parametrize("seed", range(10))
def test_random_combinations_decay_at_the_target_rate(F3, d, k, seed):
    basis = monomial_basis(d, k)
    ball = UltraBall(zero_vector(F3, d), 0)
    coeffs = _random_combination(F3, basis, seed)
    fit = good_fit(basis, coeffs, ball, -20, seed, 4000, list(range(7)))
    assert fit.target_alpha == 1 / (d * k)
    assert fit.alpha_hat is not None
    assert fit.alpha_hat >= fit.target_alpha - 0.1


def test_good_fit_guards(F2):
    basis = monomial_basis(1, 1)
    ball = UltraBall(zero_vector(F2, 1), 0)
    with pytest.raises(InsufficientSamples):
        good_fit(basis, _coordinate(F2, basis, 0), ball, -20, 0, 10, [0, 1])
    with pytest.raises(DegenerateFunction):
        good_fit(basis, [LaurentPoly.zero(F2)] * 2, ball, -20, 0, 2000, [0, 1])
    with pytest.raises(InvalidArgument):
        good_fit(basis, _coordinate(F2, basis, 0), ball, -2, 0, 2000, [0, 1, 2])
    with pytest.raises(InvalidArgument):
        good_fit(basis, _coordinate(F2, basis, 0), ball, -20, 0, 2000, [2, 1])


def test_veronese_curve_is_nonplanar(F3):
    basis = monomial_basis(1, 2)
    ball = UltraBall(zero_vector(F3, 1), 0)
    cloud = sample_ball(ball, -20, 2, 50)
    report = nonplanar_check(basis, ball, cloud)
    assert report.rank == 3
    assert report.nonplanar


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("seed", range(20))
def test_seeded_clouds_have_full_rank(F3, d, seed):
    basis = monomial_basis(d, 2)
    ball = UltraBall(zero_vector(F3, d), 0)
    report = nonplanar_check(basis, ball, sample_ball(ball, -12, seed, 12))
    assert report.rank == basis.N + 1
    assert report.nonplanar


def test_planted_hyperplane_drops_the_rank(F3):
    basis = monomial_basis(2, 1)
    ball = UltraBall(zero_vector(F3, 2), 0)
    cloud = plant_zero(sample_ball(ball, -20, 2, 50), 0)
    report = nonplanar_check(basis, ball, cloud)
    assert report.rank == 2
    assert not report.nonplanar


def test_nonplanar_needs_more_samples_than_functions(F3):
    basis = monomial_basis(1, 2)
    ball = UltraBall(zero_vector(F3, 1), 0)
    with pytest.raises(InsufficientSamples):
        nonplanar_check(basis, ball, sample_ball(ball, -20, 0, basis.N))


def test_sprindzuk_probe_respects_dirichlet(F2):
    report = sprindzuk_probe(F2, 1, 2, seed=9, count=4)
    assert len(report.estimates) == 4
    for estimate in report.estimates:
        assert estimate.infinite or estimate.best_exponent >= 1
