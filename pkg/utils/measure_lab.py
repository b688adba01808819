"""Haar-measure checks of the friendliness hypotheses: Federer, (C, alpha)-good and nonplanar.

Absolute values are e^deg; Haar measure is normalised to 1 on the closed
unit ball and scales by q per degree in each coordinate, so the log-measures
reported here are log_q quantities (``measure_base = "q"``).

Sample points are Laurent polynomials truncated at a sampling floor, kept as
an integer array of shape (count, d, width) whose column t holds the
coefficient of T^(top - t). Monomials are evaluated for the whole cloud at
once with the field's numpy tables.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import DegenerateFunction, InsufficientSamples, InvalidArgument
from utils.exponents import ExponentEstimate, MonomialBasis, omega_k_lower
from utils.field_core import FiniteField
from utils.linalg import polynomial_rank
from utils.parallel import parallel_map
from utils.series_ring import LaurentPoly, Poly, Vector, series_from_literal, series_from_poly

logger = logging.getLogger(__name__)

CHUNK = 4096
MIN_SAMPLES = 1000
NOMINAL_FEDERER_LOG = 2
NEG = -(10 ** 9)


def zero_vector(field: FiniteField, d: int) -> Vector:
    return Vector(tuple(series_from_poly(Poly.zero(field)) for _ in range(d)))


@dataclass(frozen=True)
class UltraBall:
    """Closed ball {y : ||y - center|| <= e^radius_log}."""

    center: Vector
    radius_log: int

    @property
    def d(self) -> int:
        return len(self.center)

    @property
    def log_measure(self) -> int:
        return self.d * self.radius_log

    def tripled(self) -> "UltraBall":
        """B(x, 3 e^j) = B(x, e^(j+1)) in the value group e^Z."""
        return UltraBall(self.center, self.radius_log + 1)

    def contains(self, point: Vector) -> bool:
        distance = max((p - c).log_abs() for p, c in zip(point, self.center))
        return distance <= self.radius_log


# ---------------------------------------------------------------------------
# Federer


@dataclass(frozen=True)
class FedererReport:
    d: int
    j: int
    log_ratio: int
    measure_base: str = "q"

    @property
    def matches_nominal(self) -> bool:
        return self.log_ratio == NOMINAL_FEDERER_LOG

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "j": self.j,
            "log_ratio": self.log_ratio,
            "measure_base": self.measure_base,
            "nominal_log_ratio": NOMINAL_FEDERER_LOG,
            "discrepancy": not self.matches_nominal,
        }


def federer_ratio(d: int, j: int) -> FedererReport:
    if d < 1:
        raise InvalidArgument("d must be positive")
    return FedererReport(d, j, d)


def _log_q(n: int, q: int) -> int:
    exponent = round(math.log(n, q)) if n > 0 else None
    if exponent is None or q ** exponent != n:
        raise ValueError(f"{n} is not a power of {q}")
    return exponent


@dataclass(frozen=True)
class BallCount:
    d: int
    j: int
    floor: int
    inside: int
    total: int

    def log_measures(self, q: int) -> Tuple[int, int]:
        """log_q Haar measure of B(0, e^j) and B(0, e^(j+1)) from the counts."""
        cell = self.d * (self.floor - 1)
        return _log_q(self.inside, q) + cell, _log_q(self.total, q) + cell

    def to_dict(self, q: int) -> Dict[str, object]:
        inner, outer = self.log_measures(q)
        return {
            "d": self.d,
            "j": self.j,
            "floor": self.floor,
            "inside": self.inside,
            "total": self.total,
            "log_measure": inner,
            "log_measure_tripled": outer,
            "log_ratio": outer - inner,
            "measure_base": "q",
        }


def exhaustive_ball_count(field: FiniteField, d: int, j: int, floor: int) -> BallCount:
    """Count the truncated points of B(0, e^(j+1)) that fall in B(0, e^j)."""
    if floor > j:
        raise InvalidArgument("floor must not exceed the radius")
    width = j + 1 - floor + 1
    total = inside = 0
    for digits in itertools.product(field.elements(), repeat=d * width):
        total += 1
        if all(digits[i * width] == 0 for i in range(d)):
            inside += 1
    return BallCount(d, j, floor, inside, total)


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True, eq=False)
class SampleCloud:
    ball: UltraBall
    field: FiniteField
    seed: int
    floor: int
    top: int
    coefficients: np.ndarray

    @property
    def count(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def d(self) -> int:
        return self.ball.d

    @cached_property
    def points(self) -> Tuple[Vector, ...]:
        return tuple(self.point(i) for i in range(self.count))

    def point(self, index: int) -> Vector:
        coords = []
        for row in self.coefficients[index]:
            terms = {self.top - t: int(c) for t, c in enumerate(row) if c}
            coords.append(series_from_literal(LaurentPoly.from_terms(self.field, terms), self.floor))
        return Vector(tuple(coords))


def _chunk(args: Tuple[int, int, int, int, int, int]) -> np.ndarray:
    seed, index, size, d, width, q = args
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    return rng.integers(0, q, size=(size, d, width), dtype=np.int64)


def sample_ball(ball: UltraBall, floor: int, seed: int, count: int) -> SampleCloud:
    """``count`` Haar-uniform points of ``ball`` truncated at ``floor``; chunk c is seeded by (seed, c)."""

    if floor > ball.radius_log:
        raise InvalidArgument("sampling floor must not exceed the ball radius")
    if count < 0:
        raise InvalidArgument("count must be nonnegative")
    field = ball.center.field
    j = ball.radius_log
    centers = [c.truncate(floor) for c in ball.center]
    top = max([j] + [c.top for c in centers if not c.is_zero()])
    width = top - floor + 1
    offset_width = j - floor + 1
    jobs = [
        (seed, index, min(CHUNK, count - start), ball.d, offset_width, field.q)
        for index, start in enumerate(range(0, count, CHUNK))
    ]
    chunks = parallel_map(_chunk, jobs)
    offsets = np.concatenate(chunks) if chunks else np.zeros((0, ball.d, offset_width), dtype=np.int64)
    values = np.zeros((count, ball.d, width), dtype=np.int64)
    values[:, :, top - j:] = offsets
    for i, center in enumerate(centers):
        row = np.array([center.coefficient(top - t) for t in range(width)], dtype=np.int64)
        values[:, i, :] = field.add_table[values[:, i, :], row[None, :]]
    logger.debug("Sampled %d points of a radius-e^%d ball in F^%d (floor %d)", count, j, ball.d, floor)
    return SampleCloud(ball, field, seed, floor, top, values)


def plant_zero(cloud: SampleCloud, coordinate: int) -> SampleCloud:
    """The same cloud pushed onto the hyperplane x_coordinate = 0."""
    if not 0 <= coordinate < cloud.d:
        raise InvalidArgument(f"coordinate {coordinate} out of range for d={cloud.d}")
    values = cloud.coefficients.copy()
    values[:, coordinate, :] = 0
    return SampleCloud(cloud.ball, cloud.field, cloud.seed, cloud.floor, cloud.top, values)


class _Batch:
    """One Laurent polynomial per sample: values[:, t] is the coefficient of T^(top - t)."""

    def __init__(self, field: FiniteField, values: np.ndarray, top: int):
        self.field = field
        self.values = values
        self.top = top

    @property
    def low(self) -> int:
        return self.top - self.values.shape[1] + 1

    @classmethod
    def constant(cls, field: FiniteField, n: int, value: LaurentPoly) -> "_Batch":
        if value.is_zero():
            return cls(field, np.zeros((n, 1), dtype=np.int64), 0)
        row = np.array([value.coefficient(value.top - t) for t in range(value.top - value.low + 1)], dtype=np.int64)
        return cls(field, np.tile(row, (n, 1)), value.top)

    def __mul__(self, other: "_Batch") -> "_Batch":
        add, mul = self.field.add_table, self.field.mul_table
        n, wa = self.values.shape
        wb = other.values.shape[1]
        out = np.zeros((n, wa + wb - 1), dtype=np.int64)
        for i in range(wa):
            column = self.values[:, i]
            if not column.any():
                continue
            out[:, i:i + wb] = add[out[:, i:i + wb], mul[column[:, None], other.values]]
        return _Batch(self.field, out, self.top + other.top)

    def __add__(self, other: "_Batch") -> "_Batch":
        top = max(self.top, other.top)
        low = min(self.low, other.low)
        out = np.zeros((self.values.shape[0], top - low + 1), dtype=np.int64)
        for batch in (self, other):
            start = top - batch.top
            span = slice(start, start + batch.values.shape[1])
            out[:, span] = self.field.add_table[out[:, span], batch.values]
        return _Batch(self.field, out, top)

    def log_abs(self) -> np.ndarray:
        nonzero = self.values != 0
        first = np.argmax(nonzero, axis=1)
        return np.where(nonzero.any(axis=1), self.top - first, NEG)

    def polys(self, shift: int) -> List[Poly]:
        """Rows as polynomials after multiplying by T^shift (shift >= -low)."""
        pad = [0] * (self.low + shift)
        return [Poly(self.field, pad + [int(c) for c in row[::-1]]) for row in self.values]


def _monomial_batches(cloud: SampleCloud, basis: MonomialBasis) -> List[_Batch]:
    coords = [_Batch(cloud.field, cloud.coefficients[:, i, :], cloud.top) for i in range(cloud.d)]
    cache: Dict[Tuple[int, ...], _Batch] = {}

    def value(e: Tuple[int, ...]) -> _Batch:
        if e not in cache:
            i = next(i for i, v in enumerate(e) if v)
            lower = e[:i] + (e[i] - 1,) + e[i + 1:]
            cache[e] = coords[i] if not any(lower) else value(lower) * coords[i]
        return cache[e]

    return [value(e) for e in basis.exponents]


# ---------------------------------------------------------------------------
# (C, alpha)-good


def coordinate_sublevel(q: int, j: int, t: int) -> Fraction:
    """Haar fraction of B(0, e^j) where |x_i| < e^-t (the t + j + 1 top coefficients vanish)."""
    return Fraction(1, q ** (t + j + 1))


@dataclass(frozen=True)
class GoodFit:
    d: int
    k: int
    function: Tuple[str, ...]
    eps_grid: Tuple[int, ...]
    fractions: Tuple[float, ...]
    norm_log: int
    alpha_hat: Optional[float]
    c_hat: Optional[float]
    zero_mass: bool
    count: int
    seed: int

    @property
    def target_alpha(self) -> float:
        return 1.0 / (self.d * self.k)

    def rows(self) -> List[Tuple[int, float]]:
        return list(zip(self.eps_grid, self.fractions))

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "k": self.k,
            "function": list(self.function),
            "eps_log": [-t for t in self.eps_grid],
            "fractions": list(self.fractions),
            "norm_log": self.norm_log,
            "alpha_hat": self.alpha_hat,
            "c_hat": self.c_hat,
            "target_alpha": self.target_alpha,
            "zero_mass": self.zero_mass,
            "count": self.count,
            "seed": self.seed,
        }


def good_fit(
    basis: MonomialBasis,
    coeffs: Sequence[LaurentPoly],
    ball: UltraBall,
    floor: int,
    seed: int,
    count: int,
    eps_grid: Sequence[int],
    *,
    min_samples: int = MIN_SAMPLES,
) -> GoodFit:
    """Sublevel fractions of f = c_0 + sum c_i M_i over a Haar cloud and the fitted decay.

    ``eps_grid`` lists t with epsilon = e^-t, strictly increasing. alpha_hat is
    the least-squares slope of ln(fraction) against ln(epsilon / ||f||).
    """

    if count < min_samples:
        raise InsufficientSamples(f"good_fit needs at least {min_samples} samples, got {count}")
    if len(coeffs) != basis.N + 1:
        raise InvalidArgument(f"expected {basis.N + 1} coefficients (constant first), got {len(coeffs)}")
    grid = list(eps_grid)
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidArgument("eps grid must be nonempty and strictly decreasing in epsilon")
    if max(grid) >= -floor:
        raise InvalidArgument(f"eps grid reaches below the sampling floor {floor}")
    if all(c.is_zero() for c in coeffs):
        raise DegenerateFunction("f is identically zero")
    cloud = sample_ball(ball, floor, seed, count)
    field = cloud.field
    f = _Batch.constant(field, count, coeffs[0])
    for c, monomial in zip(coeffs[1:], _monomial_batches(cloud, basis)):
        if not c.is_zero():
            f = f + _Batch.constant(field, count, c) * monomial
    degrees = f.log_abs()
    if (degrees == NEG).all():
        raise DegenerateFunction("f vanishes on every sample")
    norm = int(degrees.max())
    fractions = tuple(float(np.mean(degrees < -t)) for t in grid)
    informative = [(-t - norm, frac) for t, frac in zip(grid, fractions) if frac > 0]
    alpha_hat = c_hat = None
    if len(informative) >= 2:
        xs = np.array([x for x, _ in informative], dtype=float)
        ys = np.log([frac for _, frac in informative])
        alpha_hat = float(np.polyfit(xs, ys, 1)[0])
    elif informative and informative[0][0]:
        x, frac = informative[0]
        alpha_hat = math.log(frac) / x
    if informative:
        exponent = 1.0 / (basis.d * basis.k)
        c_hat = max(frac / math.exp(x * exponent) for x, frac in informative)
    function = tuple(c.to_literal() for c in coeffs)
    logger.debug("good_fit: norm e^%d, fractions %s, alpha_hat %s", norm, fractions, alpha_hat)
    return GoodFit(
        basis.d, basis.k, function, tuple(grid), fractions, norm, alpha_hat, c_hat, not informative, count, seed
    )


# ---------------------------------------------------------------------------
# Nonplanarity


@dataclass(frozen=True)
class RankReport:
    rank: int
    functions: int
    count: int

    @property
    def nonplanar(self) -> bool:
        return self.rank == self.functions

    def to_dict(self) -> Dict[str, object]:
        return {"rank": self.rank, "functions": self.functions, "count": self.count, "nonplanar": self.nonplanar}


def nonplanar_check(basis: MonomialBasis, ball: UltraBall, cloud: SampleCloud) -> RankReport:
    """Rank over F_q(T) of the (N+1) x count evaluation matrix of 1, M_1, ..., M_N."""

    functions = basis.N + 1
    if cloud.count < functions:
        raise InsufficientSamples(f"{functions} functions need at least {functions} samples, got {cloud.count}")
    if cloud.d != basis.d:
        raise InvalidArgument(f"basis in {basis.d} variables, cloud in F^{cloud.d}")
    field = cloud.field
    one = _Batch.constant(field, cloud.count, LaurentPoly.from_poly(Poly.one(field)))
    batches = [one] + _monomial_batches(cloud, basis)
    shift = max(0, -min(b.low for b in batches))
    rows = [b.polys(shift) for b in batches]
    report = RankReport(polynomial_rank(rows), functions, cloud.count)
    logger.debug("nonplanar_check: rank %d of %d on %d samples", report.rank, functions, cloud.count)
    return report


# ---------------------------------------------------------------------------
# Monte-Carlo probes


@dataclass(frozen=True)
class FedererEstimate:
    d: int
    j: int
    fraction: float
    log_ratio_estimate: Optional[float]
    log_ratio: int
    count: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "j": self.j,
            "fraction_inside": self.fraction,
            "log_ratio_estimate": self.log_ratio_estimate,
            "log_ratio": self.log_ratio,
            "measure_base": "q",
            "count": self.count,
        }


def federer_monte_carlo(field: FiniteField, d: int, j: int, *, seed: int, count: int, floor: Optional[int] = None) -> FedererEstimate:
    """Fraction of Haar samples of B(0, e^(j+1)) that land in B(0, e^j)."""
    floor = j if floor is None else floor
    outer = UltraBall(zero_vector(field, d), j + 1)
    cloud = sample_ball(outer, floor, seed, count)
    inside = int(np.sum(~cloud.coefficients[:, :, 0].any(axis=1)))
    fraction = inside / count if count else 0.0
    estimate = -math.log(fraction, field.q) if fraction > 0 else None
    return FedererEstimate(d, j, fraction, estimate, federer_ratio(d, j).log_ratio, count)


@dataclass(frozen=True)
class SprindzukReport:
    k: int
    h_max: int
    estimates: Tuple[ExponentEstimate, ...]

    def finite_exponents(self) -> List[Fraction]:
        return [e.best_exponent for e in self.estimates if not e.infinite and e.best_exponent is not None]

    def to_dict(self) -> Dict[str, object]:
        finite = self.finite_exponents()
        return {
            "k": self.k,
            "h_max": self.h_max,
            "count": len(self.estimates),
            "exponents": [e.exponent_text() for e in self.estimates],
            "min": str(min(finite)) if finite else None,
            "max": str(max(finite)) if finite else None,
            "at_least_k": sum(1 for value in finite if value >= self.k),
        }


def sprindzuk_probe(
    field: FiniteField, k: int, h_max: int, *, seed: int, count: int, floor: Optional[int] = None
) -> SprindzukReport:
    """omega_k lower bounds at Haar-sampled points of the unit ball of F."""
    floor = -k * h_max * (k + 2) if floor is None else floor
    cloud = sample_ball(UltraBall(zero_vector(field, 1), 0), floor, seed, count)
    estimates = [omega_k_lower(point[0], k, h_max) for point in cloud.points]
    return SprindzukReport(k, h_max, tuple(estimates))
