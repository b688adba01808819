"""Veronese embedding, polynomial heights, k-VWA searches and Mahler-type exponents.

Polynomials P in Lambda[X_1..X_d] are ``LambdaPolynomial`` objects keyed by
exponent tuples. The monomial order is graded-lexicographic: total degree
ascending, then exponent tuples in descending lexicographic order, so for
d=2, k=2 the basis is x1, x2, x1^2, x1*x2, x2^2.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config.settings import get_settings
from utils.errors import EnumerationLimitExceeded, InvalidArgument, NoNonconstantTerm, ZeroPolynomial
from utils.field_core import FiniteField
from utils.linalg import KernelSystem, fractional_kernel
from utils.parallel import parallel_map
from utils.series_ring import (
    BOTTOM,
    LaurentSeries,
    LogAbs,
    Poly,
    RationalSource,
    Vector,
    AlgebraicSource,
    log_max,
    poly_part,
    series_from_poly,
)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Monomials and the Veronese map


@dataclass(frozen=True)
class MonomialBasis:
    d: int
    k: int
    exponents: Tuple[Exponent, ...]

    @property
    def N(self) -> int:
        return len(self.exponents)

    def index(self, exponent: Exponent) -> int:
        return self.exponents.index(exponent)


@lru_cache(maxsize=None)
def monomial_basis(d: int, k: int) -> MonomialBasis:
    if d < 1 or k < 1:
        raise InvalidArgument("monomial basis needs d >= 1 and k >= 1")
    exponents: List[Exponent] = []
    for total in range(1, k + 1):
        level = [e for e in itertools.product(range(total + 1), repeat=d) if sum(e) == total]
        exponents.extend(sorted(level, reverse=True))
    basis = MonomialBasis(d, k, tuple(exponents))
    assert basis.N == comb(k + d, d) - 1
    return basis


def _monomials(x: Vector, exponents: Iterable[Exponent]) -> Dict[Exponent, LaurentSeries]:
    d = len(x)
    cache: Dict[Exponent, LaurentSeries] = {}

    def value(e: Exponent) -> LaurentSeries:
        if e in cache:
            return cache[e]
        i = next(i for i, v in enumerate(e) if v)
        lower = e[:i] + (e[i] - 1,) + e[i + 1:]
        result = x[i] if not any(lower) else value(lower) * x[i]
        cache[e] = result
        return result

    return {e: value(e) for e in exponents if len(e) == d}


def veronese(x: Vector, k: int) -> Vector:
    basis = monomial_basis(len(x), k)
    values = _monomials(x, basis.exponents)
    return Vector(tuple(values[e] for e in basis.exponents))


# ---------------------------------------------------------------------------
# Polynomials over Lambda


def _variable(d: int, i: int) -> str:
    return "X" if d == 1 else f"X{i + 1}"


@dataclass(frozen=True)
class LambdaPolynomial:
    """Sparse polynomial in X_1..X_d with coefficients in Lambda = F_q[T]."""

    field: FiniteField
    d: int
    terms: Tuple[Tuple[Exponent, Poly], ...] = dc_field(default=())

    @classmethod
    def from_mapping(cls, field: FiniteField, d: int, mapping: Dict[Exponent, Poly]) -> "LambdaPolynomial":
        terms = tuple(sorted((e, c) for e, c in mapping.items() if not c.is_zero()))
        return cls(field, d, terms)

    @classmethod
    def from_basis(cls, basis: MonomialBasis, constant: Poly, coeffs: Sequence[Poly]) -> "LambdaPolynomial":
        mapping = {(0,) * basis.d: constant}
        mapping.update(zip(basis.exponents, coeffs))
        return cls.from_mapping(constant.field, basis.d, mapping)

    def as_dict(self) -> Dict[Exponent, Poly]:
        return dict(self.terms)

    def coefficient(self, exponent: Exponent) -> Poly:
        return self.as_dict().get(tuple(exponent), Poly.zero(self.field))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> Optional[int]:
        return max((sum(e) for e, _ in self.terms), default=None)

    def constant_term(self) -> Poly:
        return self.coefficient((0,) * self.d)

    def nonconstant(self) -> Dict[Exponent, Poly]:
        return {e: c for e, c in self.terms if any(e)}

    def basis_coefficients(self, basis: MonomialBasis) -> Tuple[Poly, ...]:
        mapping = self.as_dict()
        return tuple(mapping.get(e, Poly.zero(self.field)) for e in basis.exponents)

    def univariate(self) -> List[Poly]:
        """Coefficients in ascending powers of X (d = 1 only)."""
        if self.d != 1:
            raise InvalidArgument("univariate view needs d = 1")
        degree = self.total_degree or 0
        mapping = self.as_dict()
        return [mapping.get((i,), Poly.zero(self.field)) for i in range(degree + 1)]

    def scale(self, c: int) -> "LambdaPolynomial":
        return LambdaPolynomial.from_mapping(self.field, self.d, {e: p.scale(c) for e, p in self.terms})

    def normalized(self) -> "LambdaPolynomial":
        """Scalar multiple whose first nonzero coefficient (graded-lex order, constant last) is monic."""
        if self.is_zero():
            return self
        order = sorted(self.terms, key=lambda t: (sum(t[0]) == 0, sum(t[0]), tuple(-v for v in t[0])))
        return self.scale(self.field.inv(order[0][1].lead))

    def evaluate(self, x: Vector) -> LaurentSeries:
        if len(x) != self.d:
            raise InvalidArgument(f"polynomial in {self.d} variables evaluated at a {len(x)}-vector")
        values = _monomials(x, [e for e, _ in self.terms if any(e)])
        acc = series_from_poly(self.constant_term(), x.floor)
        for e, c in self.terms:
            if any(e):
                acc = acc + values[e] * c
        return acc

    def to_literal(self) -> str:
        parts = []
        ordered = sorted(self.terms, key=lambda t: (-sum(t[0]), tuple(-v for v in t[0])))
        for exponent, coeff in ordered:
            mono = "*".join(
                _variable(self.d, i) if v == 1 else f"{_variable(self.d, i)}^{v}" for i, v in enumerate(exponent) if v
            )
            for power, c in sorted(((i, c) for i, c in enumerate(coeff.coeffs) if c), reverse=True):
                factors = []
                if power == 0:
                    if c != 1 or not mono:
                        factors.append(self.field.format(c))
                else:
                    if c != 1:
                        factors.append(self.field.format(c))
                    factors.append("T" if power == 1 else f"T^{power}")
                if mono:
                    factors.append(mono)
                parts.append("*".join(factors))
        return "+".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.to_literal()


def height_H(P: LambdaPolynomial) -> LogAbs:
    if P.is_zero():
        raise ZeroPolynomial("H(P) is undefined for P = 0")
    return log_max([c.log_abs for _, c in P.terms])


def height_Ht(P: LambdaPolynomial) -> LogAbs:
    nonconstant = P.nonconstant()
    if not nonconstant:
        raise NoNonconstantTerm("H~(P) needs a nonconstant term")
    return log_max([c.log_abs for c in nonconstant.values()])


@dataclass(frozen=True)
class Reduction:
    """P(x) = q . veronese(x) + p, with the height comparison H(P) >= ||q||."""

    q_norm: LogAbs
    p: Poly
    height: LogAbs
    height_tilde: LogAbs

    @property
    def holds(self) -> bool:
        return self.height >= self.q_norm and self.height >= self.height_tilde


def vwa_reduction(P: LambdaPolynomial, k: int) -> Reduction:
    basis = monomial_basis(P.d, k)
    q = P.basis_coefficients(basis)
    return Reduction(
        q_norm=log_max([c.log_abs for c in q]),
        p=P.constant_term(),
        height=height_H(P),
        height_tilde=height_Ht(P) if P.nonconstant() else BOTTOM,
    )


# ---------------------------------------------------------------------------
# k-VWA witnesses


@dataclass(frozen=True)
class KVWAWitness:
    poly: LambdaPolynomial
    height: int
    level: int
    err: LogAbs
    err_exact: bool
    reduction: Reduction

    def to_dict(self) -> Dict[str, object]:
        return {
            "poly": self.poly.to_literal(),
            "height_log": self.height,
            "level": self.level,
            "err_log": self.err.to_json(),
            "err_exact": self.err_exact,
            "q_norm_log": self.reduction.q_norm.to_json(),
            "reduction_holds": self.reduction.holds,
        }


def deg_height(P: LambdaPolynomial) -> int:
    """max(1, log H(P)); height-0 polynomials are measured at level 1."""
    return max(1, height_H(P).value)


def _level_witnesses(x: Vector, k: int, s: int, h: int) -> List[KVWAWitness]:
    basis = monomial_basis(len(x), k)
    y = veronese(x, k)
    depth = (basis.N + s) * h
    system = fractional_kernel(list(y), h, depth)
    limit = get_settings().enumeration_limit
    found: Dict[str, KVWAWitness] = {}
    for coeffs in system.elements(limit):
        form = y[0] * coeffs[0]
        for series, c in zip(list(y)[1:], coeffs[1:]):
            form = form + series * c
        constant = -poly_part(form)
        if not constant.is_zero() and constant.degree > h:
            continue
        P = LambdaPolynomial.from_basis(basis, constant, coeffs).normalized()
        if deg_height(P) != h:
            continue
        key = P.to_literal()
        if key in found:
            continue
        err, exact = P.evaluate(x).magnitude()
        if not err < -(basis.N + s) * h:
            continue
        found[key] = KVWAWitness(P, height_H(P).value, h, err, exact, vwa_reduction(P, k))
    logger.debug("k-VWA level h=%d: kernel dimension %d, %d witnesses", h, system.dimension, len(found))
    return [found[key] for key in sorted(found)]


def kvwa_search(x: Vector, k: int, s: int, h_max: int) -> List[KVWAWitness]:
    """Every P (up to F_q-scalars) of total degree <= k and H(P) <= e^h_max with
    deg P(x) < -(N+s) * max(1, log H(P))."""

    if s < 1:
        raise InvalidArgument("the exponent increment s must be positive")
    levels = parallel_map(lambda h: _level_witnesses(x, k, s, h), range(1, h_max + 1))
    return [w for level in levels for w in level]


# ---------------------------------------------------------------------------
# Irreducibility in F_q[T][X]


def _monic_polys(field: FiniteField, degree: int) -> Iterable[Poly]:
    for tail in itertools.product(range(field.q), repeat=degree):
        yield Poly(field, list(tail) + [1])


def _factorization(poly: Poly) -> Dict[Poly, int]:
    """Monic irreducible factorisation by trial division (desk-scale degrees)."""
    remaining = poly.monic()
    factors: Dict[Poly, int] = {}
    degree = 1
    while remaining.degree is not None and 2 * degree <= remaining.degree:
        for candidate in _monic_polys(poly.field, degree):
            while True:
                quotient, rem = divmod(remaining, candidate)
                if not rem.is_zero():
                    break
                factors[candidate] = factors.get(candidate, 0) + 1
                remaining = quotient
        degree += 1
    if remaining.degree:
        factors[remaining] = factors.get(remaining, 0) + 1
    return factors


def _monic_divisors(poly: Poly) -> List[Poly]:
    divisors = [Poly.one(poly.field)]
    for factor, multiplicity in _factorization(poly).items():
        powers = [Poly.one(poly.field)]
        for _ in range(multiplicity):
            powers.append(powers[-1] * factor)
        divisors = [d * p for d in divisors for p in powers]
    return divisors


def _divides(A: Sequence[Poly], P: Sequence[Poly]) -> bool:
    """Exact divisibility of P by A in Lambda[X] (coefficients ascending in X)."""
    R = list(P)
    a = len(A) - 1
    lead = A[-1]
    for i in range(len(R) - 1, a - 1, -1):
        if R[i].is_zero():
            continue
        quotient, rem = divmod(R[i], lead)
        if not rem.is_zero():
            return False
        for t in range(a + 1):
            R[i - a + t] = R[i - a + t] - quotient * A[t]
    return all(c.is_zero() for c in R)


def is_irreducible(P: LambdaPolynomial) -> bool:
    """Irreducibility in F_q[T][X] of a univariate P with deg_X >= 1 (content must be 1)."""
    coeffs = P.univariate()
    degree = len(coeffs) - 1
    if degree < 1:
        return False
    field = P.field
    content = Poly.zero(field)
    for c in coeffs:
        content = content.gcd(c)
    if content.degree:
        return False
    if degree == 1:
        return True
    if coeffs[0].is_zero():
        return False
    t_degree = max(c.degree for c in coeffs if not c.is_zero())
    leads = _monic_divisors(coeffs[-1])
    tails = [d.scale(u) for d in _monic_divisors(coeffs[0]) for u in field.nonzero()]
    limit = get_settings().enumeration_limit
    for a in range(1, degree // 2 + 1):
        middle_count = field.q ** ((a - 1) * (t_degree + 1))
        if len(leads) * len(tails) * middle_count > limit:
            raise EnumerationLimitExceeded(f"irreducibility test would try more than {limit} factors")
        middles = itertools.product(
            (Poly(field, c) for c in itertools.product(range(field.q), repeat=t_degree + 1)), repeat=a - 1
        )
        for middle in middles:
            for lead in leads:
                for tail in tails:
                    if _divides([tail, *middle, lead], coeffs):
                        return False
    return True


def _pseudo_remainder(P: Sequence[Poly], F: Sequence[Poly]) -> List[Poly]:
    R = list(P)
    while R and R[-1].is_zero():
        R.pop()
    df = len(F) - 1
    lf = F[-1]
    while len(R) - 1 >= df:
        c = R[-1]
        shift = len(R) - 1 - df
        R = [r * lf for r in R]
        for t in range(df + 1):
            R[shift + t] = R[shift + t] - c * F[t]
        while R and R[-1].is_zero():
            R.pop()
    return R


def vanishes_exactly(P: LambdaPolynomial, x: Vector) -> bool:
    """True when P(x) = 0 is proven: rational coordinates, or divisibility by the minimal polynomial."""
    value = P.evaluate(x)
    if isinstance(value.source, RationalSource):
        return value.exact_zero
    if P.d == 1 and isinstance(x[0].source, AlgebraicSource):
        return not _pseudo_remainder(P.univariate(), list(x[0].source.minpoly))
    return False


# ---------------------------------------------------------------------------
# Exponent estimates


@dataclass(frozen=True)
class ExponentEstimate:
    """Certified lower bound for omega_k(x) at height cap e^h_max.

    A witness P contributes -deg P(x) / (log H(P) + 1); ``infinite`` marks a
    vanishing witness.
    """

    k: int
    h_max: int
    best_exponent: Optional[Fraction]
    infinite: bool
    witness: Optional[LambdaPolynomial]
    witness_err: LogAbs
    irreducible_only: bool
    certified: bool = True

    def ratio_to_k(self) -> Optional[Fraction]:
        if self.infinite or self.best_exponent is None:
            return None
        return self.best_exponent / self.k

    def exponent_text(self) -> str:
        if self.infinite:
            return "inf"
        return "none" if self.best_exponent is None else str(self.best_exponent)

    def to_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "h_max": self.h_max,
            "best_exponent": self.exponent_text(),
            "witness": self.witness.to_literal() if self.witness is not None else None,
            "witness_err_log": self.witness_err.to_json(),
            "irreducible_only": self.irreducible_only,
            "certified": self.certified,
        }


def _depth_limit(y: Vector, k: int, h: int, h_max: int) -> int:
    bound = k * h_max * (k + 2) - h
    for series in y:
        if not series.extendable:
            bound = min(bound, -series.floor - h)
    return bound


def _level_system(y: Vector, h: int, depth: int) -> Optional[KernelSystem]:
    system = fractional_kernel(list(y), h, depth, poly_cap=h)
    if not system.dimension:
        return None
    return system


def _to_poly(y: Vector, basis: MonomialBasis, coeffs: Sequence[Poly]) -> LambdaPolynomial:
    form = y[0] * coeffs[0]
    for series, c in zip(list(y)[1:], coeffs[1:]):
        form = form + series * c
    return LambdaPolynomial.from_basis(basis, -poly_part(form), coeffs)


def _level_best(x: Vector, y: Vector, basis: MonomialBasis, k: int, h: int, h_max: int, irreducible_only: bool):
    """Best (exponent, witness, err, infinite, certified) among P with H(P) <= e^h."""
    top = _depth_limit(y, k, h, h_max)
    if top < 0 or _level_system(y, h, 0) is None:
        return None
    lo, hi = 0, top
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _level_system(y, h, mid) is not None:
            lo = mid
        else:
            hi = mid - 1
    limit = get_settings().enumeration_limit
    for depth in range(lo, -1, -1):
        system = _level_system(y, h, depth)
        if irreducible_only:
            candidates = [_to_poly(y, basis, c) for c in system.elements(limit)]
            candidates = [P for P in candidates if is_irreducible(P)]
        else:
            candidates = [_to_poly(y, basis, system.first)]
        if not candidates:
            continue
        best = None
        for P in candidates:
            err, exact = P.evaluate(x).magnitude()
            height = height_H(P).value
            if err.is_bottom():
                certified = vanishes_exactly(P, x)
                return (None, P, err, True, certified)
            value = Fraction(-err.value, height + 1)
            if best is None or value > best[0]:
                best = (value, P, err, False, exact)
        return best
    return None


def omega_k_lower(x: LaurentSeries, k: int, h_max: int, irreducible_only: bool = False) -> ExponentEstimate:
    """Exact maximum of -deg P(x) / (log H(P) + 1) over nonzero P, deg_X P <= k, H(P) <= e^h_max.

    The height is normalized to log H(P) + 1, the logarithm of e*H(P): each witness
    P contributes -deg P(x) / (log H(P) + 1), which stays finite for
    constant-coefficient P. The shift does not change the limit as H grows.
    """

    vector = Vector((x,))
    basis = monomial_basis(1, k)
    y = veronese(vector, k)
    results = parallel_map(
        lambda h: _level_best(vector, y, basis, k, h, h_max, irreducible_only), range(0, h_max + 1)
    )
    best_value: Optional[Fraction] = None
    best = None
    for result in results:
        if result is None:
            continue
        value, P, err, infinite, certified = result
        if infinite:
            return ExponentEstimate(k, h_max, None, True, P, err, irreducible_only, certified)
        if best_value is None or value > best_value:
            best_value, best = value, result
    if best is None:
        return ExponentEstimate(k, h_max, None, False, None, BOTTOM, irreducible_only)
    _, P, err, _, certified = best
    return ExponentEstimate(k, h_max, best_value, False, P, err, irreducible_only, certified)


@dataclass(frozen=True)
class MahlerReport:
    label: str
    estimates: Tuple[ExponentEstimate, ...]
    caveats: Tuple[str, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "trend": [
                {
                    **estimate.to_dict(),
                    "ratio_to_k": str(estimate.ratio_to_k()) if estimate.ratio_to_k() is not None else None,
                }
                for estimate in self.estimates
            ],
            "caveats": list(self.caveats),
        }


def mahler_label(x: LaurentSeries, k_max: int, h_max: int, *, threshold: Fraction = Fraction(2)) -> MahlerReport:
    estimates: List[ExponentEstimate] = []
    for k in range(1, k_max + 1):
        estimate = omega_k_lower(x, k, h_max)
        estimates.append(estimate)
        if estimate.infinite:
            caveats = ("lower bound only", f"vanishing polynomial of degree <= {k} found")
            if not estimate.certified:
                caveats += ("vanishing checked only down to the available precision",)
            return MahlerReport("annihilated", tuple(estimates), caveats)
    ratios = [e.ratio_to_k() or Fraction(0) for e in estimates]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    if len(ratios) > 1 and decreasing and ratios[-1] < Fraction(1, 2):
        label = "consistent-with-A"
    elif max(ratios) <= threshold:
        label = "consistent-with-S"
    else:
        label = "consistent-with-T/U"
    caveats = ("lower bound only", f"k <= {k_max}, H(P) <= e^{h_max}")
    return MahlerReport(label, tuple(estimates), caveats)
