"""Continued fractions of Laurent series and their convergents.

alpha = a_0 + 1/(a_1 + 1/(a_2 + ...)) with a_0 = poly_part(alpha) and deg a_i >= 1.
Convergents follow p_i = a_i p_{i-1} + p_{i-2}, q_i = a_i q_{i-1} + q_{i-2}
and are reported with q_i made monic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from utils.errors import IndexOutOfCertifiedRange, InvalidArgument, PrecisionIndeterminate
from utils.series_ring import (
    LaurentSeries,
    LogAbs,
    Poly,
    RationalSource,
    frac_part,
    poly_part,
    series_from_poly,
    series_from_rational,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CFExpansion:
    series: LaurentSeries
    a0: Poly
    quotients: Tuple[Poly, ...]
    terminated: bool
    certified_terms: int

    def denominator_degrees(self) -> List[int]:
        """deg q_0, deg q_1, ..., deg q_certified."""
        degrees = [0]
        for a in self.quotients:
            degrees.append(degrees[-1] + a.degree)
        return degrees

    def to_dict(self) -> Dict[str, object]:
        return {
            "a0": self.a0.to_literal(),
            "quotients": [a.to_literal() for a in self.quotients],
            "terminated": self.terminated,
            "certified_terms": self.certified_terms,
        }


@dataclass(frozen=True)
class Convergent:
    index: int
    p: Poly
    q: Poly
    err: LogAbs
    err_exact: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.index,
            "p": self.p.to_literal(),
            "q": self.q.to_literal(),
            "err_log": self.err.to_json(),
            "err_exact": self.err_exact,
        }


def cf_expand(alpha: LaurentSeries, max_terms: int, allow_partial: bool = False) -> CFExpansion:
    """Up to ``max_terms`` partial quotients a_1.. of alpha.

    Termination is only declared for rational sources. With ``allow_partial``
    the expansion stops at the last quotient the available precision certifies
    instead of raising PrecisionIndeterminate.
    """

    if max_terms < 0:
        raise InvalidArgument("max_terms must be nonnegative")
    a0 = poly_part(alpha)
    current = frac_part(alpha)
    quotients: List[Poly] = []
    terminated = False
    for _ in range(max_terms):
        value, exact = current.magnitude()
        if value.is_bottom():
            if exact and isinstance(current.source, RationalSource):
                terminated = True
                break
            if allow_partial:
                break
            raise PrecisionIndeterminate(
                f"cannot certify partial quotient {len(quotients) + 1}: remainder vanishes down to its floor",
                floor=current.floor,
            )
        try:
            inverse = current.inverse()
            a = poly_part(inverse)
        except PrecisionIndeterminate:
            if allow_partial:
                break
            raise
        quotients.append(a)
        current = frac_part(inverse)
    else:
        terminated = isinstance(current.source, RationalSource) and current.exact_zero
    logger.debug("cf_expand: %d quotients, terminated=%s", len(quotients), terminated)
    return CFExpansion(alpha, a0, tuple(quotients), terminated, len(quotients))


def _raw_convergents(e: CFExpansion, count: int) -> List[Tuple[Poly, Poly]]:
    field = e.a0.field
    one, zero = Poly.one(field), Poly.zero(field)
    pairs = [(e.a0, one)]
    previous = (one, zero)
    for a in e.quotients[: max(0, count - 1)]:
        (p1, q1), (p2, q2) = pairs[-1], previous
        previous = pairs[-1]
        pairs.append((a * p1 + p2, a * q1 + q2))
    return pairs[:count]


def convergents(e: CFExpansion, n: int) -> List[Convergent]:
    """C_0, ..., C_{n-1}; C_i uses the quotients a_0..a_i."""

    available = e.certified_terms + 1
    if n < 0 or n > available:
        raise IndexOutOfCertifiedRange(
            f"{n} convergents requested, {available} certified", requested=n, certified=available
        )
    degrees = e.denominator_degrees()
    result = []
    for index, (p, q) in enumerate(_raw_convergents(e, n)):
        unit = q.field.inv(q.lead)
        p, q = p.scale(unit), q.scale(unit)
        residual = e.series * q - series_from_poly(p, e.series.floor)
        err, exact = residual.magnitude()
        if not exact and index + 1 < len(degrees):
            err, exact = LogAbs(-degrees[index + 1]), False
        result.append(Convergent(index, p, q, err, exact))
    return result


def best_error_at_degree(e: CFExpansion, D: int) -> LogAbs:
    """min |q alpha - p| over q != 0 with deg q <= D."""

    if D < 0:
        raise InvalidArgument("no nonzero q has negative degree")
    return best_convergent_at_degree(e, D).err


def best_convergent_at_degree(e: CFExpansion, D: int) -> Convergent:
    degrees = e.denominator_degrees()
    index = max(i for i, deg in enumerate(degrees) if deg <= D)
    if index == len(degrees) - 1 and not e.terminated:
        raise IndexOutOfCertifiedRange(
            f"no certified convergent beyond degree {D}", requested=index + 2, certified=len(degrees)
        )
    return convergents(e, index + 1)[index]


def max_quotient_degree(e: CFExpansion, n: int) -> int:
    if n < 1:
        raise InvalidArgument("n must be positive")
    if n > e.certified_terms:
        raise IndexOutOfCertifiedRange(
            f"{n} quotients requested, {e.certified_terms} certified", requested=n, certified=e.certified_terms
        )
    return max(a.degree for a in e.quotients[:n])


def reconstruct(e: CFExpansion, n: int) -> LaurentSeries:
    """The rational function p_n / q_n folded from [a_0; a_1..a_n]."""
    if n > e.certified_terms:
        raise IndexOutOfCertifiedRange(
            f"quotient {n} requested, {e.certified_terms} certified", requested=n, certified=e.certified_terms
        )
    p, q = _raw_convergents(e, n + 1)[n]
    return series_from_rational(p, q, e.series.floor)
