"""Polynomials over F_q and precision-tracked Laurent series in F_q((T^-1)).

Magnitudes never leave the integer log domain: ``|a| = e^deg(a)`` is stored
as ``LogAbs(deg a)`` with ``BOTTOM`` for zero.

A ``LaurentSeries`` is a view (source tag + precision floor) onto a memoised
coefficient generator. Rational and algebraic generators, and any arithmetic
built only from them, can produce coefficients at any depth, so their views
extend on demand; literal generators stop at their floor.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from functools import total_ordering
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import get_settings
from utils.errors import (
    ConfigMismatch,
    DivisionByZero,
    InsufficientPrefix,
    NonSeparableOrAmbiguousBranch,
    PrecisionIndeterminate,
)
from utils.field_core import FiniteField

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# LogAbs


@total_ordering
@dataclass(frozen=True)
class LogAbs:
    """deg(a) for |a| = e^deg(a); ``value=None`` is the bottom element |0| = 0."""

    value: Optional[int] = None

    @staticmethod
    def _coerce(other: Union["LogAbs", int]) -> "LogAbs":
        return other if isinstance(other, LogAbs) else LogAbs(int(other))

    def is_bottom(self) -> bool:
        return self.value is None

    def __lt__(self, other: Union["LogAbs", int]) -> bool:
        other = self._coerce(other)
        if self.value is None:
            return other.value is not None
        if other.value is None:
            return False
        return self.value < other.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, LogAbs):
            return self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __add__(self, other: Union["LogAbs", int]) -> "LogAbs":
        other = self._coerce(other)
        if self.value is None or other.value is None:
            return BOTTOM
        return LogAbs(self.value + other.value)

    __radd__ = __add__

    def to_json(self) -> Optional[int]:
        return self.value

    def __str__(self) -> str:
        return "⊥" if self.value is None else str(self.value)


BOTTOM = LogAbs(None)


def log_max(values: Sequence[LogAbs]) -> LogAbs:
    return max(values, default=BOTTOM)


# ---------------------------------------------------------------------------
# Poly


def _check_same(a: FiniteField, b: FiniteField) -> None:
    if a is not b and a.config != b.config:
        raise ConfigMismatch(f"F_{a.q} polynomial combined with F_{b.q} polynomial")


def _strip(coeffs: Sequence[int]) -> Tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


class Poly:
    """Element of Lambda = F_q[T]; ``coeffs`` ascending in T, top coefficient nonzero."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Sequence[int] = ()):
        self.field = field
        self.coeffs = _strip(coeffs)

    @classmethod
    def zero(cls, field: FiniteField) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: FiniteField) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FiniteField, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FiniteField, c: int, k: int) -> "Poly":
        return cls(field, (0,) * k + (c,))

    @classmethod
    def T(cls, field: FiniteField) -> "Poly":
        return cls(field, (0, 1))

    @property
    def degree(self) -> Optional[int]:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def log_abs(self) -> LogAbs:
        return LogAbs(self.degree)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "Poly") -> "Poly":
        _check_same(self.field, other.field)
        add = self.field._add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = add[out[i]][y]
        return Poly(self.field, out)

    def __neg__(self) -> "Poly":
        neg = self.field._neg
        return Poly(self.field, [neg[c] for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c: int) -> "Poly":
        row = self.field._mul[c]
        return Poly(self.field, [row[x] for x in self.coeffs])

    def shift_up(self, k: int) -> "Poly":
        """Multiply by T^k, k >= 0."""
        if not self.coeffs or k == 0:
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def __mul__(self, other: "Poly") -> "Poly":
        _check_same(self.field, other.field)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.field, ())
        field = self.field
        if field.r == 1 and len(a) * len(b) > 4096:
            product = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % field.p
            return Poly(field, product.tolist())
        mul, add = field._mul, field._add
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return Poly(field, out)

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        _check_same(self.field, other.field)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        field = self.field
        mul, add, neg = field._mul, field._add, field._neg
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        if len(rem) - 1 < db:
            return Poly(field, ()), self
        inv_lead = field.inv(other.lead)
        quot = [0] * (len(rem) - db)
        b = other.coeffs
        for top in range(len(rem) - 1, db - 1, -1):
            c = rem[top]
            if not c:
                continue
            factor = mul[c][inv_lead]
            quot[top - db] = factor
            row = mul[neg[factor]]
            base = top - db
            for i, y in enumerate(b):
                if y:
                    rem[base + i] = add[rem[base + i]][row[y]]
        return Poly(field, quot), Poly(field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd (zero only when both inputs are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Poly":
        field = self.field
        return Poly(field, [field.mul(field.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.field.config == other.field.config

    def __hash__(self) -> int:
        return hash((self.field.config, self.coeffs))

    def to_literal(self, var: str = "T") -> str:
        return _format_terms(self.field, [(i, c) for i, c in enumerate(self.coeffs)], var)

    def __str__(self) -> str:
        return self.to_literal()

    def __repr__(self) -> str:
        return f"Poly({self.to_literal()!r}, q={self.field.q})"


def _format_term(field: FiniteField, power: int, c: int, var: str) -> str:
    if power == 0:
        return field.format(c)
    mono = var if power == 1 else f"{var}^{power}"
    return mono if c == 1 else f"{field.format(c)}*{mono}"


def _format_terms(field: FiniteField, terms: Sequence[Tuple[int, int]], var: str) -> str:
    parts = [_format_term(field, power, c, var) for power, c in sorted(terms, reverse=True) if c]
    return "+".join(parts) if parts else "0"


def poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    return divmod(a, b)


# ---------------------------------------------------------------------------
# LaurentPoly


class LaurentPoly:
    """Finite Laurent polynomial ``poly * T^shift`` with ``poly`` not divisible by T."""

    __slots__ = ("field", "poly", "shift")

    def __init__(self, field: FiniteField, poly: Poly, shift: int = 0):
        coeffs = poly.coeffs
        low = 0
        while low < len(coeffs) and coeffs[low] == 0:
            low += 1
        if low == len(coeffs):
            self.field, self.poly, self.shift = field, Poly(field, ()), 0
        else:
            self.field = field
            self.poly = Poly(field, coeffs[low:]) if low else poly
            self.shift = shift + low

    @classmethod
    def zero(cls, field: FiniteField) -> "LaurentPoly":
        return cls(field, Poly(field, ()))

    @classmethod
    def from_poly(cls, poly: Poly) -> "LaurentPoly":
        return cls(poly.field, poly, 0)

    @classmethod
    def from_terms(cls, field: FiniteField, terms: Dict[int, int]) -> "LaurentPoly":
        live = {d: c for d, c in terms.items() if c}
        if not live:
            return cls.zero(field)
        low = min(live)
        coeffs = [0] * (max(live) - low + 1)
        for d, c in live.items():
            coeffs[d - low] = c
        return cls(field, Poly(field, coeffs), low)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    @property
    def top(self) -> Optional[int]:
        return None if self.poly.is_zero() else self.shift + self.poly.degree

    @property
    def low(self) -> Optional[int]:
        return None if self.poly.is_zero() else self.shift

    @property
    def log_abs(self) -> LogAbs:
        return LogAbs(self.top)

    def coefficient(self, j: int) -> int:
        return self.poly.coefficient(j - self.shift)

    def terms(self) -> List[Tuple[int, int]]:
        return [(self.shift + i, c) for i, c in enumerate(self.poly.coeffs) if c]

    def _aligned(self, other: "LaurentPoly") -> Tuple[Poly, Poly, int]:
        if self.is_zero():
            return Poly(self.field, ()), other.poly, other.shift
        if other.is_zero():
            return self.poly, Poly(self.field, ()), self.shift
        base = min(self.shift, other.shift)
        return self.poly.shift_up(self.shift - base), other.poly.shift_up(other.shift - base), base

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b, base = self._aligned(other)
        return LaurentPoly(self.field, a + b, base)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b, base = self._aligned(other)
        return LaurentPoly(self.field, a - b, base)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.field, -self.poly, self.shift)

    def __mul__(self, other: Union["LaurentPoly", Poly]) -> "LaurentPoly":
        if isinstance(other, Poly):
            return LaurentPoly(self.field, self.poly * other, self.shift)
        return LaurentPoly(self.field, self.poly * other.poly, self.shift + other.shift)

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly(self.field, self.poly.scale(c), self.shift)

    def times_monomial(self, c: int, k: int) -> "LaurentPoly":
        return LaurentPoly(self.field, self.poly.scale(c), self.shift + k)

    def truncate(self, floor: int) -> "LaurentPoly":
        """Drop the terms of degree below ``floor``."""
        if self.is_zero() or self.shift >= floor:
            return self
        cut = floor - self.shift
        return LaurentPoly(self.field, Poly(self.field, self.poly.coeffs[cut:]), floor)

    def to_poly(self) -> Poly:
        """The polynomial part (nonnegative degrees)."""
        if self.is_zero():
            return self.poly
        if self.shift >= 0:
            return self.poly.shift_up(self.shift)
        return Poly(self.field, self.poly.coeffs[-self.shift:])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.poly == other.poly and self.shift == other.shift

    def __hash__(self) -> int:
        return hash((self.poly, self.shift))

    def to_literal(self, var: str = "T") -> str:
        return _format_terms(self.field, self.terms(), var)

    def __str__(self) -> str:
        return self.to_literal()


def evaluate_laurent(coefficients: Sequence[Poly], x: LaurentPoly) -> LaurentPoly:
    """Horner evaluation of sum_i coefficients[i] X^i at a Laurent polynomial."""
    field = x.field
    acc = LaurentPoly.zero(field)
    for coeff in reversed(coefficients):
        acc = acc * x + LaurentPoly.from_poly(coeff)
    return acc


# ---------------------------------------------------------------------------
# Sources (what a series is) and generators (how coefficients are produced)


@dataclass(frozen=True)
class RationalSource:
    numerator: Poly
    denominator: Poly
    kind: str = "rational"


@dataclass(frozen=True)
class AlgebraicSource:
    minpoly: Tuple[Poly, ...]
    prefix: LaurentPoly
    prefix_floor: int
    kind: str = "algebraic"


@dataclass(frozen=True)
class LiteralSource:
    terms: LaurentPoly
    floor: int
    kind: str = "literal"


@dataclass(frozen=True)
class DerivedSource:
    operation: str
    kind: str = "derived"


Source = Union[RationalSource, AlgebraicSource, LiteralSource, DerivedSource]


class _Generator:
    """Memoised coefficient provider.

    ``ceiling`` bounds the degrees of nonzero coefficients (None: exactly zero);
    ``limit`` is the lowest computable degree (None: unlimited).
    """

    def __init__(self, field: FiniteField, ceiling: Optional[int], limit: Optional[int]):
        self.field = field
        self.ceiling = ceiling
        self.limit = limit
        self._lock = threading.RLock()
        self._top_cache: Optional[int] = None

    @property
    def exact_zero(self) -> bool:
        return self.ceiling is None

    def coefficient(self, j: int) -> int:
        if self.ceiling is None or j > self.ceiling:
            return 0
        if self.limit is not None and j < self.limit:
            raise PrecisionIndeterminate(
                f"coefficient at degree {j} lies below the precision limit {self.limit}",
                degree=j,
                floor=self.limit,
            )
        return self._coefficient(j)

    def _coefficient(self, j: int) -> int:
        raise NotImplementedError

    def top(self, stop: int) -> Optional[int]:
        """Highest nonzero degree >= ``stop`` (clamped to ``limit``), or None."""
        if self.ceiling is None:
            return None
        if self._top_cache is not None:
            return self._top_cache if self._top_cache >= stop else None
        lowest = stop if self.limit is None else max(stop, self.limit)
        for j in range(self.ceiling, lowest - 1, -1):
            if self.coefficient(j):
                self._top_cache = j
                return j
        return None

    def effective_ceiling(self) -> Optional[int]:
        """A ceiling tightened by a bounded scan; None when provably zero."""
        if self.ceiling is None:
            return None
        stop = self.ceiling - get_settings().auto_extend
        found = self.top(stop)
        if found is not None:
            return found
        lowest = stop if self.limit is None else max(stop, self.limit)
        return lowest - 1


class _SequentialGenerator(_Generator):
    """Coefficients computed strictly from the top down (each may use the higher ones)."""

    def __init__(self, field: FiniteField, ceiling: Optional[int], limit: Optional[int]):
        super().__init__(field, ceiling, limit)
        self._values: List[int] = []

    def _coefficient(self, j: int) -> int:
        index = self.ceiling - j
        if index < len(self._values):
            return self._values[index]
        with self._lock:
            while len(self._values) <= index:
                self._values.append(self._next_value(self.ceiling - len(self._values)))
            return self._values[index]

    def _known(self, j: int) -> int:
        """Already computed coefficient at degree j (0 above the ceiling)."""
        if j > self.ceiling:
            return 0
        return self._values[self.ceiling - j]

    def _next_value(self, j: int) -> int:
        raise NotImplementedError


class _RationalGenerator(_SequentialGenerator):
    def __init__(self, numerator: Poly, denominator: Poly):
        field = numerator.field
        ceiling = None if numerator.is_zero() else numerator.degree - denominator.degree
        super().__init__(field, ceiling, None)
        self.numerator = numerator
        self.denominator = denominator
        self._inv_lead = field.inv(denominator.lead)

    def _next_value(self, j: int) -> int:
        field = self.field
        dq = self.denominator.degree
        b = self.denominator.coeffs
        acc = self.numerator.coefficient(j + dq)
        for i in range(dq):
            if b[i]:
                acc = field.sub(acc, field.mul(b[i], self._known(j + dq - i)))
        return field.mul(acc, self._inv_lead)


class _LiteralGenerator(_Generator):
    def __init__(self, terms: LaurentPoly, floor: int):
        terms = terms.truncate(floor)
        ceiling = terms.top if not terms.is_zero() else floor - 1
        super().__init__(terms.field, ceiling, floor)
        self.terms = terms

    def _coefficient(self, j: int) -> int:
        return self.terms.coefficient(j)


class _AlgebraicGenerator(_SequentialGenerator):
    """Coefficient-recursive Newton lifting of a simple root of sum_i A_i X^i."""

    def __init__(self, minpoly: Sequence[Poly], prefix: LaurentPoly, prefix_floor: int):
        field = prefix.field
        coeffs = list(minpoly)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if len(coeffs) < 2:
            raise NonSeparableOrAmbiguousBranch("minimal polynomial must have positive degree in X")
        beta0 = prefix.truncate(prefix_floor)
        derivative = [c.scale(field.from_int(i + 1)) for i, c in enumerate(coeffs[1:])]
        if all(c.is_zero() for c in derivative):
            raise NonSeparableOrAmbiguousBranch("formal derivative vanishes identically (inseparable in characteristic p)")
        slope = evaluate_laurent(derivative, beta0)
        if slope.is_zero():
            raise NonSeparableOrAmbiguousBranch("derivative vanishes at the branch prefix")
        delta = slope.top
        residual = evaluate_laurent(coeffs, beta0)
        if not residual.is_zero() and residual.top >= prefix_floor + delta:
            raise NonSeparableOrAmbiguousBranch(
                f"prefix does not approximate a root: deg F(prefix)={residual.top}, needs < {prefix_floor + delta}"
            )
        for order in range(2, len(coeffs)):
            hasse = [c.scale(field.from_int(comb(t, order))) for t, c in enumerate(coeffs)][order:]
            value = evaluate_laurent(hasse, beta0)
            if not value.is_zero() and value.top + (order - 1) * (prefix_floor - 1) >= delta:
                raise InsufficientPrefix(
                    f"prefix floor {prefix_floor} does not isolate a single root (order-{order} term too large)"
                )
        ceiling = beta0.top if not beta0.is_zero() else prefix_floor - 1
        super().__init__(field, ceiling, None)
        self.minpoly = tuple(coeffs)
        self.prefix = beta0
        self.prefix_floor = prefix_floor
        self.delta = delta
        self._slope_lead_inv = field.inv(slope.coefficient(delta))
        self._powers: List[LaurentPoly] = []
        logger.debug("Algebraic branch: deg F'=%d, prefix floor %d", delta, prefix_floor)

    def _next_value(self, j: int) -> int:
        if j >= self.prefix_floor:
            return self.prefix.coefficient(j)
        field = self.field
        if not self._powers:
            self._powers = [LaurentPoly.from_poly(Poly.one(field))]
            for _ in range(1, len(self.minpoly)):
                self._powers.append(self._powers[-1] * self.prefix)
        target = j + self.delta
        acc = 0
        for power, coeff in zip(self._powers, self.minpoly):
            for t, a in enumerate(coeff.coeffs):
                if a:
                    acc = field.add(acc, field.mul(a, power.coefficient(target - t)))
        c = field.neg(field.mul(acc, self._slope_lead_inv))
        if c:
            self._advance(c, j)
        return c

    def _advance(self, c: int, j: int) -> None:
        """Replace the stored powers of beta by powers of beta + c T^j."""
        field = self.field
        old = self._powers
        new = []
        for i in range(len(old)):
            acc = LaurentPoly.zero(field)
            for l in range(i + 1):
                binom = field.from_int(comb(i, l))
                if binom:
                    acc = acc + old[i - l].times_monomial(field.mul(binom, field.pow(c, l)), l * j)
            new.append(acc)
        self._powers = new

    def truncation(self, floor: int) -> LaurentPoly:
        terms = {j: self.coefficient(j) for j in range(self.ceiling, floor - 1, -1)}
        return LaurentPoly.from_terms(self.field, terms)


class _SumGenerator(_Generator):
    def __init__(self, a: _Generator, b: _Generator, subtract: bool):
        ceilings = [c for c in (a.ceiling, b.ceiling) if c is not None]
        limits = [l for l in (a.limit, b.limit) if l is not None]
        super().__init__(a.field, max(ceilings) if ceilings else None, max(limits) if limits else None)
        self.a, self.b, self.subtract = a, b, subtract

    def _coefficient(self, j: int) -> int:
        x, y = self.a.coefficient(j), self.b.coefficient(j)
        return self.field.sub(x, y) if self.subtract else self.field.add(x, y)


class _ProductGenerator(_Generator):
    def __init__(self, a: _Generator, b: _Generator):
        ca, cb = a.effective_ceiling(), b.effective_ceiling()
        if ca is None or cb is None:
            super().__init__(a.field, None, None)
        else:
            bounds = []
            if a.limit is not None:
                bounds.append(a.limit + cb)
            if b.limit is not None:
                bounds.append(b.limit + ca)
            super().__init__(a.field, ca + cb, max(bounds) if bounds else None)
        self.a, self.b = a, b
        self._ca, self._cb = ca, cb
        self._memo: Dict[int, int] = {}

    def _coefficient(self, j: int) -> int:
        cached = self._memo.get(j)
        if cached is not None:
            return cached
        field = self.field
        acc = 0
        for i in range(j - self._cb, self._ca + 1):
            x = self.a.coefficient(i)
            if x:
                y = self.b.coefficient(j - i)
                if y:
                    acc = field.add(acc, field.mul(x, y))
        self._memo[j] = acc
        return acc


class _InverseGenerator(_SequentialGenerator):
    def __init__(self, a: _Generator, top: int):
        limit = None if a.limit is None else a.limit - 2 * top
        super().__init__(a.field, -top, limit)
        self.a = a
        self.k0 = top
        self._inv_lead = a.field.inv(a.coefficient(top))

    def _next_value(self, j: int) -> int:
        field = self.field
        k0 = self.k0
        acc = 1 if j == -k0 else 0
        for i in range(j + 2 * k0, k0):
            x = self.a.coefficient(i)
            if x:
                acc = field.sub(acc, field.mul(x, self._known(j + k0 - i)))
        return field.mul(acc, self._inv_lead)


class _FracGenerator(_Generator):
    def __init__(self, a: _Generator):
        ceiling = None if a.ceiling is None else min(a.ceiling, -1)
        super().__init__(a.field, ceiling, a.limit)
        self.a = a

    def _coefficient(self, j: int) -> int:
        return self.a.coefficient(j) if j < 0 else 0


# ---------------------------------------------------------------------------
# LaurentSeries


class LaurentSeries:
    """Precision-tracked element of F = F_q((T^-1)): a source tag, a generator and a floor."""

    __slots__ = ("field", "source", "floor", "_gen")

    def __init__(self, generator: _Generator, source: Source, floor: int):
        self.field = generator.field
        self.source = source
        self.floor = floor
        self._gen = generator

    @property
    def ceiling(self) -> Optional[int]:
        return self._gen.ceiling

    @property
    def extendable(self) -> bool:
        return self._gen.limit is None

    @property
    def exact_zero(self) -> bool:
        return self._gen.exact_zero

    @property
    def kind(self) -> str:
        return self.source.kind

    def coefficient(self, j: int) -> int:
        if j < self.floor and not self._gen.exact_zero:
            raise PrecisionIndeterminate(
                f"coefficient at degree {j} is below the floor {self.floor}", degree=j, floor=self.floor
            )
        return self._gen.coefficient(j)

    def coefficients(self, high: int, low: int) -> List[int]:
        """Coefficients at degrees high, high-1, ..., low."""
        return [self.coefficient(j) for j in range(high, low - 1, -1)]

    def extend(self, floor: int) -> "LaurentSeries":
        """The same series known down to ``floor`` (never raises the floor)."""
        if floor >= self.floor:
            return self
        limit = self._gen.limit
        if limit is not None and floor < limit and not self._gen.exact_zero:
            raise PrecisionIndeterminate(
                f"{self.kind} series cannot be extended below degree {limit} (requested {floor})",
                degree=floor,
                floor=limit,
            )
        return LaurentSeries(self._gen, self.source, floor)

    def top_degree(self) -> Optional[int]:
        """Highest nonzero degree at or above the floor; None if known-zero down to the floor."""
        return self._gen.top(self.floor)

    def is_known_zero(self) -> bool:
        return self.top_degree() is None

    def magnitude(self) -> Tuple[LogAbs, bool]:
        """(LogAbs, exact). Extendable series keep searching up to FFDIOPH_AUTO_EXTEND below the floor."""
        top = self.top_degree()
        if top is not None:
            return LogAbs(top), True
        if self._gen.exact_zero:
            return BOTTOM, True
        if self.extendable:
            top = self._gen.top(self.floor - get_settings().auto_extend)
            if top is not None:
                return LogAbs(top), True
        return BOTTOM, False

    def log_abs(self) -> LogAbs:
        return self.magnitude()[0]

    def require_top(self) -> int:
        """Top degree, searching deeper for extendable sources; raises when undeterminable."""
        value, exact = self.magnitude()
        if value.is_bottom():
            if exact:
                raise DivisionByZero("series is exactly zero")
            raise PrecisionIndeterminate(
                f"top degree not determinable above floor {self.floor}", floor=self.floor
            )
        return value.value

    def truncate(self, floor: Optional[int] = None) -> LaurentPoly:
        floor = self.floor if floor is None else floor
        if self._gen.exact_zero:
            return LaurentPoly.zero(self.field)
        series = self.extend(floor)
        terms = {j: series.coefficient(j) for j in range(self.ceiling, floor - 1, -1)}
        return LaurentPoly.from_terms(self.field, terms)

    # Arithmetic -----------------------------------------------------------

    def _peer(self, other: "LaurentSeries") -> None:
        if self.field.config != other.field.config:
            raise ConfigMismatch("series over different fields")

    def _rational(self) -> Optional[RationalSource]:
        return self.source if isinstance(self.source, RationalSource) else None

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_add(self, other)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_sub(self, other)

    def __neg__(self) -> "LaurentSeries":
        return series_neg(self)

    def __mul__(self, other: Union["LaurentSeries", Poly]) -> "LaurentSeries":
        return series_mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        return series_inv(self)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_mul(self, series_inv(other))

    def __repr__(self) -> str:
        return f"LaurentSeries(kind={self.kind}, ceiling={self.ceiling}, floor={self.floor}, q={self.field.q})"


def require_floor(series: "LaurentSeries", floor: int) -> "LaurentSeries":
    return series.extend(floor)


def _rational_series(numerator: Poly, denominator: Poly, floor: int) -> LaurentSeries:
    g = numerator.gcd(denominator) if not numerator.is_zero() else denominator.monic()
    if not g.is_zero() and g.degree > 0:
        numerator, denominator = numerator // g, denominator // g
    unit = numerator.field.inv(denominator.lead)
    numerator, denominator = numerator.scale(unit), denominator.scale(unit)
    if numerator.is_zero():
        denominator = Poly.one(numerator.field)
    source = RationalSource(numerator, denominator)
    return LaurentSeries(_RationalGenerator(numerator, denominator), source, floor)


def series_from_rational(P: Poly, Q: Poly, floor: int) -> LaurentSeries:
    if Q.is_zero():
        raise DivisionByZero("rational series with zero denominator")
    _check_same(P.field, Q.field)
    return _rational_series(P, Q, floor)


def series_from_poly(P: Poly, floor: int = 0) -> LaurentSeries:
    return _rational_series(P, Poly.one(P.field), floor)


def series_from_literal(terms: LaurentPoly, floor: int) -> LaurentSeries:
    return LaurentSeries(_LiteralGenerator(terms, floor), LiteralSource(terms.truncate(floor), floor), floor)


def series_from_algebraic(minpoly: Sequence[Poly], branch_prefix: LaurentSeries, floor: int) -> LaurentSeries:
    prefix = branch_prefix.truncate()
    generator = _AlgebraicGenerator(minpoly, prefix, branch_prefix.floor)
    source = AlgebraicSource(generator.minpoly, generator.prefix, branch_prefix.floor)
    return LaurentSeries(generator, source, floor)


def algebraic_certificate(series: LaurentSeries, floor: int) -> Tuple[LogAbs, int]:
    """(LogAbs of F(root truncated at floor), certified bound floor - 1 + deg F'(root))."""
    generator = series._gen
    if not isinstance(generator, _AlgebraicGenerator):
        raise TypeError("certificate requires an algebraic series")
    value = evaluate_laurent(generator.minpoly, generator.truncation(floor))
    return value.log_abs, floor - 1 + generator.delta


def _view_top(series: LaurentSeries) -> int:
    top = series.top_degree()
    return series.floor - 1 if top is None else top


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a._peer(b)
    floor = max(a.floor, b.floor)
    ra, rb = a._rational(), b._rational()
    if ra and rb:
        return _rational_series(
            ra.numerator * rb.denominator + rb.numerator * ra.denominator, ra.denominator * rb.denominator, floor
        )
    return LaurentSeries(_SumGenerator(a._gen, b._gen, subtract=False), DerivedSource("add"), floor)


def series_sub(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a._peer(b)
    floor = max(a.floor, b.floor)
    ra, rb = a._rational(), b._rational()
    if ra and rb:
        return _rational_series(
            ra.numerator * rb.denominator - rb.numerator * ra.denominator, ra.denominator * rb.denominator, floor
        )
    return LaurentSeries(_SumGenerator(a._gen, b._gen, subtract=True), DerivedSource("sub"), floor)


def series_neg(a: LaurentSeries) -> LaurentSeries:
    return series_sub(series_from_poly(Poly.zero(a.field), a.floor), a)


def series_mul(a: LaurentSeries, b: Union[LaurentSeries, Poly]) -> LaurentSeries:
    if isinstance(b, Poly):
        _check_same(a.field, b.field)
        if b.is_zero():
            return series_from_poly(b, a.floor)
        floor = a.floor + b.degree
        b = series_from_poly(b, floor)
    else:
        a._peer(b)
        if a.exact_zero or b.exact_zero:
            return series_from_poly(Poly.zero(a.field), max(a.floor, b.floor))
        floor = max(a.floor + _view_top(b), b.floor + _view_top(a))
    ra, rb = a._rational(), b._rational()
    if ra and rb:
        return _rational_series(ra.numerator * rb.numerator, ra.denominator * rb.denominator, floor)
    return LaurentSeries(_ProductGenerator(a._gen, b._gen), DerivedSource("mul"), floor)


def series_inv(a: LaurentSeries) -> LaurentSeries:
    if a.exact_zero:
        raise DivisionByZero("inverse of the zero series")
    k0 = a.require_top()
    floor = a.floor - 2 * k0
    ra = a._rational()
    if ra:
        return _rational_series(ra.denominator, ra.numerator, floor)
    return LaurentSeries(_InverseGenerator(a._gen, k0), DerivedSource("inv"), floor)


def poly_part(a: LaurentSeries) -> Poly:
    """Sum of the terms of nonnegative degree (needs the floor at or below 0)."""
    ra = a._rational()
    if ra:
        return ra.numerator // ra.denominator
    if a.exact_zero or a.ceiling < 0:
        return Poly.zero(a.field)
    series = a.extend(0)
    return Poly(a.field, [series.coefficient(j) for j in range(0, a.ceiling + 1)])


def frac_part(a: LaurentSeries) -> LaurentSeries:
    ra = a._rational()
    if ra:
        return _rational_series(ra.numerator % ra.denominator, ra.denominator, a.floor)
    return LaurentSeries(_FracGenerator(a._gen), DerivedSource("frac"), a.floor)


def split(a: LaurentSeries) -> Tuple[Poly, LaurentSeries]:
    return poly_part(a), frac_part(a)


# ---------------------------------------------------------------------------
# Vector


@dataclass(frozen=True)
class Vector:
    coords: Tuple[LaurentSeries, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[LaurentSeries]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> LaurentSeries:
        return self.coords[index]

    @property
    def field(self) -> FiniteField:
        return self.coords[0].field

    def norm(self) -> LogAbs:
        return log_max([c.log_abs() for c in self.coords])

    @property
    def floor(self) -> int:
        return max(c.floor for c in self.coords)

    def extend(self, floor: int) -> "Vector":
        return Vector(tuple(c.extend(floor) for c in self.coords))
