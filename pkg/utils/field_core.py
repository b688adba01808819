"""Finite fields F_q, q = p^r, with table-driven arithmetic.

Elements are encoded as integers 0..q-1 whose base-p digits (least significant
first) are the coordinates with respect to the power basis 1, u, ..., u^(r-1)
of a root u of the modulus. ``FiniteField`` exposes the raw integer operations
used by the polynomial and series layers; ``FieldElement`` is the checked
value type for callers that want one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from config.settings import get_settings
from utils.errors import ConfigMismatch, DivisionByZero, FieldConfigError, InvalidArgument

logger = logging.getLogger(__name__)

# Monic irreducible moduli, ascending coefficients (constant term first).
BUILTIN_MODULI: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


class FieldConfig(BaseModel):
    """Defining data (p, r, modulus) of F_q; the modulus is present iff r > 1."""

    model_config = ConfigDict(frozen=True)

    p: int
    r: int = 1
    modulus: Optional[Tuple[int, ...]] = None

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"p={value} is not prime")
        return value

    @field_validator("r")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("r must be positive")
        return value

    @model_validator(mode="after")
    def _check_modulus(self) -> "FieldConfig":
        cap = get_settings().max_q
        if self.p ** self.r > cap:
            raise ValueError(f"q={self.p ** self.r} exceeds the configured cap {cap} (FFDIOPH_MAX_Q)")
        if self.r == 1:
            if self.modulus is not None:
                raise ValueError("a modulus is only meaningful for r > 1")
            return self
        if self.modulus is None:
            raise ValueError(f"no modulus given for r={self.r}")
        if len(self.modulus) != self.r + 1:
            raise ValueError(f"modulus must have degree exactly {self.r}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError("modulus coefficients must be residues mod p")
        if self.modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if not gf_irreducible_p([ZZ(c) for c in reversed(self.modulus)], self.p, ZZ):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")
        return self

    @property
    def q(self) -> int:
        return self.p ** self.r


def field_config(p: int, r: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldConfig:
    """Build a validated FieldConfig, taking the modulus from BUILTIN_MODULI when omitted."""

    if r > 1 and modulus is None:
        modulus = BUILTIN_MODULI.get((p, r))
        if modulus is None:
            raise FieldConfigError(f"no built-in modulus for p={p}, r={r}; pass one explicitly")
    try:
        return FieldConfig(p=p, r=r, modulus=tuple(modulus) if modulus is not None else None)
    except ValidationError as exc:
        raise FieldConfigError("; ".join(err["msg"] for err in exc.errors())) from exc


def field_config_for_q(q: int, modulus: Optional[Sequence[int]] = None) -> FieldConfig:
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise FieldConfigError(f"q={q} is not a prime power")
    (p, r), = factors.items()
    return field_config(int(p), int(r), modulus)


class FiniteField:
    """Arithmetic tables for one FieldConfig. Obtain instances through ``get_field``."""

    def __init__(self, config: FieldConfig):
        self.config = config
        self.p = config.p
        self.r = config.r
        self.q = config.q
        self._build_tables()

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        vectors = [self._digits(a) for a in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._undigits([(x + y) % p for x, y in zip(vectors[a], vectors[b])])
                mul[a, b] = self._undigits(self._mul_vectors(vectors[a], vectors[b]))
        neg = np.array([self._undigits([(-x) % p for x in vectors[a]]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            (hits,) = np.nonzero(mul[a] == 1)
            if len(hits) != 1:
                raise FieldConfigError(f"{self.config} does not define a field")
            inv[a] = hits[0]
        self.add_table, self.mul_table, self.neg_table, self.inv_table = add, mul, neg, inv
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = neg.tolist()
        self._inv = inv.tolist()
        logger.debug("Built tables for F_%d (p=%d, r=%d)", q, p, self.r)

    def _digits(self, value: int) -> List[int]:
        digits = []
        for _ in range(self.r):
            value, digit = divmod(value, self.p)
            digits.append(digit)
        return digits

    def _undigits(self, digits: Sequence[int]) -> int:
        value = 0
        for digit in reversed(digits):
            value = value * self.p + digit
        return value

    def _mul_vectors(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        p, r = self.p, self.r
        product = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    product[i + j] = (product[i + j] + x * y) % p
        if r > 1:
            modulus = self.config.modulus
            for top in range(len(product) - 1, r - 1, -1):
                c = product[top]
                if c:
                    for i in range(r + 1):
                        product[top - r + i] = (product[top - r + i] - c * modulus[i]) % p
        return product[:r]

    # Raw integer operations.

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, exponent: int) -> int:
        if exponent < 0:
            a, exponent = self.inv(a), -exponent
        result = 1
        while exponent:
            if exponent & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            exponent >>= 1
        return result

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def from_int(self, value: int) -> int:
        """Image of an ordinary integer in the prime subfield."""
        return value % self.p

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.r:
            raise InvalidArgument(f"expected at most {self.r} coordinates, got {len(coeffs)}")
        return self._undigits([c % self.p for c in coeffs] + [0] * (self.r - len(coeffs)))

    def coeffs(self, a: int) -> Tuple[int, ...]:
        return tuple(self._digits(a))

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def format(self, a: int) -> str:
        """Literal form: prime-subfield elements as digits, others as ``(u-poly)``."""
        if a < self.p:
            return str(a)
        terms = []
        for power, c in sorted(enumerate(self._digits(a)), reverse=True):
            if not c:
                continue
            if power == 0:
                terms.append(str(c))
                continue
            mono = "u" if power == 1 else f"u^{power}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return "(" + "+".join(terms) + ")"

    def __repr__(self) -> str:
        return f"FiniteField(q={self.q}, p={self.p}, r={self.r})"


@lru_cache(maxsize=None)
def get_field(config: FieldConfig) -> FiniteField:
    return FiniteField(config)


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FiniteField
    value: int

    def _same(self, other: "FieldElement") -> FiniteField:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field.config != self.field.config:
            raise ConfigMismatch(f"F_{self.field.q} element combined with F_{other.field.q} element")
        return self.field

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self._same(other).add(self.value, other.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self._same(other).sub(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self._same(other).mul(self.value, other.value))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self._same(other).div(self.value, other.value))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, exponent: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, exponent))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.coeffs(self.value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field.config == other.field.config and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.field.config, self.value))

    def __str__(self) -> str:
        return self.field.format(self.value)


def ff_make(cfg: FieldConfig, coeffs: Iterable[int]) -> FieldElement:
    field = get_field(cfg)
    return FieldElement(field, field.from_coeffs(list(coeffs)))


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def ff_neg(a: FieldElement) -> FieldElement:
    return -a


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()
