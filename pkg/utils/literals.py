"""Parser and printer for field, polynomial and series literals.

    fieldlit := digits | '(' upoly ')'          upoly uses the generator u
    term     := factor ('*' factor)*           factor := fieldlit | T['^'int] | X['^'int] | Xi['^'int]
    sum      := ['-'] term (('+' | '-') term)*
    series   := 'rat:(' sum ')/(' sum ')' [';floor=' int]
              | 'alg:(' sum ');prefix=(' sum ')' [';floor=' int]
              | 'lit:' sum [';floor=' int]

Printing only ever emits '+' between terms, so print(parse(x)) is the
canonical form of x.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from config.settings import get_settings
from utils.errors import FFDiophError, ParseError, SemanticError
from utils.exponents import LambdaPolynomial
from utils.field_core import FiniteField
from utils.series_ring import (
    AlgebraicSource,
    LaurentPoly,
    LaurentSeries,
    LiteralSource,
    Poly,
    RationalSource,
    series_from_algebraic,
    series_from_literal,
    series_from_rational,
)

logger = logging.getLogger(__name__)


@dataclass
class _Term:
    coeff: int
    t_power: int = 0
    x_powers: Dict[int, int] = dc_field(default_factory=dict)


class _Parser:
    def __init__(self, text: str, field: FiniteField, default_floor: Optional[int] = None):
        self.text = text
        self.field = field
        self.pos = 0
        self.default_floor = default_floor

    # Scanning --------------------------------------------------------------

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, expectation: str) -> ParseError:
        return ParseError(self.text, self.pos, expectation)

    def expect(self, literal: str) -> None:
        self._skip()
        if not self.text.startswith(literal, self.pos):
            raise self.error(repr(literal))
        self.pos += len(literal)

    def accept(self, literal: str) -> bool:
        self._skip()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def digits(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("digits")
        return int(self.text[start:self.pos])

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        return sign * self.digits()

    def end(self) -> None:
        if self.peek():
            raise self.error("end of input")

    # Grammar ---------------------------------------------------------------

    def fieldlit(self) -> int:
        if self.accept("("):
            value = self.upoly()
            self.expect(")")
            return value
        return self.field.from_int(self.digits())

    def upoly(self) -> int:
        field = self.field
        negate = self.accept("-")
        total = 0
        while True:
            value = self.uterm()
            total = field.sub(total, value) if negate else field.add(total, value)
            if self.accept("+"):
                negate = False
            elif self.accept("-"):
                negate = True
            else:
                return total

    def uterm(self) -> int:
        field = self.field
        coeff = 1
        if self.peek().isdigit():
            coeff = field.from_int(self.digits())
            if not self.accept("*"):
                return coeff
        start = self.pos
        self.expect("u")
        power = self.digits() if self.accept("^") else 1
        if field.r == 1:
            raise SemanticError(f"generator u used at position {start} but r = 1", cause_code="field_config")
        u = field.from_coeffs([0, 1])
        return field.mul(coeff, field.pow(u, power))

    def factor(self, term: _Term) -> None:
        ch = self.peek()
        if ch == "T":
            self.pos += 1
            term.t_power += self.integer() if self.accept("^") else 1
        elif ch == "X":
            self.pos += 1
            index = self.digits() - 1 if self.peek().isdigit() else 0
            if index < 0:
                raise SemanticError("variables are numbered from X1", cause_code="parse_error")
            power = self.integer() if self.accept("^") else 1
            if power < 0:
                raise SemanticError("negative powers of X are not polynomials", cause_code="parse_error")
            term.x_powers[index] = term.x_powers.get(index, 0) + power
        elif ch.isdigit() or ch == "(":
            term.coeff = self.field.mul(term.coeff, self.fieldlit())
        else:
            raise self.error("field literal, 'T' or 'X'")

    def term(self) -> _Term:
        term = _Term(1)
        self.factor(term)
        while self.accept("*"):
            self.factor(term)
        return term

    def sum(self) -> List[_Term]:
        terms = []
        negate = self.accept("-")
        while True:
            term = self.term()
            if negate:
                term.coeff = self.field.neg(term.coeff)
            terms.append(term)
            if self.accept("+"):
                negate = False
            elif self.accept("-"):
                negate = True
            else:
                return terms

    def floor(self) -> int:
        if self.accept(";floor="):
            return self.integer()
        return self.default_floor if self.default_floor is not None else get_settings().default_floor


# ---------------------------------------------------------------------------
# Term lists to values


def _no_x(terms: List[_Term], what: str) -> None:
    if any(t.x_powers for t in terms):
        raise SemanticError(f"{what} must not contain X", cause_code="parse_error")


def _laurent(terms: List[_Term], field: FiniteField) -> LaurentPoly:
    _no_x(terms, "a T-sum")
    acc: Dict[int, int] = {}
    for t in terms:
        acc[t.t_power] = field.add(acc.get(t.t_power, 0), t.coeff)
    return LaurentPoly.from_terms(field, acc)


def _poly(terms: List[_Term], field: FiniteField) -> Poly:
    if any(t.t_power < 0 for t in terms):
        raise SemanticError("polynomials in T need nonnegative powers", cause_code="parse_error")
    laurent = _laurent(terms, field)
    return laurent.to_poly() if not laurent.is_zero() else Poly.zero(field)


def _lambda(terms: List[_Term], field: FiniteField, d: Optional[int]) -> LambdaPolynomial:
    if any(t.t_power < 0 for t in terms):
        raise SemanticError("coefficients must be polynomials in T", cause_code="parse_error")
    width = max([d or 1] + [max(t.x_powers) + 1 for t in terms if t.x_powers])
    if d is not None and width > d:
        raise SemanticError(f"polynomial uses {width} variables, expected {d}", cause_code="parse_error")
    acc: Dict[Tuple[int, ...], Dict[int, int]] = {}
    for t in terms:
        exponent = tuple(t.x_powers.get(i, 0) for i in range(width))
        slot = acc.setdefault(exponent, {})
        slot[t.t_power] = field.add(slot.get(t.t_power, 0), t.coeff)
    mapping = {}
    for exponent, coeffs in acc.items():
        laurent = LaurentPoly.from_terms(field, coeffs)
        mapping[exponent] = laurent.to_poly() if not laurent.is_zero() else Poly.zero(field)
    return LambdaPolynomial.from_mapping(field, width, mapping)


# ---------------------------------------------------------------------------
# Public parsers


def parse_field_element(text: str, field: FiniteField) -> int:
    parser = _Parser(text, field)
    value = parser.fieldlit()
    parser.end()
    return value


def parse_poly(text: str, field: FiniteField) -> Poly:
    parser = _Parser(text, field)
    terms = parser.sum()
    parser.end()
    return _poly(terms, field)


def parse_laurent(text: str, field: FiniteField) -> LaurentPoly:
    parser = _Parser(text, field)
    terms = parser.sum()
    parser.end()
    return _laurent(terms, field)


def parse_xpoly(text: str, field: FiniteField, d: Optional[int] = None) -> LambdaPolynomial:
    parser = _Parser(text, field)
    terms = parser.sum()
    parser.end()
    return _lambda(terms, field, d)


def parse_series(text: str, field: FiniteField, default_floor: Optional[int] = None) -> LaurentSeries:
    """Series literal -> LaurentSeries; grammar failures raise ParseError, the rest SemanticError."""

    parser = _Parser(text, field, default_floor)
    try:
        if parser.accept("rat:"):
            parser.expect("(")
            numerator = _poly(parser.sum(), field)
            parser.expect(")/(")
            denominator = _poly(parser.sum(), field)
            parser.expect(")")
            floor = parser.floor()
            parser.end()
            return series_from_rational(numerator, denominator, floor)
        if parser.accept("alg:"):
            parser.expect("(")
            minpoly = _lambda(parser.sum(), field, 1)
            parser.expect(");prefix=(")
            prefix_terms = parser.sum()
            parser.expect(")")
            floor = parser.floor()
            parser.end()
            prefix_floor = min(t.t_power for t in prefix_terms)
            prefix = series_from_literal(_laurent(prefix_terms, field), prefix_floor)
            return series_from_algebraic(minpoly.univariate(), prefix, floor)
        if parser.accept("lit:"):
            terms = parser.sum()
            floor = parser.floor()
            parser.end()
            literal = _laurent(terms, field)
            if not literal.is_zero() and literal.low < floor:
                raise SemanticError(
                    f"term T^{literal.low} lies below floor {floor}", cause_code="precision_indeterminate"
                )
            return series_from_literal(literal, floor)
    except (ParseError, SemanticError):
        raise
    except FFDiophError as exc:
        raise SemanticError(str(exc), cause_code=exc.code) from exc
    raise parser.error("'rat:', 'alg:' or 'lit:'")


# ---------------------------------------------------------------------------
# Printing


def format_element(value: int, field: FiniteField) -> str:
    return field.format(value)


def format_poly(poly: Poly) -> str:
    return poly.to_literal()


def format_series(series: LaurentSeries) -> str:
    source = series.source
    if isinstance(source, RationalSource):
        return f"rat:({source.numerator.to_literal()})/({source.denominator.to_literal()});floor={series.floor}"
    if isinstance(source, AlgebraicSource):
        minpoly = LambdaPolynomial.from_mapping(
            series.field, 1, {(i,): c for i, c in enumerate(source.minpoly)}
        ).to_literal()
        prefix = source.prefix.to_literal() if not source.prefix.is_zero() else ""
        if source.prefix.is_zero() or source.prefix.low != source.prefix_floor:
            marker = f"0*T^{source.prefix_floor}"
            prefix = f"{prefix}+{marker}" if prefix else marker
        return f"alg:({minpoly});prefix=({prefix});floor={series.floor}"
    terms = source.terms if isinstance(source, LiteralSource) else series.truncate()
    return f"lit:{terms.to_literal()};floor={series.floor}"
