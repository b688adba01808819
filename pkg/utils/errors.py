"""Error types shared by every ffdioph module."""

from __future__ import annotations

from typing import Any, Dict, Optional


class FFDiophError(Exception):
    """Base class for library errors; ``code`` is the stable machine-readable tag."""

    code = "error"

    def details(self) -> Dict[str, Any]:
        return {}

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": str(self)}
        payload.update(self.details())
        return payload


class DivisionByZero(FFDiophError):
    """Raised when inverting zero in F_q, dividing by the zero polynomial or inverting a zero series."""

    code = "division_by_zero"


class ConfigMismatch(FFDiophError):
    """Raised when operands belong to different field configurations."""

    code = "config_mismatch"


class FieldConfigError(FFDiophError):
    """Raised when (p, r, modulus) does not describe a usable finite field."""

    code = "field_config"


class PrecisionIndeterminate(FFDiophError):
    """Raised when a needed coefficient lies below a precision floor that cannot be extended."""

    code = "precision_indeterminate"

    def __init__(self, message: str, *, degree: Optional[int] = None, floor: Optional[int] = None):
        super().__init__(message)
        self.degree = degree
        self.floor = floor

    def details(self) -> Dict[str, Any]:
        return {"degree": self.degree, "floor": self.floor}


class NonSeparableOrAmbiguousBranch(FFDiophError):
    code = "non_separable_or_ambiguous_branch"


class InsufficientPrefix(FFDiophError):
    code = "insufficient_prefix"


class IndexOutOfCertifiedRange(FFDiophError):
    """Raised when a continued-fraction query goes past the certified quotients."""

    code = "index_out_of_certified_range"

    def __init__(self, message: str, *, requested: int, certified: int):
        super().__init__(message)
        self.requested = requested
        self.certified = certified

    def details(self) -> Dict[str, Any]:
        return {"requested": self.requested, "certified": self.certified}


class InvalidEpsilon(FFDiophError):
    """Raised for epsilon = e^-s with s < 1 (epsilon must not exceed 1/e)."""

    code = "invalid_epsilon"


class InvalidArgument(FFDiophError):
    code = "invalid_argument"


class ZeroPolynomial(FFDiophError):
    code = "zero_polynomial"


class NoNonconstantTerm(FFDiophError):
    code = "no_nonconstant_term"


class DegenerateFunction(FFDiophError):
    code = "degenerate_function"


class InsufficientSamples(FFDiophError):
    code = "insufficient_samples"


class EnumerationLimitExceeded(FFDiophError):
    """Raised when an exhaustive step would visit more elements than FFDIOPH_ENUMERATION_LIMIT."""

    code = "enumeration_limit"


class ParseError(FFDiophError):
    code = "parse_error"

    def __init__(self, text: str, position: int, expectation: str):
        super().__init__(f"expected {expectation} at position {position} in {text!r}")
        self.text = text
        self.position = position
        self.expectation = expectation

    def details(self) -> Dict[str, Any]:
        return {"position": self.position, "expectation": self.expectation}


class SemanticError(FFDiophError):
    """Raised when a literal parses but denotes no valid object (Q = 0, bad branch prefix, ...)."""

    code = "semantic_error"

    def __init__(self, message: str, *, cause_code: Optional[str] = None):
        super().__init__(message)
        self.cause_code = cause_code

    def details(self) -> Dict[str, Any]:
        return {"cause": self.cause_code} if self.cause_code else {}
