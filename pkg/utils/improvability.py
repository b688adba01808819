"""Exact (k, epsilon)-Dirichlet improvability deciders and the rationality dichotomy experiment.

With epsilon = e^{-s} the strict bounds H~(P) < eps e^m and |P(x)| < eps e^{-mN}
become deg a_i <= m - s - 1 and deg P(x) <= -(mN + s + 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from utils.cfrac import best_convergent_at_degree, cf_expand, max_quotient_degree
from utils.dirichlet import linear_form
from utils.errors import InvalidArgument, InvalidEpsilon
from utils.exponents import LambdaPolynomial, monomial_basis, veronese
from utils.field_core import FiniteField
from utils.linalg import fractional_kernel
from utils.measure_lab import UltraBall, sample_ball, zero_vector
from utils.parallel import parallel_map
from utils.series_ring import BOTTOM, LaurentSeries, LogAbs, Poly, RationalSource, Vector, poly_part, series_from_poly

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 5


@dataclass(frozen=True)
class DIVerdict:
    m: int
    s: int
    solvable: bool
    method: str
    witness: Optional[LambdaPolynomial] = None
    err: LogAbs = BOTTOM
    err_exact: bool = True

    def to_dict(self) -> Dict[str, object]:
        return {
            "m": self.m,
            "s": self.s,
            "verdict": "Solvable" if self.solvable else "Unsolvable",
            "method": self.method,
            "witness": self.witness.to_literal() if self.witness is not None else None,
            "err_log": self.err.to_json() if self.solvable else None,
            "err_exact": self.err_exact if self.solvable else None,
        }


@dataclass(frozen=True)
class DIReport:
    s: int
    m_range: Tuple[int, int]
    verdicts: Tuple[DIVerdict, ...]

    @property
    def improvable_from(self) -> Optional[int]:
        """Smallest tested m_0 such that every tested m >= m_0 is Solvable."""
        m0 = None
        for verdict in reversed(self.verdicts):
            if not verdict.solvable:
                break
            m0 = verdict.m
        return m0

    def to_dict(self) -> Dict[str, object]:
        return {
            "epsilon_log": -self.s,
            "s": self.s,
            "m_range": list(self.m_range),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "improvable_from": self.improvable_from,
        }


def _check_epsilon(s: int) -> None:
    if s < 1:
        raise InvalidEpsilon(f"epsilon = e^-{s} exceeds 1/e; s must be >= 1")


def _decide(y: Sequence[LaurentSeries], s: int, m: int, n: int):
    """Kernel decision for |sum a_i y_i + a_0| < e^{-mn-s}, deg a_i <= m-s-1."""
    coeff_degree = m - s - 1
    if coeff_degree < 0:
        return None
    depth = m * n + s
    y = [series.extend(-depth - coeff_degree) for series in y]
    system = fractional_kernel(y, coeff_degree, depth)
    if not system.dimension:
        return None
    coeffs = system.first
    form = linear_form(y, coeffs)
    constant = -poly_part(form)
    return coeffs, constant, form


def di_decide_linear(y: Sequence[LaurentSeries], s: int, m: int) -> Tuple[DIVerdict, Optional[Tuple[Poly, ...]]]:
    """The n-dimensional linear decider; returns the verdict and (a_1..a_n, a_0) when Solvable."""

    _check_epsilon(s)
    y = list(y)
    decision = _decide(y, s, m, len(y))
    if decision is None:
        return DIVerdict(m, s, False, "kernel"), None
    coeffs, constant, form = decision
    err, exact = (form + _constant_series(constant, form)).magnitude()
    return DIVerdict(m, s, True, "kernel", None, err, exact), tuple(coeffs) + (constant,)


def _constant_series(constant: Poly, like: LaurentSeries) -> LaurentSeries:
    return series_from_poly(constant, like.floor)


def di_decide_poly(x: Vector, k: int, s: int, m: int) -> DIVerdict:
    """Exact decision: is there a nonzero P, total degree <= k, H~(P) < e^{m-s}, |P(x)| < e^{-mN-s}?"""

    _check_epsilon(s)
    basis = monomial_basis(len(x), k)
    y = list(veronese(x, k))
    decision = _decide(y, s, m, basis.N)
    if decision is None:
        logger.debug("di_decide_poly k=%d s=%d m=%d: Unsolvable", k, s, m)
        return DIVerdict(m, s, False, "kernel")
    coeffs, constant, _ = decision
    witness = LambdaPolynomial.from_basis(basis, constant, coeffs)
    err, exact = witness.evaluate(x).magnitude()
    if not err < -(m * basis.N + s):
        raise AssertionError(f"kernel witness {witness} misses the bound: deg P(x) = {err}")
    logger.debug("di_decide_poly k=%d s=%d m=%d: Solvable with %s", k, s, m, witness)
    return DIVerdict(m, s, True, "kernel", witness, err, exact)


def di_decide_linear_cf(alpha: LaurentSeries, s: int, m: int) -> DIVerdict:
    """d = k = 1 decision through the best-approximation property of convergents."""

    _check_epsilon(s)
    D = m - s - 1
    if D < 0:
        return DIVerdict(m, s, False, "cf")
    expansion = cf_expand(alpha, D + 1)
    best = best_convergent_at_degree(expansion, D)
    if best.err < -(m + s):
        field = alpha.field
        witness = LambdaPolynomial.from_mapping(field, 1, {(1,): best.q, (0,): -best.p})
        return DIVerdict(m, s, True, "cf", witness, best.err, best.err_exact)
    return DIVerdict(m, s, False, "cf")


def di_report(x: Vector, k: int, s: int, m_lo: int, m_hi: int) -> DIReport:
    if m_lo < 1 or m_hi < m_lo:
        raise InvalidArgument(f"bad m range {m_lo}..{m_hi}")
    verdicts = parallel_map(lambda m: di_decide_poly(x, k, s, m), range(m_lo, m_hi + 1))
    return DIReport(s, (m_lo, m_hi), tuple(verdicts))


@dataclass(frozen=True)
class SingularProbe:
    k: int
    s_max: int
    m_max: int
    reports: Tuple[DIReport, ...]

    @property
    def consistent_with_singular(self) -> bool:
        return all(r.improvable_from is not None for r in self.reports)

    def to_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "s_max": self.s_max,
            "m_max": self.m_max,
            "reports": [r.to_dict() for r in self.reports],
            "consistent_with_k_singular": self.consistent_with_singular,
        }


def singular_probe(x: Vector, k: int, s_max: int, m_max: int) -> SingularProbe:
    """Improvability at every epsilon = e^-s, s <= s_max; a finite check, never a proof of singularity."""
    reports = tuple(di_report(x, k, s, 1, m_max) for s in range(1, s_max + 1))
    return SingularProbe(k, s_max, m_max, reports)


@dataclass(frozen=True)
class DeterminantCheck:
    m: int
    value: Poly

    def to_dict(self) -> Dict[str, object]:
        return {"m": self.m, "determinant": self.value.to_literal(), "vanishes": self.value.is_zero()}


@dataclass(frozen=True)
class DichotomyReport:
    kind: str
    s: int
    m_max: int
    window: int
    report: DIReport
    cf_verdicts: Tuple[DIVerdict, ...]
    determinants: Tuple[DeterminantCheck, ...]
    stationary: Optional[bool]
    max_quotient_degree: Optional[int]
    caveats: Tuple[str, ...] = dc_field(default=())

    @property
    def unsolvable(self) -> List[int]:
        return [v.m for v in self.report.verdicts if not v.solvable]

    @property
    def deciders_agree(self) -> bool:
        return all(a.solvable == b.solvable for a, b in zip(self.report.verdicts, self.cf_verdicts))

    @property
    def recurrent_failures(self) -> bool:
        """An Unsolvable m in every length-``window`` stretch of the tested range."""
        failing = set(self.unsolvable)
        starts = range(1, self.m_max - self.window + 2)
        return bool(starts) and all(any(m in failing for m in range(w, w + self.window)) for w in starts)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "s": self.s,
            "m_max": self.m_max,
            "window": self.window,
            "improvable_from": self.report.improvable_from,
            "unsolvable": self.unsolvable,
            "recurrent_failures": self.recurrent_failures,
            "deciders_agree": self.deciders_agree,
            "determinants": [d.to_dict() for d in self.determinants],
            "stationary": self.stationary,
            "max_quotient_degree": self.max_quotient_degree,
            "verdicts": [v.to_dict() for v in self.report.verdicts],
        }


def _pair(witness: LambdaPolynomial) -> Tuple[Poly, Poly]:
    """(q, p) of the linear witness qX - p."""
    return witness.coefficient((1,)), -witness.constant_term()


def rationality_dichotomy_experiment(
    alpha: LaurentSeries, s: int, m_max: int, *, window: int = DEFAULT_WINDOW
) -> DichotomyReport:
    """Run both deciders over m = 1..m_max and replay the determinant argument on consecutive witnesses."""

    _check_epsilon(s)
    if window < 1:
        raise InvalidArgument("window must be positive")
    x = Vector((alpha,))
    report = di_report(x, 1, s, 1, m_max)
    cf_verdicts = tuple(parallel_map(lambda m: di_decide_linear_cf(alpha, s, m), range(1, m_max + 1)))
    determinants = []
    solved = [v for v in cf_verdicts if v.solvable]
    for first, second in zip(solved, solved[1:]):
        if second.m != first.m + 1:
            continue
        (q1, p1), (q2, p2) = _pair(first.witness), _pair(second.witness)
        determinants.append(DeterminantCheck(first.m, q1 * p2 - q2 * p1))
    stationary = None
    caveats: List[str] = []
    source = alpha.source
    if isinstance(source, RationalSource):
        eventual = [v for v in report.verdicts if report.improvable_from is not None and v.m >= report.improvable_from]
        stationary = all(
            (_pair(v.witness)[0] * source.numerator - _pair(v.witness)[1] * source.denominator).is_zero()
            for v in eventual
        )
        quotient_degree = None
    else:
        caveats.append(f"failures checked for recurrence in windows of length {window} up to m={m_max}")
        expansion = cf_expand(alpha, max(1, m_max), allow_partial=True)
        quotient_degree = max_quotient_degree(expansion, expansion.certified_terms) if expansion.certified_terms else None
    logger.info("Dichotomy experiment: kind=%s s=%d m_max=%d improvable_from=%s", alpha.kind, s, m_max, report.improvable_from)
    return DichotomyReport(
        alpha.kind, s, m_max, window, report, cf_verdicts, tuple(determinants), stationary, quotient_degree, tuple(caveats)
    )


def di_frequency(
    field: FiniteField, d: int, k: int, s: int, m: int, *, seed: int, count: int, floor: Optional[int] = None
) -> Dict[str, object]:
    """Empirical Solvable frequency of di_decide_poly over Haar samples of the unit ball."""

    _check_epsilon(s)
    N = monomial_basis(d, k).N
    floor = floor if floor is not None else -(m * N + m)
    cloud = sample_ball(UltraBall(zero_vector(field, d), 0), floor, seed, count)
    verdicts = parallel_map(lambda point: di_decide_poly(point, k, s, m).solvable, cloud.points)
    solvable = sum(verdicts)
    return {
        "d": d,
        "k": k,
        "s": s,
        "m": m,
        "count": count,
        "seed": seed,
        "floor": floor,
        "solvable": solvable,
        "frequency": str(Fraction(solvable, count)) if count else None,
    }
