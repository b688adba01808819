"""Constructive Dirichlet solvers: the linear form |sum y_j q_j - p| and the polynomial form |P(x)|.

Both reduce to one F_q-linear system (``utils.linalg.fractional_kernel``):
the fractional part of sum_j q_j y_j has to vanish at degrees -1..-depth.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config.settings import get_settings
from utils.errors import EnumerationLimitExceeded, InvalidArgument, PrecisionIndeterminate
from utils.exponents import LambdaPolynomial, height_H, height_Ht, monomial_basis, veronese
from utils.linalg import fractional_kernel
from utils.series_ring import BOTTOM, LaurentSeries, LogAbs, Poly, Vector, log_max, poly_part, series_from_poly

logger = logging.getLogger(__name__)

MODES = ("H", "Ht")


@dataclass(frozen=True)
class LinearSolution:
    q: Tuple[Poly, ...]
    p: Poly
    err: LogAbs
    err_exact: bool
    case: str
    n: int
    m: int
    k: int

    @property
    def bound(self) -> int:
        """The residual must satisfy err < bound = n(k - m)."""
        return self.n * (self.k - self.m)

    def to_dict(self) -> Dict[str, object]:
        return {
            "q": [c.to_literal() for c in self.q],
            "p": self.p.to_literal(),
            "err_log": self.err.to_json(),
            "err_exact": self.err_exact,
            "bound_log": self.bound,
            "case": self.case,
            "k": self.k,
            "m": self.m,
        }


@dataclass(frozen=True)
class PolySolution:
    poly: LambdaPolynomial
    mode: str
    k: int
    m: int
    N: int
    height: LogAbs
    height_tilde: LogAbs
    err: LogAbs
    err_exact: bool
    c_log: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "poly": self.poly.to_literal(),
            "mode": self.mode,
            "k": self.k,
            "m": self.m,
            "N": self.N,
            "height_log": self.height.to_json(),
            "height_tilde_log": self.height_tilde.to_json(),
            "err_log": self.err.to_json(),
            "err_exact": self.err_exact,
            "c_log": self.c_log,
            "bound_log": self.c_log - self.m * self.N,
        }


def linear_form(y: Sequence[LaurentSeries], q: Sequence[Poly]) -> LaurentSeries:
    acc = y[0] * q[0]
    for series, c in zip(y[1:], q[1:]):
        acc = acc + series * c
    return acc


def degree_bound(y: Sequence[LaurentSeries]) -> int:
    """k = max(0, deg y_1, ..., deg y_n)."""
    return max([0] + [s.log_abs().value for s in y if not s.log_abs().is_bottom()])


def solve_linear(y: Sequence[LaurentSeries], m: int) -> LinearSolution:
    """Nonzero (q, p) with |sum y_j q_j - p| < e^{n(k-m)} and |p|, max |q_j| <= e^m."""

    y = list(y)
    if not y:
        raise InvalidArgument("solve_linear needs at least one series")
    if m < 1:
        raise InvalidArgument("m must be positive")
    field = y[0].field
    n = len(y)
    k = degree_bound(y)
    zero = Poly.zero(field)
    if m < k:
        q = tuple(zero for _ in y)
        p, case = Poly.one(field), "m<k"
    elif m == k:
        q = (Poly.one(field),) + tuple(zero for _ in y[1:])
        p, case = poly_part(y[0]), "m=k"
    else:
        shift = m - k
        y = [s.extend(-(n + 1) * shift) for s in y]
        system = fractional_kernel(y, shift, n * shift)
        assert system.dimension >= n
        q = system.first
        p, case = poly_part(linear_form(y, q)), "kernel"
    residual = linear_form(y, q) - series_from_poly(p, min(s.floor for s in y))
    err, exact = residual.magnitude()
    solution = LinearSolution(q, p, err, exact, case, n, m, k)
    _verify_linear(solution)
    logger.debug("solve_linear n=%d m=%d k=%d case=%s err=%s", n, m, k, case, err)
    return solution


def _verify_linear(solution: LinearSolution) -> None:
    if not solution.err < solution.bound:
        raise PrecisionIndeterminate(
            f"residual degree {solution.err} is not below {solution.bound}; supply deeper floors"
        )
    if solution.p.log_abs > solution.m or log_max([c.log_abs for c in solution.q]) > solution.m:
        raise PrecisionIndeterminate("solution heights exceed e^m; the inputs lack precision")


def _poly_system(x: Vector, k: int, m: int, mode: str):
    """(basis, y, kernel system, c_log) behind solve_poly; system is None when mode H falls outside the kernel case."""
    basis = monomial_basis(len(x), k)
    y = list(veronese(x, k))
    N = basis.N
    if mode == "H":
        kappa = degree_bound(y)
        if m <= kappa:
            return basis, y, None, N * kappa
        shift = m - kappa
        y = [s.extend(-(N + 1) * shift) for s in y]
        return basis, y, fractional_kernel(y, shift, N * shift), N * kappa
    y = [s.extend(-m * N - m) for s in y]
    return basis, y, fractional_kernel(y, m, m * N), 0


def _poly_solution(
    x: Vector,
    basis,
    y: Sequence[LaurentSeries],
    coeffs: Sequence[Poly],
    mode: str,
    k: int,
    m: int,
    c_log: int,
    constant: Optional[Poly] = None,
) -> Optional[PolySolution]:
    """The witness for one kernel element, or None when its bounds are not certified."""
    if constant is None:
        constant = -poly_part(linear_form(y, coeffs))
    poly = LambdaPolynomial.from_basis(basis, constant, coeffs)
    err, exact = poly.evaluate(x).magnitude()
    solution = PolySolution(
        poly=poly,
        mode=mode,
        k=k,
        m=m,
        N=basis.N,
        height=height_H(poly),
        height_tilde=height_Ht(poly) if poly.nonconstant() else BOTTOM,
        err=err,
        err_exact=exact,
        c_log=c_log,
    )
    bounded = solution.height if mode == "H" else solution.height_tilde
    if bounded > m or not err < c_log - m * basis.N:
        return None
    return solution


def solve_poly(x: Vector, k: int, m: int, mode: str = "Ht") -> PolySolution:
    """Nonzero P of total degree <= k with height <= e^m and |P(x)| < c(x) e^{-mN}.

    Mode ``Ht`` bounds H~(P) and achieves c = 1; mode ``H`` bounds H(P) and
    achieves c = e^{N kappa}, kappa = max(0, deg M_i(x)).
    """

    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    basis, y, system, c_log = _poly_system(x, k, m, mode)
    if system is None:
        linear = solve_linear(y, m)
        solution = _poly_solution(x, basis, y, linear.q, mode, k, m, c_log, -linear.p)
    else:
        solution = _poly_solution(x, basis, y, system.first, mode, k, m, c_log)
    if solution is None:
        raise PrecisionIndeterminate(f"solve_poly m={m} could not certify its bounds at the available precision")
    logger.debug("solve_poly mode=%s k=%d m=%d N=%d err=%s", mode, k, m, basis.N, solution.err)
    return solution


def _kernel_witnesses(x: Vector, k: int, m: int, mode: str) -> Iterator[PolySolution]:
    """solve_poly's witness first, then the other kernel elements at the same m."""
    yield solve_poly(x, k, m, mode)
    basis, y, system, c_log = _poly_system(x, k, m, mode)
    if system is None:
        return
    candidates = itertools.chain(
        (system.combination(v) for v in system.basis[1:]),
        system.elements(get_settings().enumeration_limit),
    )
    try:
        for coeffs in candidates:
            solution = _poly_solution(x, basis, y, coeffs, mode, k, m, c_log)
            if solution is not None:
                yield solution
    except EnumerationLimitExceeded:
        logger.debug("enumerate_witnesses m=%d: kernel of dimension %d too large to span", m, system.dimension)


def enumerate_witnesses(
    x: Vector, k: int, count: int, mode: str = "Ht", *, max_m: Optional[int] = None
) -> List[PolySolution]:
    """``count`` solutions, pairwise distinct up to F_q-scalars, for increasing m.

    At each m the canonical solution comes first, then the remaining kernel
    elements (up to FFDIOPH_ENUMERATION_LIMIT), so rational points, whose
    canonical witness never changes, still yield ``count`` witnesses.
    """

    if count < 1:
        raise InvalidArgument("count must be positive")
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    max_m = max_m or 4 * count + 8
    found: Dict[str, PolySolution] = {}
    for m in range(1, max_m + 1):
        for solution in _kernel_witnesses(x, k, m, mode):
            key = solution.poly.normalized().to_literal()
            if key in found:
                continue
            found[key] = solution
            if len(found) == count:
                return list(found.values())
    raise PrecisionIndeterminate(f"only {len(found)} distinct witnesses up to m={max_m}")
