"""Exact linear algebra over F_q (table-driven numpy elimination) and rank over F_q(T)."""

from __future__ import annotations

import itertools
import logging
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from utils.errors import EnumerationLimitExceeded
from utils.field_core import FiniteField
from utils.series_ring import Poly

logger = logging.getLogger(__name__)


def row_reduce(matrix: np.ndarray, field: FiniteField) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form; pivots are taken lowest column first."""

    R = np.array(matrix, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    rows, cols = R.shape
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        (hits,) = np.nonzero(R[row:, col])
        if hits.size == 0:
            continue
        found = row + int(hits[0])
        if found != row:
            R[[row, found]] = R[[found, row]]
        R[row] = mul[inv[R[row, col]], R[row]]
        factors = R[:, col].copy()
        factors[row] = 0
        (targets,) = np.nonzero(factors)
        if targets.size:
            scaled = mul[neg[factors[targets]][:, None], R[row][None, :]]
            R[targets] = add[R[targets], scaled]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(matrix: np.ndarray, field: FiniteField) -> int:
    if np.asarray(matrix).size == 0:
        return 0
    return len(row_reduce(matrix, field)[1])


def kernel_basis(matrix: np.ndarray, field: FiniteField) -> List[np.ndarray]:
    """Kernel basis indexed by free columns in increasing order.

    The vector for free column f has x_f = 1 and every other free variable 0,
    so the first basis vector is the canonical kernel element.
    """

    matrix = np.asarray(matrix, dtype=np.int64)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        R, pivots = np.zeros((0, cols), dtype=np.int64), []
    else:
        R, pivots = row_reduce(matrix, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = np.zeros(cols, dtype=np.int64)
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = field.neg_table[R[i, free]]
        basis.append(v)
    return basis


def span_elements(basis: Sequence[np.ndarray], field: FiniteField, limit: int) -> Iterator[np.ndarray]:
    """Every nonzero F_q-combination of ``basis`` (q^dim - 1 vectors)."""

    if not basis:
        return
    total = field.q ** len(basis) - 1
    if total > limit:
        raise EnumerationLimitExceeded(f"span of dimension {len(basis)} over F_{field.q} has {total} elements (limit {limit})")
    stacked = np.stack(basis)
    add, mul = field.add_table, field.mul_table
    for scalars in itertools.product(range(field.q), repeat=len(basis)):
        if not any(scalars):
            continue
        acc = np.zeros(stacked.shape[1], dtype=np.int64)
        for c, v in zip(scalars, stacked):
            if c:
                acc = add[acc, mul[c, v]]
        yield acc


def polynomial_rank(rows: Sequence[Sequence[Poly]]) -> int:
    """Rank over F_q(T) of a matrix with entries in F_q[T] (fraction-free Bareiss elimination)."""

    M = [list(r) for r in rows]
    if not M or not M[0]:
        return 0
    field = M[0][0].field
    m, n = len(M), len(M[0])
    zero = Poly.zero(field)
    prev = Poly.one(field)
    r = 0
    for col in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if not M[i][col].is_zero()), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        p = M[r][col]
        for i in range(r + 1, m):
            lead = M[i][col]
            for j in range(col + 1, n):
                M[i][j] = (p * M[i][j] - lead * M[r][j]) // prev
            M[i][col] = zero
        prev = p
        r += 1
    logger.debug("Polynomial matrix %dx%d has rank %d", m, n, r)
    return r


class KernelSystem:
    """Kernel of the fractional-part system of sum_j q_j y_j.

    Unknowns are the F_q-coefficients of q_1..q_n (degree <= coeff_degree),
    column ``j * (coeff_degree + 1) + i`` holding the T^i coefficient of q_j.
    Rows ask the coefficients of sum_j q_j y_j at degrees -1..-depth to
    vanish, plus (with ``poly_cap``) the coefficients above ``poly_cap``.
    """

    def __init__(self, field: FiniteField, n: int, coeff_degree: int, matrix: np.ndarray):
        self.field = field
        self.n = n
        self.coeff_degree = coeff_degree
        self.rows, self.cols = matrix.shape
        self.basis = kernel_basis(matrix, field)
        self.rank = self.cols - len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def first(self) -> "Tuple[Poly, ...] | None":
        return self.combination(self.basis[0]) if self.basis else None

    def combination(self, vector: np.ndarray) -> Tuple[Poly, ...]:
        width = self.coeff_degree + 1
        return tuple(
            Poly(self.field, [int(c) for c in vector[j * width:(j + 1) * width]]) for j in range(self.n)
        )

    def elements(self, limit: int) -> Iterator[Tuple[Poly, ...]]:
        for vector in span_elements(self.basis, self.field, limit):
            yield self.combination(vector)


def fractional_kernel(y: Sequence, coeff_degree: int, depth: int, *, poly_cap: "int | None" = None) -> KernelSystem:
    """Build and solve the kernel system for the series ``y`` (see ``KernelSystem``)."""

    field = y[0].field
    n = len(y)
    width = coeff_degree + 1
    lowest = -depth - coeff_degree
    extended = [series.extend(lowest) for series in y]
    ceilings = [s.ceiling for s in extended if s.ceiling is not None]
    top = max(ceilings, default=-1)
    rows: List[List[int]] = []
    coeffs = []
    for series in extended:
        span = range(max(top, 0), lowest - 1, -1)
        coeffs.append({g: series.coefficient(g) for g in span} if not series.exact_zero else {})
    degrees = list(range(-1, -depth - 1, -1))
    if poly_cap is not None:
        degrees = list(range(top + coeff_degree, poly_cap, -1)) + degrees
    for g in degrees:
        row = [0] * (n * width)
        for j, table in enumerate(coeffs):
            for i in range(width):
                row[j * width + i] = table.get(g - i, 0)
        rows.append(row)
    matrix = np.array(rows, dtype=np.int64).reshape(len(rows), n * width)
    system = KernelSystem(field, n, coeff_degree, matrix)
    logger.debug(
        "Kernel system: %d constraints, %d unknowns, kernel dimension %d", system.rows, system.cols, system.dimension
    )
    return system
