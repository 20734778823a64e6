"""Exact, modular and numerical linear algebra on small dense matrices.

Exact routines work on rows of ``Fraction`` and never round. Rank is
computed by fraction-free (Bareiss) elimination after clearing row
denominators, so every intermediate value is an integer minor.
"""
from __future__ import annotations

from fractions import Fraction
import logging
from math import isqrt, lcm
from typing import Optional, Sequence

import numpy as np

from .const import RANK_RTOL
from .exceptions import MixedModeError

_LOGGER = logging.getLogger(__name__)

Vector = tuple
Rows = Sequence[Sequence[Fraction]]


def to_fraction(value) -> Fraction:
    """Convert an exact scalar; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MixedModeError(f"Boolean {value!r} is not a scalar")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise MixedModeError(f"Not a rational literal: {value!r}") from err
    raise MixedModeError(f"Value {value!r} is not exact")


def is_exact(value) -> bool:
    """Return True for values that belong to the exact mode."""
    return isinstance(value, (Fraction, int, np.integer)) and not isinstance(value, bool)


def exact_vector(values: Sequence) -> tuple[Fraction, ...]:
    """Convert a sequence to a tuple of fractions."""
    return tuple(to_fraction(v) for v in values)


def dot(a: Sequence, b: Sequence):
    """Plain inner product, no conjugation."""
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def outer_flat(y_star: Sequence, x: Sequence) -> tuple:
    """Flatten the rank-one matrix y*_i x_j row-major."""
    return tuple(yi * xj for yi in y_star for xj in x)


def _integer_rows(rows: Rows) -> list[list[int]]:
    """Scale each row by the lcm of its denominators."""
    result = []
    for row in rows:
        row = [to_fraction(v) for v in row]
        scale = lcm(*(v.denominator for v in row)) if row else 1
        result.append([int(v * scale) for v in row])
    return result


def bareiss_rank(rows: Rows) -> int:
    """Exact rank by fraction-free elimination."""
    matrix = _integer_rows(rows)
    if not matrix or not matrix[0]:
        return 0
    n_rows, n_cols = len(matrix), len(matrix[0])
    rank = 0
    previous = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        head = matrix[rank]
        for r in range(rank + 1, n_rows):
            row = matrix[r]
            lead = row[col]
            for c in range(col + 1, n_cols):
                row[c] = (row[c] * head[col] - lead * head[c]) // previous
            row[col] = 0
        previous = head[col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def modular_rank(rows: Rows, prime: int) -> int:
    """Rank of the matrix reduced modulo ``prime``.

    A denominator divisible by ``prime`` raises ZeroDivisionError; callers
    fall back to an exact computation.
    """
    matrix = []
    for row in rows:
        reduced = []
        for value in row:
            value = to_fraction(value)
            if value.denominator % prime == 0:
                raise ZeroDivisionError(f"denominator divisible by {prime}")
            reduced.append(value.numerator * pow(value.denominator, -1, prime) % prime)
        matrix.append(reduced)
    if not matrix or not matrix[0]:
        return 0
    n_rows, n_cols = len(matrix), len(matrix[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        inverse = pow(matrix[rank][col], -1, prime)
        head = [v * inverse % prime for v in matrix[rank]]
        matrix[rank] = head
        for r in range(n_rows):
            if r != rank and matrix[r][col]:
                factor = matrix[r][col]
                matrix[r] = [(a - factor * b) % prime for a, b in zip(matrix[r], head)]
        rank += 1
    return rank


def gauss_rank(rows: Rows) -> int:
    """Exact rank by ordinary elimination over the rationals."""
    return len(independent_rows(rows))


def independent_rows(rows: Rows) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    chosen = []
    for index, row in enumerate(rows):
        reduced = [to_fraction(v) for v in row]
        for pivot_col, basis_row in basis:
            factor = reduced[pivot_col]
            if factor:
                reduced = [a - factor * b for a, b in zip(reduced, basis_row)]
        pivot_col = next((c for c, v in enumerate(reduced) if v), None)
        if pivot_col is None:
            continue
        lead = reduced[pivot_col]
        reduced = [v / lead for v in reduced]
        # keep earlier rows reduced in the new pivot column
        basis = [
            (col, [a - brow[pivot_col] * b for a, b in zip(brow, reduced)])
            for col, brow in basis
        ]
        basis.append((pivot_col, reduced))
        chosen.append(index)
    return chosen


def solve(matrix: Rows, rhs: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Solve a square system exactly, or return None when singular."""
    size = len(matrix)
    aug = [[to_fraction(v) for v in row] + [to_fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(row[size] for row in aug)


def inverse(matrix: Rows) -> Optional[list[list[Fraction]]]:
    """Exact inverse of a square matrix, or None when singular."""
    size = len(matrix)
    columns = []
    for k in range(size):
        unit = [Fraction(int(i == k)) for i in range(size)]
        column = solve(matrix, unit)
        if column is None:
            return None
        columns.append(column)
    return [[columns[j][i] for j in range(size)] for i in range(size)]


def matmul(a: Rows, b: Rows) -> list[list[Fraction]]:
    """Exact matrix product."""
    return [
        [sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def transpose(matrix: Sequence[Sequence]) -> tuple[tuple, ...]:
    """Transpose a row-major matrix."""
    return tuple(zip(*matrix)) if matrix else ()


def numeric_rank(rows, rtol: float = RANK_RTOL) -> int:
    """Numerical rank with a relative singular-value threshold."""
    if isinstance(rows, np.ndarray):
        array = rows
    else:
        array = np.asarray(rows, dtype=complex if _has_complex(rows) else float)
    if array.size == 0:
        return 0
    singular = np.linalg.svd(array, compute_uv=False)
    if singular.size == 0 or singular[0] == 0:
        return 0
    return int(np.count_nonzero(singular > rtol * singular[0]))


def numeric_independent_rows(rows, rtol: float = RANK_RTOL) -> list[int]:
    """Greedy independent subset under the numerical rank threshold."""
    chosen: list[int] = []
    for index in range(len(rows)):
        if numeric_rank([rows[i] for i in chosen + [index]], rtol) > len(chosen):
            chosen.append(index)
    return chosen


def _has_complex(rows) -> bool:
    return any(isinstance(v, complex) for row in rows for v in row)


def exact_sqrt(value: Fraction):
    """Return the rational square root when it exists, else a float."""
    value = to_fraction(value)
    if value < 0:
        raise ValueError("negative square")
    num, den = value.numerator, value.denominator
    root_num, root_den = _isqrt_exact(num), _isqrt_exact(den)
    if root_num is not None and root_den is not None:
        return Fraction(root_num, root_den)
    return float(value) ** 0.5


def _isqrt_exact(value: int) -> Optional[int]:
    root = isqrt(value)
    return root if root * root == value else None
