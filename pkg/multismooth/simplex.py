"""Exact rational simplex in dictionary form with Bland's rule.

Solves  max c.z  subject to  A z <= b,  z >= 0  with b >= 0, so the slack
basis is feasible from the start and no first phase is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
from typing import Sequence

from .exceptions import ValidationError

_LOGGER = logging.getLogger(__name__)


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Fraction
    solution: tuple[Fraction, ...]
    pivots: int


class SimplexTableau:
    """Dictionary x_B = b - A x_N, z = value + c x_N.

    Variables 0..n-1 are the structural ones, n..n+m-1 the slacks.
    """

    def __init__(self, constraints: Sequence[Sequence], bounds: Sequence, objective: Sequence):
        self.m = len(constraints)
        self.n = len(objective)
        if any(len(row) != self.n for row in constraints) or len(bounds) != self.m:
            raise ValidationError("Constraint matrix, bounds and objective disagree in size")
        self.A = [[Fraction(v) for v in row] for row in constraints]
        self.b = [Fraction(v) for v in bounds]
        if any(v < 0 for v in self.b):
            raise ValidationError("The slack basis needs nonnegative bounds")
        self.c = [Fraction(v) for v in objective]
        self.value = Fraction(0)
        self.nb_vars = list(range(self.n))
        self.b_vars = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        piv = self.A[i][j]
        row = [Fraction(1) / piv if col == j else v / piv for col, v in enumerate(self.A[i])]
        self.b[i] /= piv
        self.A[i] = row
        for k in range(self.m):
            if k == i:
                continue
            factor = self.A[k][j]
            if factor == 0:
                continue
            self.A[k] = [
                -factor / piv if col == j else v - factor * row[col] for col, v in enumerate(self.A[k])
            ]
            self.b[k] -= factor * self.b[i]
        delta = self.c[j]
        self.value += delta * self.b[i]
        self.c = [-delta / piv if col == j else v - delta * row[col] for col, v in enumerate(self.c)]
        self.nb_vars[j], self.b_vars[i] = self.b_vars[i], self.nb_vars[j]
        self.pivots += 1

    def bland_step(self) -> str:
        candidates = [(self.nb_vars[j], j) for j in range(self.n) if self.c[j] > 0]
        if not candidates:
            return LpStatus.OPTIMAL
        _, j = min(candidates)
        rows = [(self.b[i] / self.A[i][j], self.b_vars[i], i) for i in range(self.m) if self.A[i][j] > 0]
        if not rows:
            return LpStatus.UNBOUNDED
        _, _, i = min(rows)
        self.pivot(i, j)
        return "go_on"

    def solve(self) -> LpResult:
        while True:
            status = self.bland_step()
            if status in (LpStatus.OPTIMAL, LpStatus.UNBOUNDED):
                break
        solution = [Fraction(0)] * self.n
        for i, var in enumerate(self.b_vars):
            if var < self.n:
                solution[var] = self.b[i]
        _LOGGER.debug("Simplex %s after %s pivots, value %s", status.value, self.pivots, self.value)
        return LpResult(LpStatus(status), self.value, tuple(solution), self.pivots)
