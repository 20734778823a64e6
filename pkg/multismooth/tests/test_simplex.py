"""Tests for the exact simplex."""
from fractions import Fraction as F

import pytest

from multismooth.exceptions import ValidationError
from multismooth.simplex import LpStatus, SimplexTableau


def feasible(constraints, bounds, solution):
    return all(sum(a * x for a, x in zip(row, solution)) <= b for row, b in zip(constraints, bounds)) and all(
        x >= 0 for x in solution
    )


def test_small_problem():
    """Test max x + y on a truncated box."""
    constraints = [[1, 0], [0, 1], [1, 1]]
    bounds = [2, 3, 4]
    result = SimplexTableau(constraints, bounds, [1, 1]).solve()
    assert result.status is LpStatus.OPTIMAL
    assert result.value == 4
    assert sum(result.solution) == 4
    assert feasible(constraints, bounds, result.solution)
    assert all(isinstance(x, F) for x in result.solution)


def test_degenerate_problem_terminates():
    """Test a classic cycling example: Bland's rule reaches the optimum 5/4."""
    constraints = [
        [F(1, 4), -8, -1, 9],
        [F(1, 2), -12, F(-1, 2), 3],
        [0, 0, 1, 0],
    ]
    bounds = [0, 0, 1]
    objective = [F(3, 4), -20, F(1, 2), -6]
    result = SimplexTableau(constraints, bounds, objective).solve()
    assert result.status is LpStatus.OPTIMAL
    assert result.value == F(5, 4)
    assert result.solution == (1, 0, 1, 0)
    assert result.pivots > 0


def test_unbounded():
    """Test an objective that grows without bound."""
    result = SimplexTableau([[-1]], [1], [1]).solve()
    assert result.status is LpStatus.UNBOUNDED


def test_optimal_at_origin():
    """Test a problem whose slack basis is already optimal."""
    result = SimplexTableau([[1, 1]], [1], [-1, -2]).solve()
    assert result.status is LpStatus.OPTIMAL
    assert result.value == 0
    assert result.pivots == 0


def test_invalid_tableaux():
    """Test the size and sign checks."""
    with pytest.raises(ValidationError):
        SimplexTableau([[1, 0]], [-1], [1, 1])
    with pytest.raises(ValidationError):
        SimplexTableau([[1]], [1], [1, 1])
