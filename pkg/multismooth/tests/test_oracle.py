"""Tests for the independent oracles."""
from fractions import Fraction as F

import pytest

from multismooth.const import ENV_SCOPE_MAX_DIM
from multismooth.exceptions import NotUnitNorm, ScopeExceeded, UnsupportedSpacePair, WrongSpaces
from multismooth.operators import Operator, operator_norm, operator_smoothness
from multismooth.oracle import (
    bj_breakpoint_oracle,
    brute_rank_oracle,
    extreme_contraction_lp,
    extreme_contraction_smoothness,
    extreme_contraction_witness,
    feasibility_problem,
    hilbert_bj_oracle,
)
from multismooth.spaces import linf_space

from .conftest import euclidean, matrix


def test_feasibility_problem(identity2):
    """Test the constraint rows of the identity of l_inf^2."""
    problem = feasibility_problem(identity2)
    assert problem.shape == (2, 2)
    assert problem.unknowns == 4
    assert len(problem.rows) == 4
    assert all(bound == 0 for bound in problem.bounds)


def test_half_diagonal_is_not_extreme(half_diagonal, linf2):
    """Test that diag(1, 1/2) can be perturbed in both directions."""
    witness = extreme_contraction_witness(half_diagonal)
    assert witness is not None
    assert any(v != 0 for row in witness for v in row)
    perturbation = Operator(witness, linf2, linf2)
    assert operator_norm(half_diagonal.combined(perturbation, 1)) <= 1
    assert operator_norm(half_diagonal.combined(perturbation, -1)) <= 1
    assert not extreme_contraction_lp(half_diagonal)


def test_identity_is_extreme(identity2):
    """Test that an isometry of l_inf^2 is extreme."""
    assert extreme_contraction_lp(identity2)


def test_projection_is_extreme(projection):
    """Test the three-way agreement on the projection of l_inf^3."""
    assert extreme_contraction_lp(projection)
    assert extreme_contraction_smoothness(projection)
    assert operator_smoothness(projection).order == 6


def test_rank_one_is_not_extreme(linf3, linf2):
    """Test x (1, 0) from l_inf^3 into l_inf^2."""
    operator = Operator(matrix((1, 0, 0), (0, 0, 0)), linf3, linf2)
    assert not extreme_contraction_lp(operator)
    assert not extreme_contraction_smoothness(operator)
    assert operator_smoothness(operator).order == 3


def test_extreme_preconditions(identity2, rank_one_euclidean):
    """Test the unit-norm and space requirements."""
    with pytest.raises(NotUnitNorm):
        extreme_contraction_lp(identity2.scaled(2))
    with pytest.raises(WrongSpaces):
        extreme_contraction_lp(rank_one_euclidean)
    with pytest.raises(WrongSpaces):
        extreme_contraction_smoothness(identity2)


def test_lp_scope(monkeypatch):
    """Test that oversized problems are refused."""
    monkeypatch.setenv(ENV_SCOPE_MAX_DIM, "5")
    space = linf_space(5)
    identity = Operator(tuple(tuple(F(int(i == j)) for j in range(5)) for i in range(5)), space, space)
    with pytest.raises(ScopeExceeded):
        feasibility_problem(identity)


def test_brute_rank_oracle_agrees(half_diagonal, identity2, projection, rank_one_euclidean, rank_two_euclidean):
    """Test the brute oracle against the pipeline on the reference operators."""
    for operator in (half_diagonal, identity2, projection, rank_one_euclidean, rank_two_euclidean):
        assert brute_rank_oracle(operator) == operator_smoothness(operator).order


def test_brute_rank_oracle_approx(linf3, plane):
    """Test the floating path of the brute oracle."""
    operator = Operator(((0.6, 0, 0), (0.8, 0, 0)), linf3, plane)
    assert brute_rank_oracle(operator) == 3


def test_bj_breakpoint_oracle(half_diagonal, identity2, linf2):
    """Test the breakpoint oracle on the reference pairs."""
    assert bj_breakpoint_oracle(half_diagonal, Operator(matrix((0, 0), (0, 1)), linf2, linf2))
    assert not bj_breakpoint_oracle(identity2, identity2)
    assert bj_breakpoint_oracle(identity2, Operator(matrix((1, 0), (0, -1)), linf2, linf2))


def test_bj_breakpoint_oracle_needs_polyhedral_spaces(rank_one_euclidean):
    """Test the space requirement."""
    with pytest.raises(UnsupportedSpacePair):
        bj_breakpoint_oracle(rank_one_euclidean, rank_one_euclidean)


def test_hilbert_bj_oracle():
    """Test the line search on real reference pairs."""
    operator = euclidean([(1, 0), (0, "1/2")])
    assert hilbert_bj_oracle(operator, euclidean([(0, 0), (0, 1)]))
    assert not hilbert_bj_oracle(operator, euclidean([(1, 0), (0, 1)]))
    assert hilbert_bj_oracle(operator, euclidean([(0, 0), (0, 0)]))
