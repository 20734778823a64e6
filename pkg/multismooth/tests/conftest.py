"""Shared spaces and operators."""
from fractions import Fraction
import json
import logging

import pytest

from multismooth.operators import Operator
from multismooth.spaces import EuclideanSpace, Field, l1_space, linf_space, validate_polyhedral

F = Fraction


def matrix(*rows):
    return tuple(tuple(F(v) if isinstance(v, (int, str)) else v for v in row) for row in rows)


@pytest.fixture(autouse=True)
def package_logger():
    """Restore the package logger after the CLI reconfigures it."""
    logger = logging.getLogger("multismooth")
    handlers, level = list(logger.handlers), logger.level
    yield logger
    logger.handlers = handlers
    logger.setLevel(level)


@pytest.fixture
def linf2():
    return linf_space(2)


@pytest.fixture
def linf3():
    return linf_space(3)


@pytest.fixture
def l1_2():
    return l1_space(2)


@pytest.fixture
def rectangle():
    """Unit ball conv{+-(2,1), +-(2,-1)}."""
    return validate_polyhedral([(2, 1), (2, -1), (-2, 1), (-2, -1)])


@pytest.fixture
def plane():
    return EuclideanSpace(2)


@pytest.fixture
def half_diagonal(linf2):
    """diag(1, 1/2) on l_inf^2."""
    return Operator(matrix((1, 0), (0, "1/2")), linf2, linf2)


@pytest.fixture
def identity2(linf2):
    return Operator(matrix((1, 0), (0, 1)), linf2, linf2)


@pytest.fixture
def projection(linf3, linf2):
    """(x, y, z) -> (x, y) from l_inf^3 onto l_inf^2."""
    return Operator(matrix((1, 0, 0), (0, 1, 0)), linf3, linf2)


@pytest.fixture
def rank_one_euclidean(linf3, plane):
    """x * (3/5, 4/5) into the Euclidean plane."""
    return Operator(matrix(("3/5", 0, 0), ("4/5", 0, 0)), linf3, plane)


@pytest.fixture
def rank_two_euclidean(linf3, plane):
    """((x + y)/2, (x - y)/2) into the Euclidean plane."""
    return Operator(matrix(("1/2", "1/2", 0), ("1/2", "-1/2", 0)), linf3, plane)


def euclidean(rows, dim=None, scalar_field=Field.REAL):
    rows = matrix(*rows)
    domain = EuclideanSpace(len(rows[0]), scalar_field)
    codomain = EuclideanSpace(dim or len(rows), scalar_field)
    return Operator(rows, domain, codomain)


@pytest.fixture
def write_json(tmp_path):
    """Write a payload to a file and return its path."""

    def write(payload, name="payload.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write
