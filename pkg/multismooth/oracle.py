"""Independent oracles used to cross-check the analysis pipelines."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Optional

import numpy as np

from .const import BJ_ORACLE_TOL, DEFAULT_TOL, LARGE_PRIMES, LP_MAX_CONSTRAINTS, LP_MAX_UNKNOWNS, RANK_RTOL
from .exceptions import (
    NotUnitNorm,
    PropertyViolation,
    ScopeExceeded,
    UnsupportedSpacePair,
    WrongSpaces,
    ZeroOperator,
)
from .linalg import dot, exact_sqrt, gauss_rank, modular_rank
from .operators import Operator, as_array, check_same_shape, norm_attainment_ext, operator_smoothness
from .simplex import LpStatus, SimplexTableau
from .spaces import (
    ArithmeticMode,
    EuclideanSpace,
    Field,
    PolyhedralSpace,
    dual_space,
    is_extreme_point,
    is_linf,
    leading_positive,
    norm,
)

_LOGGER = logging.getLogger(__name__)

BJ_GRID_POINTS = 401
GOLDEN_ITERATIONS = 100
COMPLEX_DIRECTIONS = 72
ORACLE_PRIME_COUNT = 3


@dataclass(frozen=True)
class FeasibilityProblem:
    """{S : |T + S| <= 1 and |T - S| <= 1} as |f(Sv)| <= 1 - |f(Tv)|.

    One constraint row per canonical (vertex, facet) pair; the row holds the
    coefficients f_i v_j of the entries S_ij, flattened row-major.
    """

    shape: tuple[int, int]
    rows: tuple[tuple[Fraction, ...], ...]
    bounds: tuple[Fraction, ...]

    @property
    def unknowns(self) -> int:
        return self.shape[0] * self.shape[1]


def _require_unit_polyhedral(operator: Operator) -> None:
    if not isinstance(operator.domain, PolyhedralSpace) or not isinstance(operator.codomain, PolyhedralSpace):
        raise WrongSpaces("Extreme contractions are decided between polyhedral spaces")
    if operator.is_zero():
        raise NotUnitNorm("The zero operator is not on the unit sphere")
    value = norm_attainment_ext(operator).norm_value
    if value != 1:
        raise NotUnitNorm(f"Operator norm is {value}, expected exactly 1")


def feasibility_problem(operator: Operator) -> FeasibilityProblem:
    """Constraints of the perturbations S keeping T +- S in the unit ball."""
    _require_unit_polyhedral(operator)
    shape = (operator.codomain.dim, operator.domain.dim)
    vertices = [v for v in operator.domain.vertices if leading_positive(v)]
    facets = [f for f in operator.codomain.facets if leading_positive(f)]
    rows, bounds = [], []
    for vertex in vertices:
        image = operator.apply(vertex)
        for functional in facets:
            rows.append(tuple(fi * vj for fi in functional for vj in vertex))
            bounds.append(1 - abs(dot(functional, image)))
    problem = FeasibilityProblem(shape, tuple(rows), tuple(bounds))
    if problem.unknowns > LP_MAX_UNKNOWNS or 2 * len(rows) > LP_MAX_CONSTRAINTS:
        raise ScopeExceeded(
            f"{problem.unknowns} unknowns and {2 * len(rows)} constraints exceed the exact LP bounds"
        )
    return problem


def extreme_contraction_witness(operator: Operator) -> Optional[tuple[tuple[Fraction, ...], ...]]:
    """A nonzero S with |T +- S| <= 1, or None when T is extreme."""
    problem = feasibility_problem(operator)
    size = problem.unknowns
    # S = P - N with P, N >= 0
    constraints, bounds = [], []
    for row, bound in zip(problem.rows, problem.bounds):
        constraints.append(list(row) + [-v for v in row])
        constraints.append([-v for v in row] + list(row))
        bounds.extend((bound, bound))
    for k in range(size):
        objective = [Fraction(0)] * (2 * size)
        objective[k], objective[size + k] = Fraction(1), Fraction(-1)
        result = SimplexTableau(constraints, bounds, objective).solve()
        if result.status is LpStatus.UNBOUNDED:
            raise PropertyViolation("Perturbation region is unbounded")
        if result.value > 0:
            flat = [p - q for p, q in zip(result.solution[:size], result.solution[size:])]
            rows, cols = problem.shape
            witness = tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows))
            _LOGGER.debug("Entry %s of S reaches %s, T is not extreme", k, result.value)
            return witness
    return None


def extreme_contraction_lp(operator: Operator) -> bool:
    """T is extreme iff every entry of S is forced to 0."""
    return extreme_contraction_witness(operator) is None


def extreme_contraction_smoothness(operator: Operator) -> bool:
    """At least 6 attaining vertices, all mapped onto vertices of B_Y.

    The verdict is checked against the order of smoothness being 6.
    """
    if not is_linf(operator.domain, 3) or not isinstance(operator.codomain, PolyhedralSpace) or operator.codomain.dim != 2:
        raise WrongSpaces("The criterion is stated for l_inf^3 into a polygonal plane")
    _require_unit_polyhedral(operator)
    attainment = norm_attainment_ext(operator)
    enough = len(attainment.attaining_vertices) >= 6
    onto_vertices = all(is_extreme_point(operator.codomain, image) for image in attainment.images)
    verdict = enough and onto_vertices
    order = operator_smoothness(operator).order
    if verdict != (order == 6):
        raise PropertyViolation(
            f"Criterion says {'extreme' if verdict else 'not extreme'} but the order of smoothness is {order}",
            {"order": order, "attaining": len(attainment.attaining_vertices)},
        )
    return verdict


def _oracle_primes(count: int = ORACLE_PRIME_COUNT) -> list[int]:
    rng = np.random.default_rng()
    return [int(p) for p in rng.choice(LARGE_PRIMES, size=count, replace=False)]


def _exact_rank(rows: list[tuple]) -> int:
    ranks = set()
    for prime in _oracle_primes():
        try:
            ranks.add(modular_rank(rows, prime))
        except ZeroDivisionError:
            ranks.add(None)
    if len(ranks) == 1 and None not in ranks:
        return ranks.pop()
    _LOGGER.debug("Modular ranks disagree (%s), confirming exactly", ranks)
    return gauss_rank(rows)


def brute_rank_oracle(operator: Operator) -> int:
    """Order of smoothness recomputed without the operator-analysis pipeline.

    Every vertex is evaluated against every dual vertex, antipodal pairs are
    kept, and functionals are flattened column-major.
    """
    if operator.is_zero():
        raise ZeroOperator("The zero operator has no order of smoothness")
    domain, codomain = operator.domain, operator.codomain
    if isinstance(domain, EuclideanSpace):
        raise UnsupportedSpacePair("Euclidean domains are handled by the Hilbert analysis")
    if isinstance(codomain, EuclideanSpace) and codomain.field is Field.COMPLEX:
        raise UnsupportedSpacePair("Complex codomains are handled by the Hilbert analysis")
    vertices = list(reversed(domain.vertices))
    images = [tuple(dot(row, v) for row in operator.matrix) for v in vertices]

    if isinstance(codomain, PolyhedralSpace):
        dual_vertices = dual_space(codomain).vertices
        values = [[dot(f, image) for f in dual_vertices] for image in images]
        top = max(max(row) for row in values)
        rows = [
            tuple(f[i] * v[j] for j in range(domain.dim) for i in range(codomain.dim))
            for v, row in zip(vertices, values)
            for f, value in zip(dual_vertices, row)
            if value == top
        ]
        return _exact_rank(rows)

    if operator.mode is ArithmeticMode.EXACT:
        squares = [sum((c * c for c in image), Fraction(0)) for image in images]
        top = max(squares)
        rows = [
            tuple(image[i] * v[j] for j in range(domain.dim) for i in range(codomain.dim))
            for v, image, square in zip(vertices, images, squares)
            if square == top
        ]
        _LOGGER.debug("Euclidean norm %s attained at %s vertices", exact_sqrt(top), len(rows))
        return _exact_rank(rows)

    array = np.array([[float(c) for c in image] for image in images])
    lengths = np.linalg.norm(array, axis=1)
    top = lengths.max()
    selected = [
        np.outer(array[k] / top, np.array([float(c) for c in vertices[k]])).ravel(order="F")
        for k in range(len(vertices))
        if abs(lengths[k] - top) <= DEFAULT_TOL
    ]
    stacked = np.array(selected)
    singular = np.linalg.svd(stacked, compute_uv=False)
    return int(np.count_nonzero(singular > RANK_RTOL * singular[0]))


def _polyhedral_operator_norm(operator: Operator, other: Operator, step: Fraction) -> Fraction:
    return max(
        norm(operator.codomain, tuple(a + step * b for a, b in zip(operator.apply(v), other.apply(v))))
        for v in operator.domain.vertices
    )


def bj_breakpoint_oracle(operator: Operator, other: Operator) -> bool:
    """Exact minimum of l -> |T + lA| over its breakpoints, compared with |T|."""
    check_same_shape(operator, other)
    if not isinstance(operator.domain, PolyhedralSpace) or not isinstance(operator.codomain, PolyhedralSpace):
        raise UnsupportedSpacePair("The breakpoint oracle needs polyhedral spaces")
    pieces = set()
    for vertex in operator.domain.vertices:
        if not leading_positive(vertex):
            continue
        image, direction = operator.apply(vertex), other.apply(vertex)
        for functional in operator.codomain.facets:
            pieces.add((dot(functional, image), dot(functional, direction)))
    pieces = sorted(pieces)
    candidates = {Fraction(0)}
    for index, (a1, b1) in enumerate(pieces):
        for a2, b2 in pieces[index + 1:]:
            if b1 != b2:
                candidates.add((a2 - a1) / (b1 - b2))
    base = _polyhedral_operator_norm(operator, other, Fraction(0))
    lowest = min(_polyhedral_operator_norm(operator, other, step) for step in candidates)
    _LOGGER.debug("Breakpoint oracle: %s candidates, minimum %s, |T| = %s", len(candidates), lowest, base)
    return lowest >= base


def _spectral_norm(array: np.ndarray) -> float:
    return float(np.linalg.norm(array, 2))


def _golden_minimum(function, low: float, high: float) -> float:
    ratio = (math.sqrt(5) - 1) / 2
    a, b = low, high
    c, d = b - ratio * (b - a), a + ratio * (b - a)
    fc, fd = function(c), function(d)
    for _ in range(GOLDEN_ITERATIONS):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = function(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = function(d)
    return min(fc, fd)


def _line_minimum(t_array: np.ndarray, a_array: np.ndarray, reach: float) -> float:
    def value(step: float) -> float:
        return _spectral_norm(t_array + step * a_array)

    grid = np.linspace(-reach, reach, BJ_GRID_POINTS)
    values = [value(step) for step in grid]
    best = int(np.argmin(values))
    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, len(grid) - 1)]
    return min(values[best], _golden_minimum(value, low, high))


def hilbert_bj_oracle(operator: Operator, other: Operator, tol: float = BJ_ORACLE_TOL) -> bool:
    """Numerical minimum of |T + lA|_2 compared with |T|_2 - tol.

    Complex spaces minimize along a fan of directions e^{it} in the
    scalar plane.
    """
    check_same_shape(operator, other)
    if not isinstance(operator.domain, EuclideanSpace) or not isinstance(operator.codomain, EuclideanSpace):
        raise UnsupportedSpacePair("The Hilbert orthogonality oracle needs Euclidean spaces")
    t_array, a_array = as_array(operator), as_array(other)
    base = _spectral_norm(t_array)
    size = _spectral_norm(a_array)
    if size == 0:
        return True
    reach = 2 * base / size
    if operator.domain.field is Field.COMPLEX:
        directions = [np.exp(1j * theta) for theta in np.linspace(0, math.pi, COMPLEX_DIRECTIONS, endpoint=False)]
    else:
        directions = [1.0]
    lowest = min(_line_minimum(t_array, a_array * d, reach) for d in directions)
    _LOGGER.debug("Hilbert BJ oracle: minimum %s, |T| = %s", lowest, base)
    return lowest >= base - tol
