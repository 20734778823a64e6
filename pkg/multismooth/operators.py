"""Linear operators between finite-dimensional spaces.

Smoothness of a unit-norm operator T is the dimension of the span of
Ext J(T) = {y* (x) x : x in M_T n Ext(B_X), y* in Ext J(Tx)}, each pair
represented by the flattened matrix y*_i x_j.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
import logging
from typing import Optional, Sequence

import numpy as np

from .const import (
    CASE_I_A,
    CASE_I_B,
    CASE_II,
    CASE_III,
    CASE_IV,
    CASE_ORDERS,
    CASE_REDUCED,
    DEFAULT_TOL,
    LARGE_PRIMES,
)
from .exceptions import (
    MixedModeError,
    NotNormalized,
    PropertyViolation,
    ScopeExceeded,
    ShapeMismatch,
    UnsupportedSpacePair,
    ValidationError,
    WrongSpaces,
    ZeroOperator,
)
from .linalg import (
    bareiss_rank,
    dot,
    exact_sqrt,
    independent_rows,
    is_exact,
    modular_rank,
    numeric_independent_rows,
    numeric_rank,
    outer_flat,
    transpose,
)
from .spaces import (
    ArithmeticMode,
    EuclideanSpace,
    Field,
    PolyhedralSpace,
    Space,
    dual_space,
    is_linf,
    leading_positive,
    norm,
    point_smoothness,
    squared_norm,
    support_face,
)

_LOGGER = logging.getLogger(__name__)

# Canonical labelling of the cube vertices, one per antipodal pair
LINF3_LABELS = (
    (Fraction(1), Fraction(1), Fraction(1)),
    (Fraction(-1), Fraction(1), Fraction(1)),
    (Fraction(-1), Fraction(-1), Fraction(1)),
    (Fraction(1), Fraction(-1), Fraction(1)),
)


@dataclass(frozen=True)
class Operator:
    """Matrix of a linear map, rows indexed by codomain coordinates."""

    matrix: tuple[tuple, ...]
    domain: Space
    codomain: Space

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.matrix)
        if len(rows) != self.codomain.dim or any(len(row) != self.domain.dim for row in rows):
            shape = (len(rows), len(rows[0]) if rows else 0)
            raise ShapeMismatch(
                f"Matrix of shape {shape} does not map dimension {self.domain.dim} to {self.codomain.dim}"
            )
        object.__setattr__(self, "matrix", _normalize_entries(rows, self.domain, self.codomain))

    @property
    def mode(self) -> ArithmeticMode:
        """Exact when every entry is rational."""
        if all(isinstance(v, Fraction) for row in self.matrix for v in row):
            return ArithmeticMode.EXACT
        return ArithmeticMode.APPROX

    @property
    def is_complex(self) -> bool:
        return any(isinstance(v, complex) for row in self.matrix for v in row)

    def apply(self, x: Sequence) -> tuple:
        """Image of a vector."""
        return tuple(dot(row, x) for row in self.matrix)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def scaled(self, factor) -> "Operator":
        """Return factor * T on the same spaces."""
        return Operator(tuple(tuple(v * factor for v in row) for row in self.matrix), self.domain, self.codomain)

    def combined(self, other: "Operator", factor) -> "Operator":
        """Return T + factor * A."""
        check_same_shape(self, other)
        matrix = tuple(
            tuple(a + factor * b for a, b in zip(row, other_row))
            for row, other_row in zip(self.matrix, other.matrix)
        )
        return Operator(matrix, self.domain, self.codomain)


def _normalize_entries(rows, domain: Space, codomain: Space) -> tuple[tuple, ...]:
    values = [v for row in rows for v in row]
    if all(is_exact(v) for v in values):
        return tuple(tuple(Fraction(v) for v in row) for row in rows)
    if any(isinstance(v, Fraction) and v.denominator != 1 for v in values):
        raise MixedModeError("Rational and floating entries mixed in one matrix")
    if isinstance(codomain, PolyhedralSpace):
        raise MixedModeError("An operator into a polyhedral space needs exact entries")
    if any(isinstance(v, complex) for v in values):
        if not (
            isinstance(domain, EuclideanSpace)
            and domain.field is Field.COMPLEX
            and codomain.field is Field.COMPLEX
        ):
            raise ValidationError("Complex entries need complex Euclidean domain and codomain")
        return tuple(tuple(complex(v) for v in row) for row in rows)
    return tuple(tuple(float(v) for v in row) for row in rows)


@dataclass(frozen=True)
class NormAttainment:
    """M_T n Ext(B_X) together with the operator norm."""

    norm_value: object
    attaining_vertices: tuple[tuple, ...]
    images: tuple[tuple, ...]
    mode: ArithmeticMode
    tolerance: Optional[float] = None
    norm_squared: Optional[Fraction] = None


@dataclass(frozen=True)
class ExtJPair:
    """One element y* (x) x of Ext J(T).

    ``direction`` is the vector the rank is computed on; it differs from
    ``y_star`` only on the exact Euclidean path where y* = Tx/|T| may be
    irrational.
    """

    x: tuple
    y_star: tuple
    direction: tuple

    @property
    def functional(self) -> tuple:
        """Flattened rank-one matrix used for rank computations."""
        return outer_flat(self.direction, self.x)


@dataclass(frozen=True)
class SmoothnessReport:
    """Order of smoothness of an operator with a witness basis."""

    order: int
    witness_pairs: tuple[ExtJPair, ...]
    mode: ArithmeticMode
    norm_value: object = None
    attaining_count: int = 0
    case_label: Optional[str] = None
    s1_size: Optional[int] = None
    predicted_order: Optional[int] = None
    consistent: Optional[bool] = None


@dataclass(frozen=True)
class CubeCodomainSmoothness:
    """Order of T into l_inf^n read off the adjoint."""

    order: int
    attaining_rows: tuple[int, ...]
    multiplicities: tuple[int, ...]


def check_same_shape(first: Operator, second: Operator) -> None:
    """Both operators must act between the same spaces."""
    if first.domain != second.domain or first.codomain != second.codomain:
        raise ShapeMismatch("Operators act between different spaces")


def as_array(operator: Operator) -> np.ndarray:
    """Floating copy of the matrix."""
    convert = complex if operator.is_complex else float
    return np.array([[convert(v) for v in row] for row in operator.matrix])


def _require_supported_pair(operator: Operator) -> None:
    if isinstance(operator.domain, EuclideanSpace):
        raise UnsupportedSpacePair(
            f"{operator.domain.label} -> {operator.codomain.label}: "
            "a Euclidean domain has a continuum of attaining vectors, use the Hilbert analysis"
        )
    if isinstance(operator.codomain, EuclideanSpace) and operator.codomain.field is Field.COMPLEX:
        raise UnsupportedSpacePair("Complex codomains are handled by the Hilbert analysis")


def operator_norm(operator: Operator):
    """Largest norm of an image of an extreme point of B_X."""
    if operator.is_zero():
        raise ZeroOperator("The zero operator has no norm attainment structure")
    if isinstance(operator.domain, EuclideanSpace):
        if isinstance(operator.codomain, PolyhedralSpace):
            raise UnsupportedSpacePair(
                f"{operator.domain.label} -> {operator.codomain.label} is out of scope"
            )
        return float(np.linalg.norm(as_array(operator), 2))
    return norm_attainment_ext(operator).norm_value


def norm_attainment_ext(operator: Operator, tol: float = DEFAULT_TOL) -> NormAttainment:
    """Extreme points of B_X where T attains its norm."""
    if operator.is_zero():
        raise ZeroOperator("The zero operator has no norm attainment structure")
    _require_supported_pair(operator)
    vertices = operator.domain.vertices
    images = [operator.apply(v) for v in vertices]
    codomain = operator.codomain

    if isinstance(codomain, PolyhedralSpace):
        norms = [norm(codomain, image) for image in images]
        top = max(norms)
        keep = [i for i, value in enumerate(norms) if value == top]
        result = NormAttainment(top, _pick(vertices, keep), _pick(images, keep), ArithmeticMode.EXACT)
    elif operator.mode is ArithmeticMode.EXACT:
        squares = [squared_norm(codomain, image) for image in images]
        top = max(squares)
        keep = [i for i, value in enumerate(squares) if value == top]
        result = NormAttainment(
            exact_sqrt(top), _pick(vertices, keep), _pick(images, keep), ArithmeticMode.EXACT, norm_squared=top
        )
    else:
        norms = [norm(codomain, image) for image in images]
        top = max(norms)
        keep = [i for i, value in enumerate(norms) if abs(value - top) <= tol]
        result = NormAttainment(top, _pick(vertices, keep), _pick(images, keep), ArithmeticMode.APPROX, tol)

    _LOGGER.debug(
        "Norm %s attained at %s of %s vertices (%s)",
        result.norm_value,
        len(result.attaining_vertices),
        len(vertices),
        result.mode.value,
    )
    return result


def _pick(items: Sequence, indices: Sequence[int]) -> tuple:
    return tuple(items[i] for i in indices)


def _unit_image(image: tuple, attainment: NormAttainment) -> tuple:
    value = attainment.norm_value
    if isinstance(value, Fraction):
        return tuple(v / value for v in image)
    return tuple(float(v) / value for v in image)


def ext_J_operator(operator: Operator, tol: float = DEFAULT_TOL) -> tuple[ExtJPair, ...]:
    """Canonical representatives of Ext J(T/|T|), one per antipodal pair."""
    attainment = norm_attainment_ext(operator, tol)
    codomain = operator.codomain
    pairs = []
    for x, image in zip(attainment.attaining_vertices, attainment.images):
        if not leading_positive(x):
            continue
        unit = _unit_image(image, attainment)
        if isinstance(codomain, PolyhedralSpace):
            for functional in support_face(codomain, unit).functionals:
                pairs.append(ExtJPair(x, functional, functional))
        elif attainment.mode is ArithmeticMode.EXACT:
            pairs.append(ExtJPair(x, unit, image))
        else:
            pairs.append(ExtJPair(x, unit, unit))
    _LOGGER.debug("Ext J(T): %s canonical pairs", len(pairs))
    return tuple(pairs)


def _cross_check_rank(rows: Sequence[Sequence], order: int) -> None:
    prime = int(np.random.default_rng().choice(LARGE_PRIMES))
    try:
        reduced = modular_rank(rows, prime)
    except ZeroDivisionError:
        _LOGGER.debug("Modular cross-check skipped, a denominator vanishes modulo %s", prime)
        return
    if reduced > order:
        raise PropertyViolation(f"Rank modulo {prime} is {reduced}, above the exact rank {order}")
    if reduced < order:
        _LOGGER.warning("Rank drops to %s modulo %s (exact rank %s)", reduced, prime, order)


def rank_with_witnesses(rows: Sequence[Sequence], mode: ArithmeticMode) -> tuple[int, list[int]]:
    """Rank of the stacked rows and the indices of an independent subset."""
    if mode is ArithmeticMode.EXACT:
        order = bareiss_rank(rows)
        _cross_check_rank(rows, order)
        witnesses = independent_rows(rows)
    else:
        order = numeric_rank(rows)
        witnesses = numeric_independent_rows(rows)
    if len(witnesses) != order:
        raise PropertyViolation(f"Witness basis has {len(witnesses)} elements, rank is {order}")
    return order, witnesses


def operator_smoothness(operator: Operator, tol: float = DEFAULT_TOL) -> SmoothnessReport:
    """Order of smoothness of T/|T| with a witness basis of Ext J(T)."""
    attainment = norm_attainment_ext(operator, tol)
    pairs = ext_J_operator(operator, tol)
    order, witnesses = rank_with_witnesses([pair.functional for pair in pairs], attainment.mode)
    bound = operator.domain.dim * operator.codomain.dim
    if not 1 <= order <= bound:
        raise PropertyViolation(f"Order {order} outside [1, {bound}]")

    report = SmoothnessReport(
        order=order,
        witness_pairs=tuple(pairs[i] for i in witnesses),
        mode=attainment.mode,
        norm_value=attainment.norm_value,
        attaining_count=len(attainment.attaining_vertices),
    )
    if is_linf(operator.domain, 3) and operator.codomain.dim == 2:
        case = _linf3_case(operator, attainment, tol)
        report = replace(report, **case, consistent=case["predicted_order"] == order)
        if not report.consistent:
            _LOGGER.warning(
                "Case %s predicts order %s, rank gives %s", report.case_label, report.predicted_order, order
            )
    _LOGGER.debug("Order of smoothness %s (%s witness pairs)", order, len(report.witness_pairs))
    return report


def _linf3_case(operator: Operator, attainment: NormAttainment, tol: float) -> dict:
    """Case label and predicted order for an operator from l_inf^3 into a plane."""
    codomain = operator.codomain
    units = {x: _unit_image(image, attainment) for x, image in zip(attainment.attaining_vertices, attainment.images)}

    if len(units) < 8:
        canonical = [x for x in attainment.attaining_vertices if leading_positive(x)]
        predicted = sum(point_smoothness(codomain, units[x], tol) for x in canonical)
        return {"case_label": CASE_REDUCED, "s1_size": None, "predicted_order": predicted}

    images = [units[x] for x in LINF3_LABELS]
    smooth = [point_smoothness(codomain, y, tol) == 1 for y in images]
    s1_size = sum(smooth)
    if s1_size == 4:
        functionals = [support_face(codomain, y, tol).functionals[0] for y in images]
        mode = ArithmeticMode.EXACT if all(isinstance(v, Fraction) for f in functionals for v in f) else ArithmeticMode.APPROX
        rank = bareiss_rank(functionals) if mode is ArithmeticMode.EXACT else numeric_rank(functionals)
        label = CASE_I_A if rank == 1 else CASE_I_B
    elif s1_size == 3:
        label = CASE_II
    elif s1_size == 2:
        label = CASE_III
    else:
        label = CASE_IV
    return {"case_label": label, "s1_size": s1_size, "predicted_order": CASE_ORDERS[label]}


def classify_linf3_case(operator: Operator, tol: float = DEFAULT_TOL, strict: bool = False) -> SmoothnessReport:
    """Case of the l_inf^3 -> two-dimensional classification.

    The rank-based order is always computed as well; with ``strict`` a
    disagreement raises PropertyViolation, otherwise it is reported through
    ``consistent``.
    """
    if not is_linf(operator.domain, 3) or operator.codomain.dim != 2:
        raise WrongSpaces(
            f"Case classification needs l_inf^3 -> a plane, got {operator.domain.label} -> {operator.codomain.label}"
        )
    attainment = norm_attainment_ext(operator, tol)
    if attainment.mode is ArithmeticMode.EXACT:
        normalized = attainment.norm_value == 1
    else:
        normalized = abs(attainment.norm_value - 1) <= tol
    if not normalized:
        raise NotNormalized(f"Operator norm is {attainment.norm_value}, expected 1")
    report = operator_smoothness(operator, tol)
    if strict and not report.consistent:
        raise PropertyViolation(
            f"Case {report.case_label} predicts order {report.predicted_order}, rank gives {report.order}",
            report,
        )
    return report


def adjoint(operator: Operator) -> Operator:
    """Transpose between the dual spaces."""
    domain, codomain = operator.domain, operator.codomain
    if isinstance(domain, PolyhedralSpace) and isinstance(codomain, PolyhedralSpace):
        return Operator(transpose(operator.matrix), dual_space(codomain), dual_space(domain))
    if isinstance(domain, EuclideanSpace) and isinstance(codomain, EuclideanSpace):
        matrix = tuple(tuple(v.conjugate() for v in row) for row in transpose(operator.matrix))
        return Operator(matrix, codomain, domain)
    raise ScopeExceeded(f"No computable dual pair for {domain.label} -> {codomain.label}")


def bj_orthogonal(operator: Operator, other: Operator) -> bool:
    """Birkhoff-James orthogonality T _|_ A on a polyhedral pair.

    |T + lA| is the maximum of the affine maps l -> f(Tv) + l f(Av) over
    vertices v and facet functionals f. T is orthogonal to A exactly when
    the slopes of the pieces active at l = 0 have both signs available.
    """
    check_same_shape(operator, other)
    if not isinstance(operator.domain, PolyhedralSpace) or not isinstance(operator.codomain, PolyhedralSpace):
        raise UnsupportedSpacePair("The exact orthogonality test needs polyhedral spaces")

    pieces = []
    for vertex in operator.domain.vertices:
        image, direction = operator.apply(vertex), other.apply(vertex)
        for functional in operator.codomain.facets:
            pieces.append((dot(functional, image), dot(functional, direction)))
    top = max(value for value, _ in pieces)
    slopes = [slope for value, slope in pieces if value == top]
    orthogonal = min(slopes) <= 0 <= max(slopes)
    _LOGGER.debug("BJ test: %s active pieces, slopes in [%s, %s]", len(slopes), min(slopes), max(slopes))
    return orthogonal


def smoothness_via_adjoint(operator: Operator) -> CubeCodomainSmoothness:
    """Order of T into l_inf^n from M_{T*} n Ext(B_{l_1^n}).

    T* e_i is the i-th row of T; the attaining extreme points of l_1^n are
    the +-e_i whose row has the largest dual norm, and the orders add up.
    """
    if not is_linf(operator.codomain) or not isinstance(operator.domain, PolyhedralSpace):
        raise WrongSpaces("The adjoint shortcut needs a polyhedral domain and an l_inf^n codomain")
    if operator.is_zero():
        raise ZeroOperator("The zero operator has no norm attainment structure")
    dual_domain = dual_space(operator.domain)
    row_norms = [norm(dual_domain, row) for row in operator.matrix]
    top = max(row_norms)
    rows = tuple(i for i, value in enumerate(row_norms) if value == top)
    multiplicities = tuple(
        point_smoothness(dual_domain, tuple(v / top for v in operator.matrix[i])) for i in rows
    )
    return CubeCodomainSmoothness(sum(multiplicities), rows, multiplicities)
